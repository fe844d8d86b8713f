#include "metcomp/finite_oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace metcomp {

namespace {

using Mask = FiniteView::Mask;

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins so that roots are canonical representatives.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

bool in_set(const std::vector<std::string>& sorted, const std::string& id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

std::vector<std::size_t> basis_containing(const FiniteBase& b, const std::string& y) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < b.basis.size(); ++k) {
    if (in_set(b.basis[k], y)) out.push_back(k);
  }
  return out;
}

/// x is eventually inside every f⁻¹(O), O basic around y.
bool tied_to(const FiniteInstance& m, std::size_t x, const std::vector<std::size_t>& opens_of_y) {
  return std::all_of(opens_of_y.begin(), opens_of_y.end(),
                     [&](std::size_t k) { return in_set(m.base.basis[k], m.fiber_id(x)); });
}

PointSet ids_of(const FiniteInstance& m, const std::vector<std::size_t>& idx) {
  PointSet s;
  for (const auto i : idx) s.insert(m.points[i]);
  return s;
}

std::vector<std::size_t> indices_of(const FiniteInstance& m, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) {
    const auto it = std::find(m.points.begin(), m.points.end(), id);
    if (it == m.points.end()) throw InputError("point '" + id + "' is not in the carrier");
    out.push_back(static_cast<std::size_t>(it - m.points.begin()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename F>
void for_each_nonempty_subset(const std::vector<std::size_t>& s, F&& f) {
  const std::size_t count = std::size_t{1} << s.size();
  // Ordered by size, then lexicographically by mask.
  std::vector<std::size_t> masks(count - 1);
  std::iota(masks.begin(), masks.end(), 1);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });
  for (const auto mask : masks) {
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask >> i & 1U) sub.push_back(s[i]);
    }
    if (!f(sub)) return;
  }
}

// ---- net side: exact pseudometric reasoning on the raw tables ----------
//
// For a finite tail T and r → 0, "B(x, r) ∩ f⁻¹(V) contains T" holds for
// every r > 0 iff d(x, t) = 0 for all t ∈ T.

bool sequence_converges_to(const FiniteInstance& m, const std::vector<std::size_t>& tail, std::size_t x) {
  const auto opens = basis_containing(m.base, m.fiber_id(x));
  for (const auto t : tail) {
    if (!m.dist[x][t].is_zero()) return false;
    for (const auto k : opens) {
      if (!in_set(m.base.basis[k], m.fiber_id(t))) return false;
    }
  }
  return true;
}

bool sequence_clusters_at(const FiniteInstance& m, const std::vector<std::size_t>& tail, std::size_t x) {
  const auto opens = basis_containing(m.base, m.fiber_id(x));
  return std::all_of(opens.begin(), opens.end(), [&](std::size_t k) {
    return std::any_of(tail.begin(), tail.end(), [&](std::size_t t) {
      return m.dist[x][t].is_zero() && in_set(m.base.basis[k], m.fiber_id(t));
    });
  });
}

// ---- filter side: topology through FiniteView masks ------------------------

void zero_diameter_subsets(const FiniteView& view, Mask allowed, std::size_t from, Mask current,
                           std::vector<Mask>& out) {
  for (std::size_t i = from; i < view.size(); ++i) {
    if (!(allowed >> i & 1U)) continue;
    bool compatible = true;
    for (std::size_t j = 0; j < view.size() && compatible; ++j) {
      if ((current >> j & 1U) && !view.dist(i, j).is_zero()) compatible = false;
    }
    if (!compatible) continue;
    const Mask next = current | (Mask{1} << i);
    out.push_back(next);
    zero_diameter_subsets(view, allowed, i + 1, next, out);
  }
}

ClusterLimit cluster_limit_in_view(const FiniteView& view, Mask a) {
  return ClusterLimit{view.to_set(view.closure(a)), view.to_set(view.limit_points(a))};
}

}  // namespace

// ---------------------------------------------------------- FiniteInstance

MappingPtr FiniteInstance::mapping() const {
  std::vector<std::string> fiber_ids;
  fiber_ids.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (fiber[i] >= base.points.size()) throw InputError("fiber index out of range", "/fiber_map");
    fiber_ids.push_back(base.points[fiber[i]]);
  }
  return std::make_shared<const MetricMapping>(MetricMapping::finite(base, points, std::move(fiber_ids), dist));
}

FiniteInstance FiniteInstance::from_mapping(const MetricMapping& m) {
  const auto* fb = m.base().finite();
  if (!fb || !m.carrier().is_finite()) throw InputError("finite oracle needs a finite carrier and a finite base");
  FiniteInstance inst;
  inst.base = *fb;
  inst.points = m.carrier().ids();
  for (const auto& id : inst.points) {
    inst.fiber.push_back(*fb->index_of(std::get<std::string>(m.fiber(id))));
  }
  inst.dist.assign(inst.points.size(), std::vector<Rational>(inst.points.size()));
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    for (std::size_t j = 0; j < inst.points.size(); ++j) inst.dist[i][j] = m.dist(inst.points[i], inst.points[j]);
  }
  return inst;
}

ValidationReport FiniteInstance::validate() const {
  ValidationReport report = validate_basis(base);
  const auto m = mapping();
  for (auto& v : validate_pseudometric(*m, 1).violations) report.violations.push_back(std::move(v));
  for (auto& v : validate_fiberwise_metric(*m, 1).violations) report.violations.push_back(std::move(v));
  return report;
}

// ------------------------------------------------------------ filter route

ClusterLimit cluster_and_limit_sets(const FiniteInstance& m, const PointSet& a) {
  if (a.empty()) throw InputError("cluster_and_limit_sets needs a nonempty set");
  const auto mp = m.mapping();
  const FiniteView view(*mp);
  return cluster_limit_in_view(view, view.to_mask(a));
}

Verdict is_complete_filter(const FiniteInstance& m) {
  const auto mp = m.mapping();
  const FiniteView view(*mp);
  for (const auto& y : m.base.points) {
    Mask tied = view.all();
    for (const auto& o : mp->base().neighborhood_basis(y)) tied &= view.preimage(std::get<BasisSet>(o).members);
    std::vector<Mask> candidates;
    zero_diameter_subsets(view, tied, 0, 0, candidates);
    std::sort(candidates.begin(), candidates.end(), [](Mask a, Mask b) {
      const int pa = std::popcount(a);
      const int pb = std::popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    const Mask fiber_y = view.preimage({y});
    for (const Mask a : candidates) {
      if ((view.closure(a) & fiber_y) == 0) {
        return Verdict{false, Certificate{y, view.to_set(a)}};
      }
    }
  }
  return Verdict{true, std::nullopt};
}

// --------------------------------------------------------------- net route

std::vector<std::vector<std::size_t>> zero_classes(const FiniteInstance& m) {
  DisjointSet ds(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m.dist[i][j].is_zero()) ds.unite(i, j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < m.size(); ++i) by_root[ds.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

Verdict is_complete_net(const FiniteInstance& m) {
  const auto classes = zero_classes(m);
  for (std::size_t yi = 0; yi < m.base.points.size(); ++yi) {
    const auto& y = m.base.points[yi];
    const auto opens = basis_containing(m.base, y);
    for (const auto& c : classes) {
      // Points a sequence tied to y may visit infinitely often inside class c.
      std::vector<std::size_t> realizable;
      for (const auto x : c) {
        if (tied_to(m, x, opens)) realizable.push_back(x);
      }
      if (realizable.empty()) continue;
      std::optional<Certificate> failure;
      for_each_nonempty_subset(realizable, [&](const std::vector<std::size_t>& tail) {
        bool converges = false;
        for (std::size_t x = 0; x < m.size() && !converges; ++x) {
          converges = m.fiber[x] == yi && sequence_converges_to(m, tail, x);
        }
        if (!converges) failure = Certificate{y, ids_of(m, tail)};
        return converges;
      });
      if (failure) return Verdict{false, failure};
    }
  }
  return Verdict{true, std::nullopt};
}

ClusterLimit net_cluster_and_limit(const FiniteInstance& m, const EventualSequence& s) {
  if (s.cycle.empty()) throw InputError("sequence needs a nonempty repeating part");
  indices_of(m, s.prefix);
  const auto tail = indices_of(m, s.cycle);
  ClusterLimit out;
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (sequence_clusters_at(m, tail, x)) out.cluster.insert(m.points[x]);
    if (sequence_converges_to(m, tail, x)) out.limit.insert(m.points[x]);
  }
  return out;
}

PrincipalFilter filter_of_net(const FiniteInstance& m, const EventualSequence& s) {
  if (s.cycle.empty()) throw InputError("sequence needs a nonempty repeating part");
  return PrincipalFilter{ids_of(m, indices_of(m, s.cycle))};
}

EventualSequence net_of_filter(const FiniteInstance& m, const PrincipalFilter& f) {
  if (f.min_set.empty()) throw InputError("filter needs a nonempty minimal set");
  std::vector<std::string> ids;
  for (const auto& p : f.min_set) ids.push_back(std::get<std::string>(p));
  const auto idx = indices_of(m, ids);
  for (const auto i : idx) {
    for (const auto j : idx) {
      if (!m.dist[i][j].is_zero()) {
        throw InputError("filter has positive diameter (d(" + m.points[i] + "," + m.points[j] + ") = " +
                         m.dist[i][j].str() + "); no Cauchy sequence realizes it");
      }
    }
  }
  EventualSequence s;
  for (const auto i : idx) s.cycle.push_back(m.points[i]);
  return s;
}

Verdict lemma2_check(const FiniteInstance& m) {
  const auto mp = m.mapping();
  const FiniteView view(*mp);
  const auto classes = zero_classes(m);
  for (std::size_t yi = 0; yi < m.base.points.size(); ++yi) {
    const auto& y = m.base.points[yi];
    const auto opens = basis_containing(m.base, y);
    const Mask fiber_y = view.preimage({y});
    for (const auto& c : classes) {
      std::vector<std::size_t> realizable;
      for (const auto x : c) {
        if (tied_to(m, x, opens)) realizable.push_back(x);
      }
      if (realizable.empty()) continue;
      std::optional<Certificate> failure;
      for_each_nonempty_subset(realizable, [&](const std::vector<std::size_t>& tail) {
        Mask a = 0;
        for (const auto t : tail) a |= Mask{1} << t;
        const bool same = (view.closure(a) & fiber_y) == (view.limit_points(a) & fiber_y);
        if (!same) failure = Certificate{y, ids_of(m, tail)};
        return same;
      });
      if (failure) return Verdict{false, failure};
    }
  }
  return Verdict{true, std::nullopt};
}

// -------------------------------------------------------------- completion

FiniteCompletion finite_completion(const FiniteInstance& m) {
  const auto classes = zero_classes(m);
  std::vector<std::size_t> class_of(m.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (const auto x : classes[c]) class_of[x] = c;
  }

  FiniteCompletion out;
  out.completed.base = m.base;
  std::vector<std::size_t> rep;  // class index of each completed point
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index_of;
  std::set<std::string> used(m.points.begin(), m.points.end());

  for (std::size_t yi = 0; yi < m.base.points.size(); ++yi) {
    const auto& y = m.base.points[yi];
    const auto opens = basis_containing(m.base, y);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto& members = classes[c];
      const bool present =
          std::any_of(members.begin(), members.end(), [&](std::size_t x) { return tied_to(m, x, opens); });
      if (!present) continue;
      const auto own = std::find_if(members.begin(), members.end(), [&](std::size_t x) { return m.fiber[x] == yi; });
      std::string name;
      if (own != members.end()) {
        name = m.points[*own];
      } else {
        name = "[" + m.points[members.front()] + "]@" + y;
        while (used.count(name)) name += "'";
        used.insert(name);
      }
      index_of[{c, yi}] = out.completed.points.size();
      out.completed.points.push_back(std::move(name));
      out.completed.fiber.push_back(yi);
      rep.push_back(c);
    }
  }
  const std::size_t n = out.completed.points.size();
  out.completed.dist.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.completed.dist[i][j] = m.dist[classes[rep[i]].front()][classes[rep[j]].front()];
    }
  }
  for (std::size_t x = 0; x < m.size(); ++x) out.embedding.push_back(index_of.at({class_of[x], m.fiber[x]}));
  return out;
}

bool embedding_is_isometric(const FiniteInstance& m, const FiniteCompletion& c) {
  if (c.embedding.size() != m.size()) return false;
  std::set<std::size_t> image(c.embedding.begin(), c.embedding.end());
  if (image.size() != m.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (c.completed.fiber_id(c.embedding[i]) != m.fiber_id(i)) return false;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!(c.completed.dist[c.embedding[i]][c.embedding[j]] == m.dist[i][j])) return false;
    }
  }
  return true;
}

bool embedding_is_dense(const FiniteCompletion& c) {
  const auto mp = c.completed.mapping();
  const FiniteView view(*mp);
  Mask image = 0;
  for (const auto e : c.embedding) image |= Mask{1} << e;
  for (std::size_t center = 0; center < view.size(); ++center) {
    for (const auto& r : view.radii()) {
      Mask ball = 0;
      for (std::size_t j = 0; j < view.size(); ++j) {
        if (view.dist(center, j) < r) ball |= Mask{1} << j;
      }
      for (const auto& v : c.completed.base.basis) {
        const Mask w = ball & view.preimage(v);
        if (w != 0 && (w & image) == 0) return false;
      }
    }
  }
  return true;
}

bool theorem3_crosscheck(const FiniteInstance& m) {
  const auto report = m.validate();
  if (!report.ok()) throw InputError("instance fails validation: " + report.summary());
  return is_complete_filter(m).holds == is_complete_net(m).holds;
}

// --------------------------------------------------------------- generator

FiniteInstance random_instance(std::uint64_t seed, std::size_t max_x, std::size_t max_y) {
  if (max_x < 1 || max_y < 1) throw InputError("random_instance needs max_x >= 1 and max_y >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t nx = uniform(1, max_x);
  const std::size_t ny = uniform(1, max_y);

  FiniteInstance inst;
  for (std::size_t i = 0; i < ny; ++i) inst.base.points.push_back("y" + std::to_string(i));
  for (std::size_t i = 0; i < nx; ++i) inst.points.push_back("x" + std::to_string(i));

  // Basis: random nonempty subsets, then cover and close under intersection.
  std::vector<std::vector<std::string>> basis;
  const std::size_t nb = uniform(1, ny + 1);
  for (std::size_t k = 0; k < nb; ++k) {
    const std::size_t mask = uniform(1, (std::size_t{1} << ny) - 1);
    std::vector<std::string> set;
    for (std::size_t i = 0; i < ny; ++i) {
      if (mask >> i & 1U) set.push_back(inst.base.points[i]);
    }
    std::sort(set.begin(), set.end());
    if (std::find(basis.begin(), basis.end(), set) == basis.end()) basis.push_back(std::move(set));
  }
  std::vector<std::string> all = inst.base.points;
  std::sort(all.begin(), all.end());
  for (const auto& p : all) {
    const bool covered = std::any_of(basis.begin(), basis.end(), [&](const auto& s) { return in_set(s, p); });
    if (!covered) {
      if (std::find(basis.begin(), basis.end(), all) == basis.end()) basis.push_back(all);
      break;
    }
  }
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t current = basis.size();
    for (std::size_t i = 0; i < current; ++i) {
      for (std::size_t j = i + 1; j < current; ++j) {
        std::vector<std::string> meet;
        std::set_intersection(basis[i].begin(), basis[i].end(), basis[j].begin(), basis[j].end(),
                              std::back_inserter(meet));
        if (!meet.empty() && std::find(basis.begin(), basis.end(), meet) == basis.end()) {
          basis.push_back(std::move(meet));
          grew = true;
        }
      }
    }
  }
  inst.base = FiniteBase::make(inst.base.points, std::move(basis));

  for (std::size_t i = 0; i < nx; ++i) inst.fiber.push_back(uniform(0, ny - 1));

  // Zero classes hold at most one point per fiber.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<std::size_t> open_classes;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const bool clash = std::any_of(classes[c].begin(), classes[c].end(),
                                     [&](std::size_t o) { return inst.fiber[o] == inst.fiber[x]; });
      if (!clash) open_classes.push_back(c);
    }
    if (!open_classes.empty() && uniform(0, 1) == 1) {
      const std::size_t c = open_classes[uniform(0, open_classes.size() - 1)];
      classes[c].push_back(x);
      class_of[x] = c;
    } else {
      class_of[x] = classes.size();
      classes.push_back({x});
    }
  }

  // Positive palette distances between classes, repaired by shortest paths.
  const std::vector<Rational> palette{Rational(1, 3), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2),
                                      Rational(5, 2)};
  const std::size_t nc = classes.size();
  std::vector<std::vector<Rational>> cd(nc, std::vector<Rational>(nc));
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t b = a + 1; b < nc; ++b) {
      cd[a][b] = cd[b][a] = palette[uniform(0, palette.size() - 1)];
    }
  }
  for (std::size_t k = 0; k < nc; ++k) {
    for (std::size_t a = 0; a < nc; ++a) {
      for (std::size_t b = 0; b < nc; ++b) {
        if (cd[a][k] + cd[k][b] < cd[a][b]) cd[a][b] = cd[a][k] + cd[k][b];
      }
    }
  }
  inst.dist.assign(nx, std::vector<Rational>(nx));
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nx; ++j) inst.dist[i][j] = cd[class_of[i]][class_of[j]];
  }
  return inst;
}

}  // namespace metcomp
