#include "metcomp/base_topology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace metcomp {

std::string to_string(const BasePoint& y) {
  if (const auto* s = std::get_if<std::string>(&y)) return *s;
  return std::get<Rational>(y).str();
}

namespace {

std::string set_string(const std::vector<std::string>& members) {
  std::string s = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) s += ",";
    s += members[i];
  }
  return s + "}";
}

bool is_subset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

FiniteBase FiniteBase::make(std::vector<std::string> points, std::vector<std::vector<std::string>> basis) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!seen.insert(points[i]).second) {
      throw InputError("duplicate base point id '" + points[i] + "'", "/base/points/" + std::to_string(i));
    }
  }
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto& set = basis[k];
    for (const auto& id : set) {
      if (!seen.count(id)) {
        throw InputError("basis set references unknown point '" + id + "'", "/base/basis/" + std::to_string(k));
      }
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return FiniteBase{std::move(points), std::move(basis)};
}

std::optional<std::size_t> FiniteBase::index_of(const std::string& id) const {
  const auto it = std::find(points.begin(), points.end(), id);
  if (it == points.end()) return std::nullopt;
  return static_cast<std::size_t>(it - points.begin());
}

bool contains(const BasicOpen& open, const BasePoint& y) {
  return std::visit(
      [&](const auto& o) -> bool {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, BasisSet>) {
          const auto* id = std::get_if<std::string>(&y);
          return id && std::binary_search(o.members.begin(), o.members.end(), *id);
        } else {
          const auto* q = std::get_if<Rational>(&y);
          return q && o.lo < *q && *q < o.hi;
        }
      },
      open);
}

std::string to_string(const BasicOpen& open) {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          return "Y";
        } else if constexpr (std::is_same_v<T, BasisSet>) {
          return set_string(o.members);
        } else {
          return "(" + o.lo.str() + "," + o.hi.str() + ")";
        }
      },
      open);
}

EnumeratedBase EnumeratedBase::one_point(std::string name) {
  EnumeratedBase b;
  b.kind_ = EnumeratedKind::one_point;
  b.name_ = std::move(name);
  return b;
}

EnumeratedBase EnumeratedBase::rational_order() {
  EnumeratedBase b;
  b.kind_ = EnumeratedKind::rational_order;
  return b;
}

bool EnumeratedBase::has_point(const BasePoint& y) const {
  if (kind_ == EnumeratedKind::one_point) {
    const auto* s = std::get_if<std::string>(&y);
    return s && *s == name_;
  }
  return std::holds_alternative<Rational>(y);
}

BasicOpen EnumeratedBase::basic_open(Index k) const {
  if (kind_ == EnumeratedKind::one_point) return WholeSpace{};
  const auto [i, j] = cantor_unpair(k);
  Rational a = enumerate_rational(i);
  Rational b = enumerate_rational(j);
  return OpenInterval{min(a, b), max(a, b)};
}

bool BaseSpace::has_point(const BasePoint& y) const {
  if (const auto* f = finite()) {
    const auto* id = std::get_if<std::string>(&y);
    return id && f->index_of(*id).has_value();
  }
  return enumerated()->has_point(y);
}

void BaseSpace::require_point(const BasePoint& y) const {
  if (!has_point(y)) throw InputError("unknown base point '" + to_string(y) + "'");
}

std::vector<BasicOpen> BaseSpace::neighborhood_basis(const BasePoint& y, Index budget) const {
  require_point(y);
  std::vector<BasicOpen> out;
  if (const auto* f = finite()) {
    for (std::size_t k = 0; k < f->basis.size(); ++k) {
      BasisSet set{k, f->basis[k]};
      if (contains(set, y)) out.emplace_back(std::move(set));
    }
    return out;
  }
  const auto* e = enumerated();
  if (e->kind() == EnumeratedKind::one_point) return {WholeSpace{}};
  for (Index k = 0; k < budget; ++k) {
    BasicOpen o = e->basic_open(k);
    if (contains(o, y)) out.push_back(std::move(o));
  }
  return out;
}

bool BaseSpace::is_basic_open(const BasicOpen& open) const {
  if (const auto* f = finite()) {
    const auto* set = std::get_if<BasisSet>(&open);
    return set && set->index < f->basis.size() && f->basis[set->index] == set->members;
  }
  if (enumerated()->kind() == EnumeratedKind::one_point) return std::holds_alternative<WholeSpace>(open);
  // Every interval with rational endpoints is enumerated for some k.
  return std::holds_alternative<OpenInterval>(open);
}

ValidationReport validate_basis(const FiniteBase& b) {
  ValidationReport report;
  for (const auto& p : b.points) {
    const bool covered = std::any_of(b.basis.begin(), b.basis.end(), [&](const auto& set) {
      return std::binary_search(set.begin(), set.end(), p);
    });
    if (!covered) report.add("uncovered", "point " + p + " lies in no basis set");
  }
  for (std::size_t i = 0; i < b.basis.size(); ++i) {
    for (std::size_t j = i + 1; j < b.basis.size(); ++j) {
      std::vector<std::string> meet;
      std::set_intersection(b.basis[i].begin(), b.basis[i].end(), b.basis[j].begin(), b.basis[j].end(),
                            std::back_inserter(meet));
      for (const auto& p : meet) {
        const bool refined = std::any_of(b.basis.begin(), b.basis.end(), [&](const auto& set) {
          return std::binary_search(set.begin(), set.end(), p) && is_subset(set, meet);
        });
        if (!refined) {
          report.add("intersection", "point " + p + " in " + set_string(b.basis[i]) + " and " +
                                         set_string(b.basis[j]) + " has no basis set inside the intersection");
        }
      }
    }
  }
  return report;
}

std::vector<std::vector<std::string>> all_opens_finite(const FiniteBase& b) {
  if (b.basis.size() > 24) throw InputError("too many basis sets to enumerate unions", "/base/basis");
  std::set<std::vector<std::string>> opens;
  const std::size_t count = std::size_t{1} << b.basis.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::set<std::string> u;
    for (std::size_t k = 0; k < b.basis.size(); ++k) {
      if (mask >> k & 1U) u.insert(b.basis[k].begin(), b.basis[k].end());
    }
    opens.emplace(u.begin(), u.end());
  }
  return {opens.begin(), opens.end()};
}

Rational enumerate_rational(Index i) {
  if (i == 0) return Rational(0);
  // Calkin–Wilf tree: walk the binary digits of m below the leading one.
  const Index m = (i + 1) / 2;
  mpz_class a = 1;
  mpz_class b = 1;
  const int top = 63 - std::countl_zero(m);
  for (int bit = top - 1; bit >= 0; --bit) {
    if ((m >> bit) & 1U) {
      a = a + b;
    } else {
      b = a + b;
    }
  }
  Rational q(mpq_class(a, b));
  return (i % 2 == 1) ? q : -q;
}

std::pair<Index, Index> cantor_unpair(Index k) {
  // w = floor((sqrt(8k+1) - 1) / 2), corrected for floating point error.
  auto w = static_cast<Index>((std::sqrt(8.0L * static_cast<long double>(k) + 1.0L) - 1.0L) / 2.0L);
  while (w * (w + 1) / 2 > k) --w;
  while ((w + 1) * (w + 2) / 2 <= k) ++w;
  const Index t = w * (w + 1) / 2;
  const Index j = k - t;
  return {w - j, j};
}

}  // namespace metcomp
