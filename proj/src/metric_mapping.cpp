#include "metcomp/metric_mapping.hpp"

#include <algorithm>
#include <numeric>

namespace metcomp {

std::string to_string(const CarrierPoint& x) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, Rational>) {
          return v.str();
        } else {
          return "(" + v.first.str() + "," + v.second.str() + ")";
        }
      },
      x);
}

std::string to_string(const PointSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    if (!first) out += ",";
    out += to_string(x);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------- Carrier

Carrier Carrier::finite(std::vector<std::string> ids) {
  Carrier c;
  c.kind_ = CarrierKind::finite;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!c.index_.emplace(ids[i], i).second) {
      throw InputError("duplicate carrier point id '" + ids[i] + "'", "/carrier/points/" + std::to_string(i));
    }
  }
  c.ids_ = std::move(ids);
  return c;
}

Carrier Carrier::rational_interval(Rational lo, Rational hi, bool lo_open, bool hi_open) {
  if (!(lo < hi)) throw InputError("rational_interval requires lo < hi", "/carrier");
  Carrier c;
  c.kind_ = CarrierKind::rational_interval;
  c.lo_ = std::move(lo);
  c.hi_ = std::move(hi);
  c.lo_open_ = lo_open;
  c.hi_open_ = hi_open;
  return c;
}

Carrier Carrier::rational_grid(Rational step, Rational lo, Rational hi) {
  if (step.sign() <= 0) throw InputError("rational_grid requires a positive step", "/carrier/step");
  if (hi < lo) throw InputError("rational_grid requires lo <= hi", "/carrier");
  Carrier c;
  c.kind_ = CarrierKind::rational_grid;
  c.step_ = std::move(step);
  c.lo_ = std::move(lo);
  c.hi_ = std::move(hi);
  return c;
}

namespace {

bool on_grid(const Rational& v, const Rational& lo, const Rational& hi, const Rational& step) {
  if (v < lo || hi < v) return false;
  const Rational k = (v - lo) / step;
  return k.mpq().get_den() == 1;
}

Index grid_side(const Rational& lo, const Rational& hi, const Rational& step) {
  const Rational span = (hi - lo) / step;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), span.mpq().get_num().get_mpz_t(), span.mpq().get_den().get_mpz_t());
  return static_cast<Index>(f.get_ui()) + 1;
}

}  // namespace

bool Carrier::contains(const CarrierPoint& x) const {
  switch (kind_) {
    case CarrierKind::finite: {
      const auto* id = std::get_if<std::string>(&x);
      return id && index_.count(*id) > 0;
    }
    case CarrierKind::rational_interval: {
      const auto* q = std::get_if<Rational>(&x);
      if (!q) return false;
      const bool above = lo_open_ ? lo_ < *q : lo_ <= *q;
      const bool below = hi_open_ ? *q < hi_ : *q <= hi_;
      return above && below;
    }
    case CarrierKind::rational_grid: {
      const auto* p = std::get_if<RationalPair>(&x);
      return p && on_grid(p->first, lo_, hi_, step_) && on_grid(p->second, lo_, hi_, step_);
    }
  }
  return false;
}

std::vector<CarrierPoint> Carrier::prefix(Index count) const {
  std::vector<CarrierPoint> out;
  switch (kind_) {
    case CarrierKind::finite:
      for (std::size_t i = 0; i < ids_.size() && out.size() < count; ++i) out.emplace_back(ids_[i]);
      break;
    case CarrierKind::rational_interval: {
      // Parameters t ∈ [0,1] by increasing denominator, mapped to lo + t(hi − lo).
      const Rational width = hi_ - lo_;
      if (!lo_open_ && out.size() < count) out.emplace_back(lo_);
      if (!hi_open_ && out.size() < count) out.emplace_back(hi_);
      for (long q = 2; out.size() < count; ++q) {
        for (long p = 1; p < q && out.size() < count; ++p) {
          if (std::gcd(p, q) != 1) continue;
          out.emplace_back(lo_ + Rational(p, q) * width);
        }
      }
      break;
    }
    case CarrierKind::rational_grid: {
      const Index side = grid_side(lo_, hi_, step_);
      const Index total = checked_mul(side, side);
      for (Index n = 0; n < total && out.size() < count; ++n) {
        const Rational a = lo_ + step_ * Rational::from_index(n / side);
        const Rational b = lo_ + step_ * Rational::from_index(n % side);
        out.emplace_back(RationalPair{a, b});
      }
      break;
    }
  }
  return out;
}

std::optional<std::size_t> Carrier::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ----------------------------------------------------------- MetricMapping

MetricMapping::MetricMapping(Carrier carrier, BaseSpace base, FiberFn fiber, DistFn dist,
                             std::optional<BasePoint> constant_fiber)
    : carrier_(std::move(carrier)),
      base_(std::move(base)),
      fiber_(std::move(fiber)),
      dist_(std::move(dist)),
      constant_fiber_(std::move(constant_fiber)) {
  if (constant_fiber_) base_.require_point(*constant_fiber_);
}

MetricMapping MetricMapping::finite(FiniteBase base, std::vector<std::string> ids,
                                    std::vector<std::string> fiber_ids,
                                    std::vector<std::vector<Rational>> matrix) {
  if (fiber_ids.size() != ids.size()) throw InputError("fiber table size mismatch", "/fiber_map");
  std::unordered_map<std::string, std::string> table;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!base.index_of(fiber_ids[i])) {
      throw InputError("fiber target '" + fiber_ids[i] + "' is not a base point", "/fiber_map/table/" + ids[i]);
    }
    table.emplace(ids[i], fiber_ids[i]);
  }
  auto dist = dist_table(ids, std::move(matrix));
  FiberFn fiber = [table = std::move(table)](const CarrierPoint& x) -> BasePoint {
    return table.at(std::get<std::string>(x));
  };
  return MetricMapping(Carrier::finite(std::move(ids)), BaseSpace(std::move(base)), std::move(fiber),
                       std::move(dist));
}

void MetricMapping::require_point(const CarrierPoint& x) const {
  if (!carrier_.contains(x)) throw InputError("point '" + to_string(x) + "' is not in the carrier");
}

BasePoint MetricMapping::fiber(const CarrierPoint& x) const {
  require_point(x);
  BasePoint y = fiber_(x);
  if (!base_.has_point(y)) {
    throw EvaluatorError("fiber(" + to_string(x) + ") = " + to_string(y) + " is not a base point");
  }
  return y;
}

Rational MetricMapping::dist(const CarrierPoint& a, const CarrierPoint& b) const {
  require_point(a);
  require_point(b);
  Rational r = dist_(a, b);
  if (r.sign() < 0) {
    throw EvaluatorError("dist(" + to_string(a) + "," + to_string(b) + ") = " + r.str() + " is negative");
  }
  return r;
}

std::vector<CarrierPoint> MetricMapping::sample(Index budget) const {
  if (carrier_.is_finite()) return carrier_.prefix(carrier_.ids().size());
  return carrier_.prefix(budget);
}

FiberFn fiber_constant(BasePoint y) {
  return [y = std::move(y)](const CarrierPoint&) { return y; };
}

FiberFn fiber_identity() {
  return [](const CarrierPoint& x) -> BasePoint {
    if (const auto* q = std::get_if<Rational>(&x)) return *q;
    throw EvaluatorError("identity fiber map needs rational carrier points, got " + to_string(x));
  };
}

DistFn dist_abs_diff() {
  return [](const CarrierPoint& a, const CarrierPoint& b) -> Rational {
    const auto* p = std::get_if<Rational>(&a);
    const auto* q = std::get_if<Rational>(&b);
    if (!p || !q) throw EvaluatorError("abs_diff needs rational carrier points");
    return (*p - *q).abs();
  };
}

DistFn dist_max_metric() {
  return [](const CarrierPoint& a, const CarrierPoint& b) -> Rational {
    if (const auto* p = std::get_if<RationalPair>(&a)) {
      const auto* q = std::get_if<RationalPair>(&b);
      if (!q) throw EvaluatorError("max_metric needs points of one kind");
      return max((p->first - q->first).abs(), (p->second - q->second).abs());
    }
    const auto* p = std::get_if<Rational>(&a);
    const auto* q = std::get_if<Rational>(&b);
    if (!p || !q) throw EvaluatorError("max_metric needs rational or rational-pair points");
    return (*p - *q).abs();
  };
}

DistFn dist_table(std::vector<std::string> ids, std::vector<std::vector<Rational>> matrix) {
  if (matrix.size() != ids.size()) throw InputError("distance matrix has wrong row count", "/distance/matrix");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    index.emplace(ids[i], i);
    if (matrix[i].size() != ids.size()) {
      throw InputError("distance matrix row has wrong length", "/distance/matrix/" + std::to_string(i));
    }
  }
  return [index = std::move(index), matrix = std::move(matrix)](const CarrierPoint& a, const CarrierPoint& b) {
    return matrix[index.at(std::get<std::string>(a))][index.at(std::get<std::string>(b))];
  };
}

// -------------------------------------------------------------- validators

namespace {

constexpr std::size_t kMaxReported = 64;

void add_capped(ValidationReport& r, std::size_t& dropped, std::string kind, std::string detail) {
  if (r.violations.size() < kMaxReported) {
    r.add(std::move(kind), std::move(detail));
  } else {
    ++dropped;
  }
}

}  // namespace

ValidationReport validate_pseudometric(const MetricMapping& m, Index budget) {
  if (budget < 1) throw InputError("validation budget must be >= 1");
  ValidationReport report;
  const auto pts = m.sample(budget);
  const std::size_t n = pts.size();
  std::vector<std::vector<std::optional<Rational>>> d(n, std::vector<std::optional<Rational>>(n));
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      try {
        d[i][j] = m.dist(pts[i], pts[j]);
      } catch (const EvaluatorError& e) {
        add_capped(report, dropped, "evaluator", e.what());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i][i] && !d[i][i]->is_zero()) {
      add_capped(report, dropped, "diagonal", "d(" + to_string(pts[i]) + "," + to_string(pts[i]) + ") = " + d[i][i]->str());
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d[i][j] && d[j][i] && !(*d[i][j] == *d[j][i])) {
        add_capped(report, dropped, "symmetry",
                   "d(" + to_string(pts[i]) + "," + to_string(pts[j]) + ") = " + d[i][j]->str() + " but d(" +
                       to_string(pts[j]) + "," + to_string(pts[i]) + ") = " + d[j][i]->str());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!d[i][k] || !d[i][j] || !d[j][k]) continue;
        if (*d[i][j] + *d[j][k] < *d[i][k]) {
          add_capped(report, dropped, "triangle",
                     "(" + to_string(pts[i]) + "," + to_string(pts[j]) + "," + to_string(pts[k]) + "): d = " +
                         d[i][k]->str() + " > " + d[i][j]->str() + " + " + d[j][k]->str());
        }
      }
    }
  }
  if (dropped > 0) report.add("truncated", std::to_string(dropped) + " further violations not listed");
  return report;
}

ValidationReport validate_fiberwise_metric(const MetricMapping& m, Index budget) {
  if (budget < 1) throw InputError("validation budget must be >= 1");
  ValidationReport report;
  const auto pts = m.sample(budget);
  std::vector<std::optional<BasePoint>> fib(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    try {
      fib[i] = m.fiber(pts[i]);
    } catch (const EvaluatorError& e) {
      report.add("evaluator", e.what());
    }
  }
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (!fib[i] || !fib[j] || !(*fib[i] == *fib[j])) continue;
      try {
        if (m.dist(pts[i], pts[j]).is_zero()) {
          add_capped(report, dropped, "fiber_zero",
                     "(" + to_string(pts[i]) + "," + to_string(pts[j]) + ") share fiber " + to_string(*fib[i]) +
                         " at distance 0");
        }
      } catch (const EvaluatorError& e) {
        add_capped(report, dropped, "evaluator", e.what());
      }
    }
  }
  if (dropped > 0) report.add("truncated", std::to_string(dropped) + " further violations not listed");
  return report;
}

PointSet fiber_preimage(const MetricMapping& m, const std::vector<BasePoint>& targets) {
  if (!m.carrier().is_finite()) throw InputError("fiber_preimage needs a finite carrier");
  PointSet out;
  for (const auto& id : m.carrier().ids()) {
    const BasePoint y = m.fiber(id);
    if (std::find(targets.begin(), targets.end(), y) != targets.end()) out.insert(id);
  }
  return out;
}

// -------------------------------------------------------------- FiniteView

FiniteView::FiniteView(const MetricMapping& m) {
  if (!m.carrier().is_finite()) throw InputError("finite view needs a finite carrier");
  const auto* fb = m.base().finite();
  if (!fb) throw InputError("finite view needs a finite base");
  base_ = *fb;
  ids_ = m.carrier().ids();
  if (ids_.size() > 64) throw InputError("finite view supports at most 64 carrier points");
  const std::size_t n = ids_.size();

  fiber_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fiber_[i] = *base_.index_of(std::get<std::string>(m.fiber(ids_[i])));
  }
  d_.assign(n, std::vector<Rational>(n));
  std::vector<Rational> values{Rational(0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d_[i][j] = m.dist(ids_[i], ids_[j]);
      values.push_back(d_[i][j]);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  // Realized positive values, midpoints between consecutive values, and one
  // radius past the largest so that the whole space appears as a ball.
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].sign() > 0) radii_.push_back(values[k]);
    if (k + 1 < values.size()) radii_.push_back((values[k] + values[k + 1]) / Rational(2));
  }
  radii_.push_back(values.back() + Rational(1));
  std::sort(radii_.begin(), radii_.end());

  std::vector<Mask> basis_mask(base_.basis.size(), 0);
  for (std::size_t k = 0; k < base_.basis.size(); ++k) {
    basis_mask[k] = preimage(base_.basis[k]);
  }
  nbhd_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& yi = base_.points[fiber_[i]];
    for (const auto& r : radii_) {
      Mask ball = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (d_[i][j] < r) ball |= Mask{1} << j;
      }
      for (std::size_t k = 0; k < base_.basis.size(); ++k) {
        if (std::binary_search(base_.basis[k].begin(), base_.basis[k].end(), yi)) {
          nbhd_[i].push_back(ball & basis_mask[k]);
        }
      }
    }
  }
}

FiniteView::Mask FiniteView::preimage(const std::vector<std::string>& base_points) const {
  Mask out = 0;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const std::string& yi = base_.points[fiber_[i]];
    if (std::find(base_points.begin(), base_points.end(), yi) != base_points.end()) out |= Mask{1} << i;
  }
  return out;
}

FiniteView::Mask FiniteView::to_mask(const PointSet& s) const {
  Mask out = 0;
  for (const auto& x : s) {
    const auto* id = std::get_if<std::string>(&x);
    const auto it = id ? std::find(ids_.begin(), ids_.end(), *id) : ids_.end();
    if (it == ids_.end()) throw InputError("point '" + to_string(x) + "' is not in the carrier");
    out |= Mask{1} << static_cast<std::size_t>(it - ids_.begin());
  }
  return out;
}

PointSet FiniteView::to_set(Mask m) const {
  PointSet out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (m >> i & 1U) out.insert(ids_[i]);
  }
  return out;
}

FiniteView::Mask FiniteView::closure(Mask a) const {
  Mask out = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    const bool adherent =
        std::all_of(nbhd_[i].begin(), nbhd_[i].end(), [a](Mask nb) { return (nb & a) != 0; });
    if (adherent) out |= Mask{1} << i;
  }
  return out;
}

FiniteView::Mask FiniteView::limit_points(Mask a) const {
  Mask out = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    const bool limit = std::all_of(nbhd_[i].begin(), nbhd_[i].end(), [a](Mask nb) { return (nb & a) == a; });
    if (limit) out |= Mask{1} << i;
  }
  return out;
}

PointSet closure_finite(const MetricMapping& m, const PointSet& a) {
  const FiniteView view(m);
  return view.to_set(view.closure(view.to_mask(a)));
}

}  // namespace metcomp
