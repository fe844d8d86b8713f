#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "metcomp/base_topology.hpp"
#include "metcomp/errors.hpp"
#include "metcomp/rational.hpp"

namespace metcomp {

struct RationalPair {
  Rational first;
  Rational second;
  friend bool operator==(const RationalPair&, const RationalPair&) = default;
  friend auto operator<=>(const RationalPair&, const RationalPair&) = default;
};

/// A point of the carrier X: a text id (finite carriers), an exact
/// rational (rational_interval) or a rational pair (rational_grid).
using CarrierPoint = std::variant<std::string, Rational, RationalPair>;
using PointSet = std::set<CarrierPoint>;

std::string to_string(const CarrierPoint& x);
std::string to_string(const PointSet& s);

enum class CarrierKind { finite, rational_interval, rational_grid };

/// Presentation of X. Countable kinds come with a total injective
/// enumeration used for prefix-sampled validation.
class Carrier {
 public:
  static Carrier finite(std::vector<std::string> ids);
  static Carrier rational_interval(Rational lo, Rational hi, bool lo_open = false, bool hi_open = false);
  /// Points (lo + i·step, lo + j·step) with both coordinates in [lo, hi].
  static Carrier rational_grid(Rational step, Rational lo, Rational hi);

  CarrierKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == CarrierKind::finite; }
  bool contains(const CarrierPoint& x) const;

  const std::vector<std::string>& ids() const { return ids_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  const Rational& step() const { return step_; }
  bool lo_open() const { return lo_open_; }
  bool hi_open() const { return hi_open_; }

  /// First `count` points of the enumeration (fewer if the carrier is
  /// smaller).
  std::vector<CarrierPoint> prefix(Index count) const;

  /// Finite: index of id, if present.
  std::optional<std::size_t> index_of(const std::string& id) const;

 private:
  CarrierKind kind_ = CarrierKind::finite;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  Rational lo_, hi_, step_;
  bool lo_open_ = false;
  bool hi_open_ = false;
};

using FiberFn = std::function<BasePoint(const CarrierPoint&)>;
using DistFn = std::function<Rational(const CarrierPoint&, const CarrierPoint&)>;

/// f: X → Y together with a pseudometric d on X. Evaluators must be pure.
class MetricMapping {
 public:
  /// `constant_fiber`, when given, declares that `fiber` is the constant
  /// map onto that point (used to tie sequences without a finite tail).
  MetricMapping(Carrier carrier, BaseSpace base, FiberFn fiber, DistFn dist,
                std::optional<BasePoint> constant_fiber = std::nullopt);

  /// Finite carrier with fiber and distance tables (rows follow `ids`).
  static MetricMapping finite(FiniteBase base, std::vector<std::string> ids, std::vector<std::string> fiber_ids,
                              std::vector<std::vector<Rational>> matrix);

  const Carrier& carrier() const { return carrier_; }
  const BaseSpace& base() const { return base_; }

  /// Throws InputError for points outside the carrier, EvaluatorError if
  /// the evaluator leaves the base space.
  BasePoint fiber(const CarrierPoint& x) const;
  /// Throws InputError for points outside the carrier, EvaluatorError for
  /// negative values.
  Rational dist(const CarrierPoint& a, const CarrierPoint& b) const;

  void require_point(const CarrierPoint& x) const;
  const std::optional<BasePoint>& constant_fiber() const { return constant_fiber_; }

  /// Points used by validators: the whole carrier when finite, otherwise
  /// the first `budget` enumerated points.
  std::vector<CarrierPoint> sample(Index budget) const;

 private:
  Carrier carrier_;
  BaseSpace base_;
  FiberFn fiber_;
  DistFn dist_;
  std::optional<BasePoint> constant_fiber_;
};

using MappingPtr = std::shared_ptr<const MetricMapping>;

// Builtin evaluators.
FiberFn fiber_constant(BasePoint y);
FiberFn fiber_identity();
DistFn dist_abs_diff();
DistFn dist_max_metric();
DistFn dist_table(std::vector<std::string> ids, std::vector<std::vector<Rational>> matrix);

ValidationReport validate_pseudometric(const MetricMapping& m, Index budget);
ValidationReport validate_fiberwise_metric(const MetricMapping& m, Index budget);

PointSet fiber_preimage(const MetricMapping& m, const std::vector<BasePoint>& targets);

/// Tabulated view of a finite mapping (carrier ≤ 64 points, finite base)
/// with point sets as bitmasks. Basic neighborhoods of x are
/// B_d(x, r) ∩ f⁻¹(V) for r over the realized distance values and their
/// midpoints (plus one radius above the maximum) and V over basis sets
/// containing f(x).
class FiniteView {
 public:
  using Mask = std::uint64_t;

  explicit FiniteView(const MetricMapping& m);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  Mask all() const { return size() == 64 ? ~Mask{0} : ((Mask{1} << size()) - 1); }

  Mask to_mask(const PointSet& s) const;
  PointSet to_set(Mask m) const;

  /// x ∈ cl(A) iff every basic neighborhood of x meets A.
  Mask closure(Mask a) const;
  /// x such that every basic neighborhood of x contains A.
  Mask limit_points(Mask a) const;

  /// Basic neighborhood masks of point i (all radius / basis set pairs).
  const std::vector<Mask>& neighborhoods(std::size_t i) const { return nbhd_[i]; }
  const std::vector<Rational>& radii() const { return radii_; }
  Mask preimage(const std::vector<std::string>& base_points) const;
  std::size_t fiber_index(std::size_t i) const { return fiber_[i]; }
  const Rational& dist(std::size_t i, std::size_t j) const { return d_[i][j]; }

 private:
  std::vector<std::string> ids_;
  std::vector<std::size_t> fiber_;
  std::vector<std::vector<Rational>> d_;
  std::vector<Rational> radii_;
  std::vector<std::vector<Mask>> nbhd_;
  FiniteBase base_;
};

PointSet closure_finite(const MetricMapping& m, const PointSet& a);

}  // namespace metcomp
