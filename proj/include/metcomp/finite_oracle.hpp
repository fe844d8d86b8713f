#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metcomp/base_topology.hpp"
#include "metcomp/errors.hpp"
#include "metcomp/metric_mapping.hpp"
#include "metcomp/rational.hpp"

namespace metcomp {

/// Fully tabulated metric mapping: finite carrier, finite base, distance
/// matrix. Every definition of completeness is decidable on it.
struct FiniteInstance {
  FiniteBase base;
  std::vector<std::string> points;
  std::vector<std::size_t> fiber;  // index into base.points
  std::vector<std::vector<Rational>> dist;

  std::size_t size() const { return points.size(); }
  const std::string& fiber_id(std::size_t i) const { return base.points[fiber[i]]; }

  MappingPtr mapping() const;
  static FiniteInstance from_mapping(const MetricMapping& m);

  /// Basis axioms, pseudometric axioms and fiberwise metricity.
  ValidationReport validate() const;
};

/// The filter of all supersets of `min_set`; on a finite set every filter
/// has this form.
struct PrincipalFilter {
  PointSet min_set;
};

struct ClusterLimit {
  PointSet cluster;  // a_X
  PointSet limit;    // c_X
};

/// Cluster and limit points of the principal filter generated by A in
/// τ(f, d).
ClusterLimit cluster_and_limit_sets(const FiniteInstance& m, const PointSet& a);

struct Certificate {
  std::string y;
  PointSet set;
  std::string str() const { return "(" + y + "," + to_string(set) + ")"; }
};

struct Verdict {
  bool holds = true;
  std::optional<Certificate> certificate;
};

/// Completeness by the filter definition: every zero-diameter A inside
/// f⁻¹(O) for all basic O ∋ y has a cluster point in f⁻¹(y). The
/// certificate is the first failing (y, A), smallest A first.
Verdict is_complete_filter(const FiniteInstance& m);

/// Completeness by convergence of tied Cauchy sequences, computed from
/// zero-distance classes and direct convergence checks. Shares no code
/// with is_complete_filter. Certificate: (y, realizable tail set).
Verdict is_complete_net(const FiniteInstance& m);

/// Eventually periodic sequence on the carrier: `prefix`, then `cycle`
/// repeated forever. On a finite carrier every Cauchy sequence has a
/// tail of this shape up to reordering.
struct EventualSequence {
  std::vector<std::string> prefix;
  std::vector<std::string> cycle;
};

/// Cluster and limit points of the sequence itself (points visited
/// infinitely often vs. eventually always inside each neighborhood).
ClusterLimit net_cluster_and_limit(const FiniteInstance& m, const EventualSequence& s);

/// The tail filter of the sequence: ↑(set of cycle points).
PrincipalFilter filter_of_net(const FiniteInstance& m, const EventualSequence& s);

/// A sequence cycling through min_set. Requires diam(min_set) = 0
/// (InputError otherwise).
EventualSequence net_of_filter(const FiniteInstance& m, const PrincipalFilter& f);

/// a_X ∩ f⁻¹(y) = c_X ∩ f⁻¹(y) for every tied Cauchy tail. Counterexample:
/// (y, tail set).
Verdict lemma2_check(const FiniteInstance& m);

struct FiniteCompletion {
  FiniteInstance completed;
  std::vector<std::size_t> embedding;  // carrier index → completed index
};

/// X*_y = zero classes meeting f⁻¹(O) for every basic O ∋ y; points are
/// (class, y) with d* from class representatives. Embedded points keep
/// their original id; added points are named "[rep]@y".
FiniteCompletion finite_completion(const FiniteInstance& m);

/// d*(i(x), i(x')) == d(x, x'), f* ∘ i == f, i injective.
bool embedding_is_isometric(const FiniteInstance& m, const FiniteCompletion& c);
/// Every nonempty basic open of τ(f*, d*) meets i(X).
bool embedding_is_dense(const FiniteCompletion& c);

/// is_complete_filter(m).holds == is_complete_net(m).holds. Throws
/// InputError for instances that fail validation.
bool theorem3_crosscheck(const FiniteInstance& m);

/// Deterministic in seed. |X| ∈ [1, max_x], |Y| ∈ [1, max_y]; basis and
/// distances are repaired so the instance always validates.
FiniteInstance random_instance(std::uint64_t seed, std::size_t max_x, std::size_t max_y);

/// Zero-distance classes (union-find), each sorted, ordered by smallest
/// member.
std::vector<std::vector<std::size_t>> zero_classes(const FiniteInstance& m);

}  // namespace metcomp
