#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metcomp/base_topology.hpp"
#include "metcomp/errors.hpp"
#include "metcomp/metric_mapping.hpp"
#include "metcomp/rational.hpp"

namespace metcomp {

/// Cauchy sequence with the fixed modulus d(at(m), at(n)) ≤ 1/m + 1/n.
/// Indices start at 1. The evaluator must be pure.
struct RegularSeq {
  std::function<CarrierPoint(Index)> term;
  /// When set, at(n) == at(*stable_from) for every n ≥ *stable_from.
  std::optional<Index> stable_from;
  std::string label;

  CarrierPoint at(Index n) const;
};

/// Maps each basic open O ∋ y to an index N with fiber(at(n)) ∈ O for all
/// n ≥ N. Zero means "no index", which check_tying reports.
struct TyingWitness {
  std::function<Index(const BasicOpen&)> index_for;
};

struct TiedCauchySeq {
  MappingPtr mapping;
  RegularSeq seq;
  BasePoint y;
  TyingWitness tie;

  CarrierPoint at(Index n) const { return seq.at(n); }
};

/// at(n) = x, tied to fiber(x) with index 1 everywhere.
TiedCauchySeq const_seq(const MappingPtr& m, const CarrierPoint& x);

/// Eventually constant sequence: prefix[0], prefix[1], …, then `tail`
/// forever. Tied to `y` (default fiber(tail)) by scanning the finite
/// prefix. Regularity is decided exactly; irregular tables and tails whose
/// fiber misses a basic neighborhood of y are rejected with InputError.
TiedCauchySeq table_seq(const MappingPtr& m, std::vector<CarrierPoint> prefix, const CarrierPoint& tail,
                        std::optional<BasePoint> y = std::nullopt);

/// Like table_seq but performs no regularity or tying checks: the witness
/// is still derived from the prefix, so a bad declaration shows up in
/// check_regularity / check_tying instead.
TiedCauchySeq declare_eventually_constant(const MappingPtr& m, std::vector<CarrierPoint> prefix,
                                          const CarrierPoint& tail, BasePoint y);

/// Newton iterates for √a (a ≥ 1 rational) on a rational carrier: at(n)
/// is the first iterate x_k of x ↦ x/2 + a/(2x), x_0 = a, with
/// |x_k² − a| ≤ x_k / n, so |at(n) − √a| < 1/n. Tying requires a constant
/// fiber map (tied to that constant, or to `y` if every basic neighborhood
/// of y contains it).
TiedCauchySeq newton_sqrt_seq(const MappingPtr& m, const Rational& a, std::optional<BasePoint> y = std::nullopt);

/// The Newton term itself, exposed for oracles and schedules.
Rational newton_sqrt_term(const Rational& a, Index n);

/// Generic constructor for sequences with hand-written evaluators.
TiedCauchySeq make_tied(const MappingPtr& m, RegularSeq seq, BasePoint y, TyingWitness tie);

ValidationReport check_regularity(const TiedCauchySeq& s, Index depth);
/// Finite bases: every basis set containing y. Enumerated bases: basic
/// opens among the first `depth` enumerated ones. For each, terms
/// N(O) ≤ n ≤ depth must have fibers in O.
ValidationReport check_tying(const TiedCauchySeq& s, Index depth);

struct GapInterval {
  Rational lo;
  Rational hi;
};

/// Bracket for lim d(s(n), s'(n)) from the n-th terms:
/// [max(0, d − 2/n), d + 2/n].
GapInterval gap_interval(const TiedCauchySeq& s, const TiedCauchySeq& t, Index n);

/// Positive lower bound on the limit distance if one is visible at some
/// depth 1, 2, 4, … ≤ max_depth (and max_depth itself); nullopt means the
/// sequences are indistinguishable at that depth, not that they are
/// equivalent. Returns the best bound found.
std::optional<Rational> apartness_witness(const TiedCauchySeq& s, const TiedCauchySeq& t, Index max_depth);

void require_same_mapping(const TiedCauchySeq& s, const TiedCauchySeq& t);

}  // namespace metcomp
