#pragma once

#include <functional>

#include "metcomp/base_topology.hpp"
#include "metcomp/metric_mapping.hpp"
#include "metcomp/rational.hpp"
#include "metcomp/tied_cauchy.hpp"

namespace metcomp {

/// An element of X*: the class of a tied regular sequence over its base
/// point. There is deliberately no equality test; two points denote the
/// same element iff they share y and d* = 0, which is only semi-decidable.
struct CompletionPoint {
  TiedCauchySeq rep;

  const BasePoint& y() const { return rep.y; }
  const MappingPtr& mapping() const { return rep.mapping; }
};

/// Regular sequence in X* (d*(at(m), at(n)) ≤ 1/m + 1/n) tied to y through
/// f*.
struct RegularCompletionSeq {
  std::function<CompletionPoint(Index)> term;
  BasePoint y;
  TyingWitness tie;

  CompletionPoint at(Index n) const;
};

/// Evaluation index ⌈2/ε⌉ used by dstar_approx.
Index dstar_index(const Rational& eps);

/// d*(p, q) to within ε: the distance of the n-th terms for n = ⌈2/ε⌉,
/// since each regular term is within 1/n of its limit. Sequences that are
/// constant from some index on are read at that index and the result is
/// exact.
Rational dstar_approx(const CompletionPoint& p, const CompletionPoint& q, const Rational& eps);

CompletionPoint embed(const MappingPtr& m, const CarrierPoint& x);

/// Projection f*: X* → Y.
inline const BasePoint& fstar(const CompletionPoint& p) { return p.y(); }

/// A carrier point x with fiber(x) ∈ V and d*(p, embed(x)) ≤ ε, namely
/// rep.at(max(⌈1/ε⌉, tie(V))).
CarrierPoint density_witness(const CompletionPoint& p, const Rational& eps, const BasicOpen& v);

/// Diagonal limit of a regular sequence in X*: the k-th term is a density
/// witness for Ψ(4k) at precision 1/(4k) inside a basic open V_k around
/// f*(Ψ(4k)) that lies within every basic neighborhood O of y with
/// tie(O) ≤ 4k. The result is regular, tied to y, and
/// d*(Ψ(k), L) ≤ 1/k. Needs a finite or one-point base.
CompletionPoint limit_point(const RegularCompletionSeq& psi);

/// Ψ(n) = embed(s.at(n)): the image of a tied regular sequence in X*. It is
/// regular and tied to s.y with s's witness.
RegularCompletionSeq embedded_sequence(const TiedCauchySeq& s);

}  // namespace metcomp
