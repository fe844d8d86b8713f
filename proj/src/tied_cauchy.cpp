#include "metcomp/tied_cauchy.hpp"

#include <algorithm>
#include <memory>

namespace metcomp {

CarrierPoint RegularSeq::at(Index n) const {
  if (n == 0) throw std::domain_error("sequence indices start at 1");
  if (stable_from && n > *stable_from) n = *stable_from;
  return term(n);
}

namespace {

/// z lies in every basic neighborhood of y.
bool in_every_neighborhood(const BaseSpace& base, const BasePoint& y, const BasePoint& z) {
  if (const auto* f = base.finite()) {
    (void)f;
    const auto opens = base.neighborhood_basis(y);
    return std::all_of(opens.begin(), opens.end(), [&](const BasicOpen& o) { return contains(o, z); });
  }
  if (base.enumerated()->kind() == EnumeratedKind::one_point) return true;
  // The order topology on ℚ is Hausdorff.
  return y == z;
}

TiedCauchySeq eventually_constant(const MappingPtr& m, std::vector<CarrierPoint> prefix, const CarrierPoint& tail,
                                  BasePoint y) {
  m->base().require_point(y);
  for (const auto& p : prefix) m->require_point(p);
  m->require_point(tail);
  std::vector<CarrierPoint> terms = std::move(prefix);
  terms.push_back(tail);
  std::vector<BasePoint> fibers;
  fibers.reserve(terms.size());
  for (const auto& t : terms) fibers.push_back(m->fiber(t));

  auto shared_terms = std::make_shared<const std::vector<CarrierPoint>>(std::move(terms));
  auto shared_fibers = std::make_shared<const std::vector<BasePoint>>(std::move(fibers));
  const Index stable = shared_terms->size();

  RegularSeq seq;
  seq.term = [shared_terms](Index n) { return (*shared_terms)[std::min<Index>(n, shared_terms->size()) - 1]; };
  seq.stable_from = stable;
  seq.label = "table";

  TyingWitness tie;
  tie.index_for = [shared_fibers, stable](const BasicOpen& o) -> Index {
    // A tail outside O cannot be repaired; answer with the stable index and
    // let check_tying expose the failure.
    if (!contains(o, shared_fibers->back())) return stable;
    Index n = stable;
    while (n > 1 && contains(o, (*shared_fibers)[n - 2])) --n;
    return n;
  };
  return TiedCauchySeq{m, std::move(seq), std::move(y), std::move(tie)};
}

}  // namespace

TiedCauchySeq make_tied(const MappingPtr& m, RegularSeq seq, BasePoint y, TyingWitness tie) {
  if (!m) throw InputError("sequence needs a metric mapping");
  m->base().require_point(y);
  return TiedCauchySeq{m, std::move(seq), std::move(y), std::move(tie)};
}

TiedCauchySeq const_seq(const MappingPtr& m, const CarrierPoint& x) {
  m->require_point(x);
  BasePoint y = m->fiber(x);
  RegularSeq seq;
  seq.term = [x](Index) { return x; };
  seq.stable_from = 1;
  seq.label = "const(" + to_string(x) + ")";
  TyingWitness tie{[](const BasicOpen&) -> Index { return 1; }};
  return TiedCauchySeq{m, std::move(seq), std::move(y), std::move(tie)};
}

TiedCauchySeq declare_eventually_constant(const MappingPtr& m, std::vector<CarrierPoint> prefix,
                                          const CarrierPoint& tail, BasePoint y) {
  return eventually_constant(m, std::move(prefix), tail, std::move(y));
}

TiedCauchySeq table_seq(const MappingPtr& m, std::vector<CarrierPoint> prefix, const CarrierPoint& tail,
                        std::optional<BasePoint> y) {
  m->require_point(tail);
  BasePoint target = y ? *y : m->fiber(tail);
  m->base().require_point(target);

  // Terms 1..K with K the stable index; pairs beyond K reduce to d(at(m), tail) ≤ 1/m.
  std::vector<CarrierPoint> terms = prefix;
  terms.push_back(tail);
  const std::size_t k = terms.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Index mi = i + 1;
    for (std::size_t j = i + 1; j < k; ++j) {
      const Rational d = m->dist(terms[i], terms[j]);
      if (reciprocal(mi) + reciprocal(j + 1) < d) {
        throw InputError("table is not regular: d(at(" + std::to_string(mi) + "),at(" + std::to_string(j + 1) +
                         ")) = " + d.str());
      }
    }
    const Rational d = m->dist(terms[i], tail);
    if (reciprocal(mi) < d) {
      throw InputError("table is not regular: d(at(" + std::to_string(mi) + "),tail) = " + d.str() + " > 1/" +
                       std::to_string(mi));
    }
  }
  const BasePoint tail_fiber = m->fiber(tail);
  if (!in_every_neighborhood(m->base(), target, tail_fiber)) {
    throw InputError("tail " + to_string(tail) + " (fiber " + to_string(tail_fiber) +
                     ") is not in every basic neighborhood of " + to_string(target));
  }
  auto s = eventually_constant(m, std::move(prefix), tail, std::move(target));
  s.seq.label = "table";
  return s;
}

Rational newton_sqrt_term(const Rational& a, Index n) {
  if (a < Rational(1)) throw InputError("newton_sqrt needs a rational >= 1, got " + a.str());
  if (n == 0) throw std::domain_error("sequence indices start at 1");
  const Rational n_q = Rational::from_index(n);
  const Rational half(1, 2);
  Rational x = a;
  // Quadratic convergence: a handful of steps reach any 64-bit index.
  while (n_q * (x * x - a).abs() > x) {
    x = x * half + a / (Rational(2) * x);
  }
  return x;
}

TiedCauchySeq newton_sqrt_seq(const MappingPtr& m, const Rational& a, std::optional<BasePoint> y) {
  if (a < Rational(1)) throw InputError("newton_sqrt needs a rational >= 1, got " + a.str());
  m->require_point(CarrierPoint{a});
  const auto& c = m->constant_fiber();
  if (!c) throw InputError("newton_sqrt can only be tied under a constant fiber map");
  BasePoint target = y ? *y : *c;
  m->base().require_point(target);
  if (!in_every_neighborhood(m->base(), target, *c)) {
    throw InputError("constant fiber " + to_string(*c) + " is not in every basic neighborhood of " +
                     to_string(target));
  }
  RegularSeq seq;
  seq.term = [a](Index n) -> CarrierPoint { return newton_sqrt_term(a, n); };
  seq.label = "newton_sqrt(" + a.str() + ")";
  TyingWitness tie{[](const BasicOpen&) -> Index { return 1; }};
  return TiedCauchySeq{m, std::move(seq), std::move(target), std::move(tie)};
}

ValidationReport check_regularity(const TiedCauchySeq& s, Index depth) {
  if (depth < 2) throw InputError("regularity depth must be >= 2");
  ValidationReport report;
  std::vector<CarrierPoint> terms;
  terms.reserve(depth);
  for (Index n = 1; n <= depth; ++n) terms.push_back(s.at(n));
  for (Index m = 1; m <= depth; ++m) {
    for (Index n = m + 1; n <= depth; ++n) {
      Rational d;
      try {
        d = s.mapping->dist(terms[m - 1], terms[n - 1]);
      } catch (const EvaluatorError& e) {
        report.add("evaluator", e.what());
        continue;
      }
      if (reciprocal(m) + reciprocal(n) < d) {
        report.add("modulus", "(" + std::to_string(m) + "," + std::to_string(n) + ") dist=" + d.str());
      }
    }
  }
  return report;
}

ValidationReport check_tying(const TiedCauchySeq& s, Index depth) {
  ValidationReport report;
  const auto opens = s.mapping->base().neighborhood_basis(s.y, depth);
  for (const auto& o : opens) {
    const Index start = s.tie.index_for(o);
    if (start == 0) {
      report.add("witness", "no index for open " + to_string(o));
      continue;
    }
    for (Index n = start; n <= depth; ++n) {
      const BasePoint fy = s.mapping->fiber(s.at(n));
      if (!contains(o, fy)) {
        report.add("tie", "open " + to_string(o) + ": fiber(at(" + std::to_string(n) + ")) = " + to_string(fy) +
                              " outside (witness index " + std::to_string(start) + ")");
        break;
      }
    }
  }
  return report;
}

void require_same_mapping(const TiedCauchySeq& s, const TiedCauchySeq& t) {
  if (s.mapping != t.mapping) throw InputError("sequences live on different metric mappings");
}

GapInterval gap_interval(const TiedCauchySeq& s, const TiedCauchySeq& t, Index n) {
  require_same_mapping(s, t);
  if (n == 0) throw InputError("gap_interval needs n >= 1");
  const Rational d = s.mapping->dist(s.at(n), t.at(n));
  const Rational slack = Rational(2) * reciprocal(n);
  return GapInterval{max(Rational(0), d - slack), d + slack};
}

std::optional<Rational> apartness_witness(const TiedCauchySeq& s, const TiedCauchySeq& t, Index max_depth) {
  require_same_mapping(s, t);
  std::vector<Index> schedule;
  for (Index n = 1; n <= max_depth; n *= 2) {
    schedule.push_back(n);
    if (n > max_depth / 2) break;
  }
  if (max_depth >= 1 && (schedule.empty() || schedule.back() != max_depth)) schedule.push_back(max_depth);
  std::optional<Rational> best;
  for (const Index n : schedule) {
    const Rational bound = s.mapping->dist(s.at(n), t.at(n)) - Rational(2) * reciprocal(n);
    if (bound.sign() > 0 && (!best || *best < bound)) best = bound;
  }
  return best;
}

}  // namespace metcomp
