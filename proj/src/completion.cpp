#include "metcomp/completion.hpp"

#include <algorithm>
#include <memory>

namespace metcomp {

CompletionPoint RegularCompletionSeq::at(Index n) const {
  if (n == 0) throw std::domain_error("sequence indices start at 1");
  return term(n);
}

Index dstar_index(const Rational& eps) {
  if (eps.sign() <= 0) throw InputError("precision must be a positive rational, got " + eps.str());
  return (Rational(2) / eps).ceil_index();
}

Rational dstar_approx(const CompletionPoint& p, const CompletionPoint& q, const Rational& eps) {
  require_same_mapping(p.rep, q.rep);
  Index n = dstar_index(eps);
  const auto& sp = p.rep.seq.stable_from;
  const auto& sq = q.rep.seq.stable_from;
  if (sp && sq) n = std::min(n, std::max(*sp, *sq));
  return p.mapping()->dist(p.rep.at(n), q.rep.at(n));
}

CompletionPoint embed(const MappingPtr& m, const CarrierPoint& x) { return CompletionPoint{const_seq(m, x)}; }

CarrierPoint density_witness(const CompletionPoint& p, const Rational& eps, const BasicOpen& v) {
  if (eps.sign() <= 0) throw InputError("precision must be a positive rational, got " + eps.str());
  if (!p.mapping()->base().is_basic_open(v)) throw InputError("open " + to_string(v) + " is not a basic open");
  if (!contains(v, p.y())) {
    throw InputError("open " + to_string(v) + " does not contain f*(p) = " + to_string(p.y()));
  }
  const Index tied = p.rep.tie.index_for(v);
  if (tied == 0) throw InputError("tying witness has no index for " + to_string(v));
  const Index n = std::max((Rational(1) / eps).ceil_index(), tied);
  return p.rep.at(n);
}

namespace {

/// Basic open around z inside every basic neighborhood O of y with
/// tie(O) ≤ index.
BasicOpen refine_open(const BaseSpace& base, const BasePoint& y, const BasePoint& z, const TyingWitness& tie,
                      Index index) {
  if (const auto* e = base.enumerated()) {
    if (e->kind() == EnumeratedKind::one_point) return WholeSpace{};
    throw InputError("limit_point needs a finite or one-point base");
  }
  const auto& fb = *base.finite();
  std::vector<std::string> inside = fb.points;
  std::sort(inside.begin(), inside.end());
  std::string used;
  for (const auto& o : base.neighborhood_basis(y)) {
    const Index t = tie.index_for(o);
    if (t == 0 || t > index) continue;
    const auto& members = std::get<BasisSet>(o).members;
    std::vector<std::string> meet;
    std::set_intersection(inside.begin(), inside.end(), members.begin(), members.end(), std::back_inserter(meet));
    inside = std::move(meet);
    used += (used.empty() ? "" : " ") + to_string(o);
  }
  const auto* zid = std::get_if<std::string>(&z);
  if (!zid || !std::binary_search(inside.begin(), inside.end(), *zid)) {
    throw InputError("f*(Psi(" + std::to_string(index) + ")) = " + to_string(z) +
                     " escapes the tied neighborhoods " + used);
  }
  for (std::size_t k = 0; k < fb.basis.size(); ++k) {
    const auto& b = fb.basis[k];
    if (std::binary_search(b.begin(), b.end(), *zid) && std::includes(inside.begin(), inside.end(), b.begin(), b.end())) {
      return BasisSet{k, b};
    }
  }
  throw InputError("no basis set contains " + *zid + " inside the intersection of " + used +
                   " (basis axiom violated)");
}

}  // namespace

CompletionPoint limit_point(const RegularCompletionSeq& psi) {
  auto shared = std::make_shared<const RegularCompletionSeq>(psi);
  const MappingPtr mapping = psi.at(1).mapping();
  mapping->base().require_point(psi.y);
  if (const auto* e = mapping->base().enumerated(); e && e->kind() != EnumeratedKind::one_point) {
    throw InputError("limit_point needs a finite or one-point base");
  }

  RegularSeq seq;
  seq.term = [shared, mapping](Index k) -> CarrierPoint {
    const Index idx = checked_mul(4, k);
    const CompletionPoint p = shared->at(idx);
    if (p.mapping() != mapping) throw InputError("limit_point: sequence mixes metric mappings");
    const BasicOpen v = refine_open(mapping->base(), shared->y, p.y(), shared->tie, idx);
    return density_witness(p, reciprocal(idx), v);
  };
  seq.label = "limit";

  TyingWitness tie;
  tie.index_for = [shared](const BasicOpen& o) -> Index {
    const Index t = shared->tie.index_for(o);
    if (t == 0) return 0;
    return (t + 3) / 4;
  };
  return CompletionPoint{make_tied(mapping, std::move(seq), psi.y, std::move(tie))};
}

RegularCompletionSeq embedded_sequence(const TiedCauchySeq& s) {
  RegularCompletionSeq psi;
  psi.term = [s](Index n) { return embed(s.mapping, s.at(n)); };
  psi.y = s.y;
  psi.tie = s.tie;
  return psi;
}

}  // namespace metcomp
