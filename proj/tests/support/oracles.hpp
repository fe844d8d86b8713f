#pragma once

// Independent reference computations. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "metcomp/finite_oracle.hpp"
#include "metcomp/rational.hpp"

namespace metcomp::testing {

/// Rational bracket [lo, hi] of √a with lo² < a < hi² and width below
/// `width`. Interval Newton: hi ↦ (hi + a/hi)/2 stays above √a and a/hi
/// stays below it.
inline std::pair<Rational, Rational> sqrt_bracket(const Rational& a, const Rational& width) {
  Rational hi = a + Rational(1);
  Rational lo = a / hi;
  while (!(hi - lo < width)) {
    hi = (hi + a / hi) / Rational(2);
    lo = a / hi;
  }
  return {lo, hi};
}

/// 10^-k as a rational.
inline Rational ten_to_minus(unsigned k) {
  Rational r(1);
  for (unsigned i = 0; i < k; ++i) r /= Rational(10);
  return r;
}

/// |√2 − 3/2| to 38 digits, frozen from sqrt_bracket(2, 10^-50).
inline Rational sqrt2_gap_frozen() { return Rational::parse("8578643762690495119831127579030192143/100000000000000000000000000000000000000"); }

/// Closure in τ(f, d) from the full open family: every open of Y (all
/// unions of basis sets) crossed with every metric ball centered anywhere.
/// x ∈ cl(A) iff every such open containing x meets A.
inline std::set<std::size_t> closure_by_open_family(const FiniteInstance& m, const std::set<std::size_t>& a) {
  std::vector<std::set<std::string>> opens_y;
  const std::size_t nb = m.base.basis.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << nb); ++mask) {
    std::set<std::string> u;
    for (std::size_t k = 0; k < nb; ++k) {
      if (mask >> k & 1U) u.insert(m.base.basis[k].begin(), m.base.basis[k].end());
    }
    opens_y.push_back(u);
  }
  // Candidate radii: every realized distance, every midpoint, and a large one.
  std::vector<Rational> values{Rational(0)};
  for (const auto& row : m.dist) values.insert(values.end(), row.begin(), row.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Rational> radii;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].sign() > 0) radii.push_back(values[i]);
    if (i + 1 < values.size()) radii.push_back((values[i] + values[i + 1]) / Rational(2));
  }
  radii.push_back(values.back() + Rational(1));

  std::set<std::size_t> out;
  for (std::size_t x = 0; x < m.size(); ++x) {
    bool adherent = true;
    for (std::size_t c = 0; c < m.size() && adherent; ++c) {
      for (const auto& r : radii) {
        if (!(m.dist[c][x] < r)) continue;  // ball around c must contain x
        for (const auto& v : opens_y) {
          if (!v.count(m.fiber_id(x))) continue;
          bool meets = false;
          for (const auto p : a) {
            if (m.dist[c][p] < r && v.count(m.fiber_id(p))) meets = true;
          }
          if (!meets) adherent = false;
        }
      }
    }
    if (adherent) out.insert(x);
  }
  return out;
}

}  // namespace metcomp::testing
