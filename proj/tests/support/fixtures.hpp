#pragma once

// Shared instances for unit and acceptance tests.

#include <memory>
#include <string>
#include <vector>

#include "metcomp/finite_oracle.hpp"
#include "metcomp/metric_mapping.hpp"

namespace metcomp::testing {

inline FiniteInstance make_instance(std::vector<std::string> base_points, std::vector<std::vector<std::string>> basis,
                                    std::vector<std::string> points, std::vector<std::size_t> fiber,
                                    std::vector<std::vector<Rational>> dist) {
  FiniteInstance m;
  m.base = FiniteBase::make(std::move(base_points), std::move(basis));
  m.points = std::move(points);
  m.fiber = std::move(fiber);
  m.dist = std::move(dist);
  return m;
}

/// Y = {a, b} with basis [{a}, {a,b}]; X = {x_a, x_b} at distance 0.
inline FiniteInstance sierpinski() {
  return make_instance({"a", "b"}, {{"a"}, {"a", "b"}}, {"x_a", "x_b"}, {0, 1}, {{0, 0}, {0, 0}});
}

/// Same carrier and distance, discrete basis [{a}, {b}].
inline FiniteInstance discrete_pair() {
  return make_instance({"a", "b"}, {{"a"}, {"b"}}, {"x_a", "x_b"}, {0, 1}, {{0, 0}, {0, 0}});
}

/// Basis [{b}, {a,b}], X = {x_b} over b: the fiber over a is missing.
inline FiniteInstance incomplete_sierpinski() {
  return make_instance({"a", "b"}, {{"b"}, {"a", "b"}}, {"x_b"}, {1}, {{0}});
}

/// One-point base "*" over a rational interval with |x − x'|.
inline MappingPtr rational_line(Rational lo, Rational hi, bool lo_open = false) {
  return std::make_shared<const MetricMapping>(Carrier::rational_interval(std::move(lo), std::move(hi), lo_open),
                                               BaseSpace(EnumeratedBase::one_point("*")),
                                               fiber_constant(BasePoint{std::string("*")}), dist_abs_diff(),
                                               BasePoint{std::string("*")});
}

/// Carrier for √2 work: [1, 2] over one point.
inline MappingPtr sqrt2_line() { return rational_line(Rational(1), Rational(2)); }

}  // namespace metcomp::testing
