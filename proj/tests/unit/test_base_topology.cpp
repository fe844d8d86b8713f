#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "metcomp/base_topology.hpp"

using namespace metcomp;

TEST_CASE("finite base canonicalizes and rejects bad ids") {
  const auto b = FiniteBase::make({"a", "b", "c"}, {{"b", "a"}, {"c"}});
  CHECK(b.basis[0] == std::vector<std::string>{"a", "b"});
  CHECK(b.index_of("c") == 2);
  CHECK_FALSE(b.index_of("z").has_value());
  CHECK_THROWS_AS(FiniteBase::make({"a", "a"}, {{"a"}}), InputError);
  CHECK_THROWS_AS(FiniteBase::make({"a"}, {{"q"}}), InputError);
}

TEST_CASE("basis validation") {
  CHECK(validate_basis(FiniteBase::make({"a", "b"}, {{"a"}, {"a", "b"}})).ok());
  const auto uncovered = validate_basis(FiniteBase::make({"a", "b"}, {{"a"}}));
  CHECK(uncovered.has_kind("uncovered"));
  // {a,b} ∩ {b,c} = {b} needs a basis set between b and {b}.
  const auto gap = validate_basis(FiniteBase::make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}));
  CHECK(gap.has_kind("intersection"));
}

TEST_CASE("sierpinski opens") {
  const auto b = FiniteBase::make({"a", "b"}, {{"a"}, {"a", "b"}});
  const auto opens = all_opens_finite(b);
  CHECK(opens == std::vector<std::vector<std::string>>{{}, {"a"}, {"a", "b"}});
}

TEST_CASE("all opens are closed under union and intersection") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::string> pts{"p", "q", "r", "s"};
    std::vector<std::vector<std::string>> basis{pts};
    const int nb = static_cast<int>(rng() % 4);
    for (int k = 0; k < nb; ++k) {
      std::vector<std::string> s;
      for (const auto& p : pts) {
        if (rng() & 1U) s.push_back(p);
      }
      if (!s.empty()) basis.push_back(s);
    }
    const auto b = FiniteBase::make(pts, basis);
    if (!validate_basis(b).ok()) continue;
    const auto opens = all_opens_finite(b);
    const std::set<std::vector<std::string>> family(opens.begin(), opens.end());
    for (const auto& u : opens) {
      for (const auto& v : opens) {
        std::vector<std::string> uni, inter;
        std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(uni));
        std::set_intersection(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(inter));
        CHECK(family.count(uni) == 1);
        CHECK(family.count(inter) == 1);
      }
    }
  }
}

TEST_CASE("rational enumeration is injective on a prefix and hits small values") {
  std::set<Rational> seen;
  for (Index i = 0; i < 2000; ++i) {
    CHECK(seen.insert(enumerate_rational(i)).second);
  }
  CHECK(seen.count(Rational(0)) == 1);
  CHECK(seen.count(Rational(3, 2)) == 1);
  CHECK(seen.count(Rational(-2, 5)) == 1);
}

TEST_CASE("cantor pairing round-trips") {
  for (Index k = 0; k < 500; ++k) {
    const auto [i, j] = cantor_unpair(k);
    CHECK((i + j) * (i + j + 1) / 2 + j == k);
  }
}

TEST_CASE("enumerated bases") {
  const BaseSpace one(EnumeratedBase::one_point("*"));
  CHECK(one.has_point(BasePoint{std::string("*")}));
  CHECK_FALSE(one.has_point(BasePoint{Rational(0)}));
  const auto nb = one.neighborhood_basis(BasePoint{std::string("*")}, 5);
  REQUIRE_FALSE(nb.empty());
  CHECK(std::holds_alternative<WholeSpace>(nb.front()));

  const BaseSpace q(EnumeratedBase::rational_order());
  const BasePoint half{Rational(1, 2)};
  const auto around = q.neighborhood_basis(half, 200);
  CHECK_FALSE(around.empty());
  for (const auto& o : around) {
    CHECK(contains(o, half));
    CHECK(q.is_basic_open(o));
  }
  CHECK_THROWS_AS(q.require_point(BasePoint{std::string("x")}), InputError);
}

TEST_CASE("basic open membership") {
  const BasicOpen iv = OpenInterval{Rational(0), Rational(1)};
  CHECK(contains(iv, BasePoint{Rational(1, 2)}));
  CHECK_FALSE(contains(iv, BasePoint{Rational(1)}));
  const BasicOpen bs = BasisSet{0, {"a"}};
  CHECK(contains(bs, BasePoint{std::string("a")}));
  CHECK_FALSE(contains(bs, BasePoint{std::string("b")}));
}
