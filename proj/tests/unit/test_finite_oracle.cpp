#include <doctest.h>

#include <string>

#include "../support/fixtures.hpp"
#include "metcomp/completion.hpp"
#include "metcomp/finite_oracle.hpp"

using namespace metcomp;
using namespace metcomp::testing;

namespace {
CarrierPoint id(const std::string& s) { return CarrierPoint{s}; }
}  // namespace

TEST_CASE("worked examples") {
  CHECK(is_complete_filter(sierpinski()).holds);
  CHECK(is_complete_net(sierpinski()).holds);
  CHECK(is_complete_filter(discrete_pair()).holds);
  CHECK(is_complete_net(discrete_pair()).holds);

  const auto inc = incomplete_sierpinski();
  const auto f = is_complete_filter(inc);
  const auto n = is_complete_net(inc);
  CHECK_FALSE(f.holds);
  CHECK_FALSE(n.holds);
  REQUIRE(f.certificate);
  REQUIRE(n.certificate);
  CHECK(f.certificate->str() == "(a,{x_b})");
  CHECK(n.certificate->str() == "(a,{x_b})");
}

TEST_CASE("cluster and limit sets on the sierpinski space") {
  const auto m = sierpinski();
  const auto cl = cluster_and_limit_sets(m, {id("x_a")});
  CHECK(cl.cluster == PointSet{id("x_a"), id("x_b")});
  CHECK(cl.limit == PointSet{id("x_a"), id("x_b")});
  const auto cb = cluster_and_limit_sets(m, {id("x_b")});
  CHECK(cb.cluster == PointSet{id("x_b")});
  CHECK(cb.limit == PointSet{id("x_b")});
}

TEST_CASE("completion of the incomplete example") {
  const auto inc = incomplete_sierpinski();
  const auto c = finite_completion(inc);
  REQUIRE(c.completed.size() == 2);
  CHECK(c.completed.dist[0][1] == Rational(0));
  CHECK(is_complete_filter(c.completed).holds);
  CHECK(is_complete_net(c.completed).holds);
  CHECK(embedding_is_isometric(inc, c));
  CHECK(embedding_is_dense(c));
  CHECK(c.completed.validate().ok());
}

TEST_CASE("complete instances complete to themselves") {
  for (const auto& m : {sierpinski(), discrete_pair()}) {
    const auto c = finite_completion(m);
    CHECK(c.completed.size() == m.size());
  }
}

TEST_CASE("net and filter translations agree") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto m = random_instance(seed, 5, 3);
    for (const auto& cls : zero_classes(m)) {
      PrincipalFilter f;
      for (const auto i : cls) f.min_set.insert(id(m.points[i]));
      const auto net = net_of_filter(m, f);
      CHECK(filter_of_net(m, net).min_set == f.min_set);
      const auto a = net_cluster_and_limit(m, net);
      const auto b = cluster_and_limit_sets(m, f.min_set);
      CHECK(a.cluster == b.cluster);
      CHECK(a.limit == b.limit);
      // A prefix does not change the tail behaviour.
      EventualSequence longer = net;
      longer.prefix.push_back(m.points.front());
      const auto c = net_cluster_and_limit(m, longer);
      CHECK(c.cluster == a.cluster);
      CHECK(c.limit == a.limit);
    }
  }
}

TEST_CASE("positive diameter filters have no regular net") {
  const auto m = make_instance({"a"}, {{"a"}}, {"p", "q"}, {0, 0}, {{0, 1}, {1, 0}});
  CHECK_THROWS_AS(net_of_filter(m, PrincipalFilter{{id("p"), id("q")}}), InputError);
}

TEST_CASE("random instances validate and are deterministic") {
  std::size_t complete = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto m = random_instance(seed, 6, 3);
    CHECK(m.size() >= 1);
    CHECK(m.size() <= 6);
    CHECK(m.base.points.size() <= 3);
    CHECK_MESSAGE(m.validate().ok(), "seed ", seed, ": ", m.validate().summary());
    const auto again = random_instance(seed, 6, 3);
    CHECK(again.points == m.points);
    CHECK(again.dist == m.dist);
    CHECK(again.base.basis == m.base.basis);
    if (is_complete_net(m).holds) ++complete;
  }
  // The generator must exercise both verdicts.
  CHECK(complete > 10);
  CHECK(complete < 290);
}

TEST_CASE("zero classes partition the carrier") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto m = random_instance(seed, 6, 3);
    std::size_t total = 0;
    for (const auto& cls : zero_classes(m)) {
      total += cls.size();
      for (const auto i : cls) {
        for (const auto j : cls) CHECK(m.dist[i][j] == Rational(0));
      }
    }
    CHECK(total == m.size());
  }
}

TEST_CASE("completions of random instances") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto m = random_instance(seed, 6, 3);
    const auto c = finite_completion(m);
    CHECK(c.completed.validate().ok());
    CHECK(is_complete_filter(c.completed).holds);
    CHECK(embedding_is_isometric(m, c));
    CHECK(embedding_is_dense(c));
    CHECK(lemma2_check(m).holds);
    CHECK(theorem3_crosscheck(m));
  }
}

TEST_CASE("invalid instances are rejected by the cross-check") {
  const auto bad = make_instance({"a"}, {{"a"}}, {"p", "q"}, {0, 0}, {{0, 0}, {0, 0}});
  CHECK_FALSE(bad.validate().ok());
  CHECK_THROWS_AS(theorem3_crosscheck(bad), InputError);
}

TEST_CASE("round trip through a metric mapping") {
  const auto m = incomplete_sierpinski();
  const auto back = FiniteInstance::from_mapping(*m.mapping());
  CHECK(back.points == m.points);
  CHECK(back.fiber == m.fiber);
  CHECK(back.dist == m.dist);
}
