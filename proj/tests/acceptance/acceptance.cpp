// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "metcomp/cli_io.hpp"
#include "metcomp/completion.hpp"
#include "metcomp/finite_oracle.hpp"

using namespace metcomp;

namespace {

constexpr std::uint64_t kSuiteSeeds = 200;
constexpr std::size_t kMaxX = 6;
constexpr std::size_t kMaxY = 3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

const std::vector<FiniteInstance>& suite() {
  static const std::vector<FiniteInstance> instances = [] {
    std::vector<FiniteInstance> v;
    for (std::uint64_t seed = 1; seed <= kSuiteSeeds; ++seed) v.push_back(random_instance(seed, kMaxX, kMaxY));
    return v;
  }();
  return instances;
}

Outcome isometry() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Rational> precisions{Rational(1), Rational(1, 1000), Rational(1, 1000000000)};
  std::size_t pairs = 0, bad = 0;
  for (const auto& inst : suite()) {
    const auto m = inst.mapping();
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const auto ei = embed(m, CarrierPoint{inst.points[i]});
      for (std::size_t j = 0; j < inst.size(); ++j) {
        const auto ej = embed(m, CarrierPoint{inst.points[j]});
        for (const auto& eps : precisions) {
          ++pairs;
          if (dstar_approx(ei, ej, eps) != inst.dist[i][j]) ++bad;
        }
      }
    }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 10.0, std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " exact, " + fmt_seconds(t)};
}

Outcome projection() {
  std::size_t points = 0, bad = 0;
  for (const auto& inst : suite()) {
    const auto m = inst.mapping();
    for (const auto& x : inst.points) {
      ++points;
      if (fstar(embed(m, CarrierPoint{x})) != m->fiber(CarrierPoint{x})) ++bad;
    }
  }
  return {bad == 0, std::to_string(points - bad) + "/" + std::to_string(points)};
}

Outcome sqrt2_anchor() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto inst = parse_instance(
      R"({"base":{"kind":"one_point","point":"*"},"carrier":{"kind":"rational_interval","lo":"1","hi":"2"},)"
      R"("fiber_map":{"kind":"constant","point":"*"},"distance":{"kind":"abs_diff"}})");
  const auto p = resolve_point(parse_point_spec("newton_sqrt(2)"), inst.mapping);
  const auto q = resolve_point(parse_point_spec("const(3/2)"), inst.mapping);
  const Rational eps(1, 1000000);
  const Rational got = dstar_approx(p, q, eps);
  const double t = seconds_since(t0);
  const Rational anchor = Rational::parse("85786437626904954/1000000000000000000");
  // The anchor itself must agree with an independent bracket of √2.
  const auto [lo, hi] = metcomp::testing::sqrt_bracket(Rational(2), metcomp::testing::ten_to_minus(50));
  const bool anchor_ok = (Rational(3, 2) - hi - anchor).abs() < metcomp::testing::ten_to_minus(17);
  const Rational err = (got - anchor).abs();
  return {err <= eps && anchor_ok && t < 1.0,
          "d*=" + got.decimal(18) + " |err|=" + err.decimal(12) + " " + fmt_seconds(t)};
}

Outcome dstar_pseudometric() {
  const auto inst = parse_instance(
      R"({"base":{"kind":"one_point","point":"*"},"carrier":{"kind":"rational_interval","lo":"1","hi":"4"},)"
      R"("fiber_map":{"kind":"constant","point":"*"},"distance":{"kind":"abs_diff"}})");
  std::mt19937_64 rng(20240601);
  auto spec = [&]() -> std::string {
    const Rational t(8 + static_cast<long>(rng() % 16), 8);  // [1, 23/8]
    switch (rng() % 3) {
      case 0: return "const(" + t.str() + ")";
      case 1: return "newton_sqrt(" + Rational(4 + static_cast<long>(rng() % 12), 4).str() + ")";
      default:
        return "table(" + (t + Rational(1, 3)).str() + "," + (t + Rational(1, 4)).str() + ";tail=" + t.str() + ")";
    }
  };
  const Rational eps(1, 1000000000);
  std::size_t bad = 0;
  const std::size_t triples = 1000;
  for (std::size_t i = 0; i < triples; ++i) {
    const auto a = resolve_point(parse_point_spec(spec()), inst.mapping);
    const auto b = resolve_point(parse_point_spec(spec()), inst.mapping);
    const auto c = resolve_point(parse_point_spec(spec()), inst.mapping);
    const Rational ab = dstar_approx(a, b, eps), ba = dstar_approx(b, a, eps);
    const bool sym = (ab - ba).abs() <= Rational(2) * eps;
    const bool tri = dstar_approx(a, c, eps) <= ab + dstar_approx(b, c, eps) + Rational(3) * eps;
    if (!sym || !tri) ++bad;
  }
  return {bad == 0, std::to_string(triples - bad) + "/" + std::to_string(triples) + " triples"};
}

Outcome theorem3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0, complete = 0;
  for (const auto& inst : suite()) {
    const bool f = is_complete_filter(inst).holds;
    const bool n = is_complete_net(inst).holds;
    if (f == n) ++agree;
    if (f) ++complete;
  }
  const double t = seconds_since(t0);
  return {agree == suite().size() && t < 60.0,
          std::to_string(agree) + "/" + std::to_string(suite().size()) + " agree (" + std::to_string(complete) +
              " complete) " + fmt_seconds(t)};
}

Outcome lemma2() {
  std::size_t ok = 0;
  for (const auto& inst : suite()) ok += lemma2_check(inst).holds ? 1 : 0;
  return {ok == suite().size(), std::to_string(ok) + "/" + std::to_string(suite().size())};
}

Outcome completion_complete() {
  std::size_t ok = 0, grown = 0;
  for (const auto& inst : suite()) {
    const auto c = finite_completion(inst);
    if (c.completed.size() > inst.size()) ++grown;
    if (is_complete_filter(c.completed).holds && embedding_is_isometric(inst, c) && embedding_is_dense(c)) ++ok;
  }
  return {ok == suite().size(), std::to_string(ok) + "/" + std::to_string(suite().size()) + " (" +
                                    std::to_string(grown) + " gained points)"};
}

Outcome worked_incomplete() {
  const auto inst = metcomp::testing::incomplete_sierpinski();
  const auto f = is_complete_filter(inst);
  const auto n = is_complete_net(inst);
  const bool cert = !f.holds && f.certificate && f.certificate->str() == "(a,{x_b})" && !n.holds && n.certificate &&
                    n.certificate->str() == "(a,{x_b})";
  const auto c = finite_completion(inst);
  const bool two = c.completed.size() == 2;
  const bool zero = two && c.completed.dist[0][1].is_zero() && c.completed.dist[1][0].is_zero();
  const bool complete = is_complete_filter(c.completed).holds;
  return {cert && two && zero && complete,
          std::string("certificate ") + (f.certificate ? f.certificate->str() : "none") + ", completion size " +
              std::to_string(c.completed.size()) + ", complete " + (complete ? "yes" : "no")};
}

Outcome density() {
  const std::vector<Rational> precisions{Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
  struct Case {
    CompletionPoint p;
    BasicOpen v;
  };
  std::vector<Case> cases;
  const auto line = metcomp::testing::rational_line(Rational(1), Rational(16));
  for (long a : {2, 3, 5, 7, 10}) cases.push_back({CompletionPoint{newton_sqrt_seq(line, Rational(a))}, WholeSpace{}});
  // Completion points over finite instances: each point tied to every base
  // point whose neighborhoods all contain its fiber, against every basic
  // neighborhood of that base point.
  for (std::uint64_t seed = 1; cases.size() < 40 && seed <= kSuiteSeeds; ++seed) {
    const auto& inst = suite()[seed - 1];
    const auto m = inst.mapping();
    for (const auto& x : inst.points) {
      for (const auto& y : inst.base.points) {
        try {
          const CompletionPoint p{table_seq(m, {}, CarrierPoint{x}, BasePoint{y})};
          for (const auto& v : m->base().neighborhood_basis(BasePoint{y})) cases.push_back({p, v});
        } catch (const InputError&) {
        }
      }
    }
  }
  std::size_t trials = 0, bad = 0;
  for (std::size_t i = 0; trials < 100; ++i) {
    const auto& c = cases[i % cases.size()];
    const Rational& eps = precisions[i % precisions.size()];
    const auto x = density_witness(c.p, eps, c.v);
    const Rational d = dstar_approx(c.p, embed(c.p.mapping(), x), eps / Rational(4));
    ++trials;
    if (!(d <= eps + eps / Rational(4)) || !contains(c.v, c.p.mapping()->fiber(x))) ++bad;
  }
  return {bad == 0, std::to_string(trials - bad) + "/" + std::to_string(trials) + " over " +
                        std::to_string(std::min<std::size_t>(cases.size(), 100)) + " cases"};
}

RegularCompletionSeq from_terms(const BasePoint& y, std::function<CompletionPoint(Index)> term) {
  RegularCompletionSeq psi;
  psi.term = std::move(term);
  psi.y = y;
  psi.tie = TyingWitness{[](const BasicOpen&) -> Index { return 1; }};
  return psi;
}

Outcome limit_convergence() {
  const auto line = metcomp::testing::rational_line(Rational(1), Rational(16));
  const BasePoint star{std::string("*")};
  std::vector<RegularCompletionSeq> seqs;
  for (long a : {2, 3, 5, 6, 7, 8, 10, 11}) seqs.push_back(embedded_sequence(newton_sqrt_seq(line, Rational(a))));
  // Points of X* that are not embedded: √(a + 1/n).
  for (long a : {2, 3, 5, 7, 11, 13}) {
    seqs.push_back(from_terms(star, [line, a](Index n) {
      return CompletionPoint{newton_sqrt_seq(line, Rational(a) + reciprocal(n))};
    }));
  }
  seqs.push_back(from_terms(star, [line](Index n) { return embed(line, CarrierPoint{Rational(1) + reciprocal(n)}); }));
  seqs.push_back(from_terms(star, [line](Index n) { return embed(line, CarrierPoint{Rational(2) - reciprocal(n)}); }));
  seqs.push_back(from_terms(star, [line](Index n) {
    const Rational step = reciprocal(n);
    return embed(line, CarrierPoint{n % 2 ? Rational(3) - step : Rational(3) + step});
  }));
  const auto sier = metcomp::testing::sierpinski().mapping();
  seqs.push_back(from_terms(BasePoint{std::string("b")}, [sier](Index n) {
    return embed(sier, CarrierPoint{std::string(n % 2 ? "x_a" : "x_b")});
  }));
  const auto inc = metcomp::testing::incomplete_sierpinski().mapping();
  seqs.push_back(from_terms(BasePoint{std::string("a")},
                            [inc](Index) { return embed(inc, CarrierPoint{std::string("x_b")}); }));
  seqs.push_back(embedded_sequence(table_seq(sier, {CarrierPoint{std::string("x_b")}}, CarrierPoint{std::string("x_a")})));

  std::size_t checks = 0, bad = 0;
  for (const auto& psi : seqs) {
    const auto lim = limit_point(psi);
    for (Index k = 1; k <= 20; ++k) {
      const Rational e = reciprocal(4 * k);
      ++checks;
      if (!(dstar_approx(psi.at(k), lim, e) <= reciprocal(k) + e)) ++bad;
    }
  }
  return {bad == 0 && seqs.size() == 20, std::to_string(seqs.size()) + " sequences, " +
                                             std::to_string(checks - bad) + "/" + std::to_string(checks)};
}

Outcome cli_round_trip() {
  const std::string data = METCOMP_DATA_DIR;
  const auto dir = std::filesystem::temp_directory_path() / "metcomp_acceptance";
  std::filesystem::create_directories(dir);
  const auto out_path = (dir / "completed.json").string();
  auto run = [](std::vector<std::string> args, std::string* err = nullptr) {
    std::ostringstream out, e;
    const int code = run_command(args, out, e);
    if (err) *err = e.str();
    return code;
  };
  const int construct = run({"complete-construct", data + "/incomplete_sierpinski.json", "--out", out_path});
  const int validate = run({"validate", out_path});
  const int check = run({"complete-check", out_path});
  std::string err;
  const int malformed = run({"validate", data + "/malformed_decimal.json"}, &err);
  const bool path = err.find("/distance/matrix/0/1") != std::string::npos;
  std::ostringstream detail;
  detail << "construct " << construct << ", validate " << validate << ", complete-check " << check
         << ", malformed " << malformed << (path ? " with path" : " without path");
  return {construct == 0 && validate == 0 && check == 0 && malformed == 2 && path, detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"isometry", isometry},
      {"projection", projection},
      {"sqrt2_anchor", sqrt2_anchor},
      {"dstar_pseudometric", dstar_pseudometric},
      {"filter_net_agreement", theorem3},
      {"cluster_limit_fiber", lemma2},
      {"completion_complete", completion_complete},
      {"worked_incomplete", worked_incomplete},
      {"density_witness", density},
      {"limit_convergence", limit_convergence},
      {"cli_round_trip", cli_round_trip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("CRITERION %zu %s %s %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("ACCEPTANCE %zu/%zu\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
