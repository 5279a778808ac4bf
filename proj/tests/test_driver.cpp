#include "doctest.h"

#include "support.hpp"

using namespace qvp;
using qvp::test::vec;

namespace {

SolveOptions with_epsilon(double epsilon) {
  SolveOptions options;
  options.epsilon = epsilon;
  return options;
}

OuterApproximation make_solver(const QvpProblem& problem, const SolveOptions& options) {
  const auto d = resolve_direction(problem, options);
  return OuterApproximation(problem, make_box(problem, d, options.bounds), d, options);
}

}  // namespace

TEST_CASE("initial vertex set is the lower corner") {
  const auto ex1 = test::load("example1.json");
  auto solver = make_solver(ex1, with_epsilon(0.5));
  REQUIRE(solver.vertices().size() == 1);
  const auto& m = solver.vertices().vertices().begin()->second;
  CHECK(std::abs(m(0) + 1.0) <= 1e-5);
  CHECK(std::abs(m(1) + 1.0) <= 1e-5);
  const auto report = solver.gap_report();
  CHECK(report.current_gap == 0.0);
  CHECK(report.scalarizations == 0);
  CHECK(report.classified == 0);

  const auto ex3 = test::load("example3.json");
  auto solver3 = make_solver(ex3, with_epsilon(800));
  CHECK(solver3.vertices().vertices().begin()->second == vec({-1110, -4390, -4390}));
}

TEST_CASE("gap report after the first iteration") {
  const auto ex1 = test::load("example1.json");
  auto solver = make_solver(ex1, with_epsilon(0.5));
  solver.step();
  const auto report = solver.gap_report();
  CHECK(std::abs(report.current_gap - 0.6404 * std::sqrt(2.0)) <= 1e-3);
  CHECK(report.vertices == 2);
  CHECK(report.classified == 0);
  CHECK(report.scalarizations == 1);
}

TEST_CASE("first example trace at epsilon 0.5") {
  const auto ex1 = test::load("example1.json");
  const auto result = solve(ex1, with_epsilon(0.5));
  REQUIRE(result.log.size() == 7);
  const double t_ref[] = {0.6404, 0.1626, 0.5257, 0.1005, 0.3571, 0.1154, 0.2377};
  const Action a_ref[] = {Action::kCut,      Action::kAccepted, Action::kCut,     Action::kAccepted,
                            Action::kCut,      Action::kAccepted, Action::kAccepted};
  for (std::size_t k = 0; k < 7; ++k) {
    CAPTURE(k);
    CHECK(std::abs(result.log[k].t - t_ref[k]) <= 5e-4);
    CHECK(result.log[k].action == a_ref[k]);
  }
  CHECK(result.V_eps.size() == 4);
  CHECK(result.Y_WN.size() == 7);
  CHECK(result.scalarizations == 7);
  CHECK(std::abs(result.final_gap - 0.3361) <= 5e-4);
}

TEST_CASE("huge epsilon terminates after one scalarization") {
  const auto ex2 = test::load("example2.json");
  const auto result = solve(ex2, with_epsilon(1e3));
  CHECK(result.scalarizations == 1);
  CHECK(result.V_eps.size() == 1);
}

TEST_CASE("parallel rounds reproduce the sequential result") {
  const auto ex1 = test::load("example1.json");
  auto options = with_epsilon(0.05);
  const auto seq = solve(ex1, options);
  options.workers = 4;
  const auto par = solve(ex1, options);
  CHECK(par.V_eps == seq.V_eps);
  CHECK(par.Y_WN.size() == seq.Y_WN.size());
  CHECK(par.scalarizations == seq.scalarizations);
}

TEST_CASE("max-gap selection terminates with the same guarantees") {
  const auto ex2 = test::load("example2.json");
  auto options = with_epsilon(0.05);
  options.selection = Selection::kMaxGap;
  const auto result = solve(ex2, options);
  CHECK(result.final_gap <= 0.05);
  const auto outer = result.outer();
  for (const auto& q : result.Y_WN) CHECK(outer.contains(test::clip(q.f, result.box.M)));
}

TEST_CASE("iteration cap") {
  const auto ex1 = test::load("example1.json");
  auto options = with_epsilon(0.01);
  options.max_scalarizations = 20;
  try {
    solve(ex1, options);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIterationCapExceeded);
  }
}

TEST_CASE("invalid options") {
  const auto ex1 = test::load("example1.json");
  CHECK_THROWS_AS(solve(ex1, with_epsilon(0.0)), Error);
  auto options = with_epsilon(0.1);
  options.workers = 0;
  CHECK_THROWS_AS(solve(ex1, options), Error);
  options.workers = 1;
  options.direction = vec({1, 1, 1});
  CHECK_THROWS_AS(solve(ex1, options), Error);
}

TEST_CASE("es membership") {
  const auto ex1 = test::load("example1.json");
  const auto result = solve(ex1, with_epsilon(0.5));
  for (const auto& q : result.Y_WN) CHECK(es_membership(result, ex1, q.x) == EsMembership::kInES);
  CHECK(es_membership(result, ex1, vec({7, 1})) == EsMembership::kNotInES);
  CHECK_THROWS_AS(es_membership(result, ex1, vec({1, 1, 1})), Error);

  const auto toy = test::identity_square();
  const auto fine = solve(toy, with_epsilon(0.05));
  CHECK(es_membership(fine, toy, vec({1, 1})) != EsMembership::kInES);
  CHECK(es_membership(fine, toy, vec({0, 0.5})) == EsMembership::kInES);
}

TEST_CASE("nesting and volume across iterations") {
  const auto ex2 = test::load("example2.json");
  auto solver = make_solver(ex2, with_epsilon(0.05));
  const auto xs = sample_feasible(ex2.feasible_set, 2000, 9, 1'000'000);
  std::vector<OutcomePoint> ys;
  for (const auto& x : xs) ys.push_back(test::clip(evaluate_all(ex2, x), solver.box().M));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& m = solver.box().m;
  const auto& M = solver.box().M;
  std::vector<OutcomePoint> probes;
  for (int s = 0; s < 4000; ++s) probes.push_back(m + (M - m).cwiseProduct(vec({unit(rng), unit(rng)})));
  auto volume = [&](const VertexSet& V) {
    return std::count_if(probes.begin(), probes.end(), [&](const auto& y) { return V.contains(y); });
  };

  long previous = volume(solver.vertices());
  while (!solver.done()) {
    const VertexSet before = solver.vertices();
    solver.step();
    for (const auto& y : ys) CHECK(solver.vertices().contains(y));
    for (const auto& y : probes) {
      if (solver.vertices().contains(y)) CHECK(before.contains(y));
    }
    const long now = volume(solver.vertices());
    CHECK(now <= previous);
    previous = now;
  }
}

TEST_CASE("every stored witness passes verify") {
  const auto ex2 = test::load("example2.json");
  const auto result = solve(ex2, with_epsilon(0.1));
  const Direction d(result.direction);
  for (const auto& q : result.Y_WN) {
    CHECK(verify_wes(ex2, q.x, d).weakly_efficient);
    CHECK((q.f.array() <= q.w.array() + 1e-5).all());
  }
}

TEST_CASE("identical runs give identical logs") {
  const auto ex2 = test::load("example2.json");
  const auto a = solve(ex2, with_epsilon(0.08));
  const auto b = solve(ex2, with_epsilon(0.08));
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t k = 0; k < a.log.size(); ++k) {
    CHECK(a.log[k].v == b.log[k].v);
    CHECK(a.log[k].t == b.log[k].t);
  }
}
