// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qvp/result_io.hpp"
#include "support.hpp"

using namespace qvp;
using qvp::test::vec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SolveOptions with_epsilon(double epsilon, int workers = 1) {
  SolveOptions options;
  options.epsilon = epsilon;
  options.workers = workers;
  return options;
}

bool within_rel(double value, double target, double rel) { return std::abs(value - target) <= rel * target; }

bool close(const OutcomePoint& a, const OutcomePoint& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// Every point of `expected` matches some point of `got` and the sizes agree.
bool same_points(const std::vector<OutcomePoint>& got, const std::vector<OutcomePoint>& expected, double tol) {
  if (got.size() != expected.size()) return false;
  for (const auto& e : expected) {
    if (std::none_of(got.begin(), got.end(), [&](const OutcomePoint& g) { return close(g, e, tol); })) return false;
  }
  return true;
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, std::string note) {
    if (!ok) pass = false;
    notes.push_back(fmt::format("{}{}", ok ? "" : "[x] ", note));
  }
};

void report(int criterion, const std::string& title, const Verdict& verdict) {
  std::string detail;
  for (const auto& n : verdict.notes) detail += (detail.empty() ? "" : "; ") + n;
  std::printf("criterion %d %-28s %s  %s\n", criterion, title.c_str(), verdict.pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

// 1 ------------------------------------------------------------------------

Verdict trace() {
  Verdict out;
  const auto ex1 = test::load("example1.json");
  const auto start = Clock::now();
  const auto result = solve(ex1, with_epsilon(0.5));
  const double elapsed = seconds_since(start);

  const double t_ref[] = {0.6404, 0.1626, 0.5257, 0.1005, 0.3571, 0.1154, 0.2377};
  const OutcomePoint v_ref[] = {vec({-1, -1}),          vec({-0.3596, -1}),      vec({-1, -0.3596}),
                                vec({-0.4743, -0.3596}), vec({-1, 0.1661}),       vec({-0.6429, 0.1661}),
                                vec({-1, 0.5232})};
  const OutcomePoint w_ref[] = {vec({-0.3596, -0.3596}), vec({-0.1970, -0.8374}), vec({-0.4743, 0.1661}),
                                vec({-0.3738, -0.2591}), vec({-0.6429, 0.5232}),  vec({-0.5275, 0.2815}),
                                vec({-0.7623, 0.7608})};
  const Action a_ref[] = {Action::kCut, Action::kAccepted, Action::kCut,     Action::kAccepted,
                          Action::kCut, Action::kAccepted, Action::kAccepted};
  constexpr double tol = 5e-4;

  bool steps_ok = result.log.size() == 7;
  double worst = 0.0;
  for (std::size_t k = 0; steps_ok && k < 7; ++k) {
    const auto& rec = result.log[k];
    worst = std::max({worst, std::abs(rec.t - t_ref[k]), (rec.v - v_ref[k]).cwiseAbs().maxCoeff(),
                      (rec.w - w_ref[k]).cwiseAbs().maxCoeff()});
    steps_ok = steps_ok && rec.action == a_ref[k];
  }
  out.require(steps_ok && worst <= tol, fmt::format("7 iterations, max deviation {:.1e}", worst));

  const std::vector<OutcomePoint> V_ref = {v_ref[1], v_ref[3], v_ref[5], v_ref[6]};
  out.require(same_points(result.V_eps, V_ref, tol), fmt::format("|V_eps|={}", result.V_eps.size()));
  std::vector<OutcomePoint> ws;
  for (const auto& q : result.Y_WN) ws.push_back(q.w);
  out.require(same_points(ws, std::vector<OutcomePoint>(std::begin(w_ref), std::end(w_ref)), tol),
              fmt::format("|Y_WN|={}", ws.size()));
  out.require(elapsed < 5.0, fmt::format("{:.3f}s", elapsed));
  return out;
}

// 2, 3, 4 -------------------------------------------------------------------

struct CountRow {
  double epsilon;
  double y_wn;
  double v_eps;
};

Verdict counts(const QvpProblem& problem, const std::vector<CountRow>& rows, double rel, double time_limit,
               int workers) {
  Verdict out;
  for (const auto& row : rows) {
    const auto start = Clock::now();
    const auto result = solve(problem, with_epsilon(row.epsilon, workers));
    const double elapsed = seconds_since(start);
    const auto y = static_cast<double>(result.Y_WN.size());
    const auto v = static_cast<double>(result.V_eps.size());
    const bool ok = within_rel(y, row.y_wn, rel) && within_rel(v, row.v_eps, rel) && elapsed < time_limit;
    out.require(ok, fmt::format("eps={} Y_WN {}/{} V_eps {}/{} {:.2f}s", row.epsilon, y, row.y_wn, v, row.v_eps,
                                elapsed));
  }
  return out;
}

// 5 ------------------------------------------------------------------------

/// Grid front of 10^6 box samples, compared against the computed hulls.
void grid_front(Verdict& out, const std::string& name, const QvpProblem& problem, double epsilon) {
  const auto result = solve(problem, with_epsilon(epsilon));
  std::vector<OutcomePoint> ys;
  for (const auto& x : test::feasible_grid(problem, 1000)) ys.push_back(evaluate_all(problem, x));
  const auto front = test::weakly_nondominated(std::move(ys));

  std::vector<OutcomePoint> inner;
  for (const auto& q : result.Y_WN) inner.push_back(q.w);
  const auto outer = result.outer();
  const double dnorm = result.direction.norm();

  double worst = -std::numeric_limits<double>::infinity();
  std::size_t outside = 0;
  for (const auto& y : front) {
    worst = std::max(worst, test::distance_along(y, inner, result.direction) * dnorm);
    if (!outer.contains(test::clip(y, result.box.M))) ++outside;
  }
  out.require(worst <= epsilon + 1e-2 && outside == 0,
              fmt::format("{} eps={}: {} front points, max distance {:.4f}, {} outside U", name, epsilon, front.size(),
                          worst, outside));
}

Verdict oracle_equivalence() {
  Verdict out;
  grid_front(out, "square", test::identity_square(), 0.1);
  const auto ex1 = test::load("example1.json");
  grid_front(out, "first example", ex1, 0.5);
  grid_front(out, "first example", ex1, 0.05);
  return out;
}

// 6 ------------------------------------------------------------------------

struct Violations {
  std::map<std::string, std::size_t> counts;
  void add(const std::string& name, bool ok) {
    counts.try_emplace(name, 0);
    if (!ok) ++counts[name];
  }
};

OutcomePoint random_in_box(std::mt19937_64& rng, const OutcomeBox& box) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  OutcomePoint y(box.m.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = box.m(i) + unit(rng) * (box.M(i) - box.m(i));
  return y;
}

void check_instance(const QvpProblem& problem, std::mt19937_64& rng, Violations& bad) {
  SolveOptions options;
  const auto d = resolve_direction(problem, options);
  const auto box = make_box(problem, d, options.bounds);
  options.epsilon = 0.08 * (box.M - box.m).norm();
  OuterApproximation solver(problem, box, d, options);
  const double tol = solver.vertices().tolerance();

  const auto xs = sample_feasible(problem.feasible_set, 500, rng(), 10'000'000);
  std::vector<OutcomePoint> outcomes;
  for (const auto& x : xs) outcomes.push_back(test::clip(evaluate_all(problem, x), box.M));

  while (!solver.done()) {
    const VertexSet before = solver.vertices();
    const std::size_t logged = solver.log().size();
    solver.step();
    const VertexSet& after = solver.vertices();
    const auto& rec = solver.log()[logged];

    for (int s = 0; s < 300; ++s) {
      const auto y = random_in_box(rng, box);
      bad.add("nesting", !after.contains(y) || before.contains(y));
    }
    bool all_in = true;
    for (const auto& y : outcomes) all_in = all_in && after.contains(y);
    bad.add("outcomes stay inside P^k", all_in);

    if (rec.action != Action::kCut) continue;
    bool proper = true;
    for (const auto& [i, u] : after.vertices()) {
      for (const auto& [j, v] : after.vertices()) proper = proper && (i == j || !weakly_below(u, v, tol));
    }
    bad.add("properness", proper);

    std::vector<OutcomePoint> pool;
    for (const auto& [id, u] : before.vertices()) {
      if (u != rec.v) pool.push_back(u);
    }
    for (Eigen::Index i = 0; i < rec.v.size(); ++i) {
      OutcomePoint z = rec.v;
      z(i) = std::min(rec.w(i), box.M(i));
      if (z(i) < box.M(i) - tol) pool.push_back(z);
    }
    bad.add("RIV = full filtering", test::same_sets(after.points(), test::minimal_points(pool, tol)));
  }

  const auto result = solver.result();
  bad.add("termination gap", result.final_gap <= options.epsilon);

  // sandwich: inner points are attained (by witness), every outcome is in U
  const auto outer = result.outer();
  for (const auto& q : result.Y_WN) {
    const double slack = 1e-6 * std::max(1.0, (box.M - box.m).cwiseAbs().maxCoeff());
    bad.add("sandwich L in Y", (q.f.array() <= q.w.array() + slack).all() &&
                                   evaluate_constraints(problem.feasible_set, q.x) <= 1e-7);
    bad.add("sandwich L in U", outer.contains(test::clip(q.w, box.M)));
    bad.add("verify_wes on witnesses", verify_wes(problem, q.x, d).weakly_efficient);
  }
  const auto more = sample_feasible(problem.feasible_set, 2000, rng(), 10'000'000);
  bool contained = true;
  for (const auto& x : more) contained = contained && outer.contains(test::clip(evaluate_all(problem, x), box.M));
  bad.add("sandwich Y in U", contained);

  // scalarization monotonicity and translation identity
  const ScalarizeOptions& so = options.bounds.scalarize;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 3; ++s) {
    const auto v = random_in_box(rng, box);
    OutcomePoint v2 = v;
    for (Eigen::Index i = 0; i < v.size(); ++i) v2(i) += unit(rng) * (box.M(i) - v(i));
    const double tv = solve_chebyshev(problem, v, d, box.m, so).t;
    const double tv2 = solve_chebyshev(problem, v2, d, box.m, so).t;
    bad.add("monotonicity in v", tv >= tv2 - 2 * so.tol_scalar);

    const double shift = (unit(rng) - 0.5) * 0.2 * (box.M - box.m).cwiseAbs().minCoeff();
    const double ts = solve_chebyshev(problem, v + shift * d.vector(), d, std::nullopt, so).t;
    const double t0 = solve_chebyshev(problem, v, d, std::nullopt, so).t;
    bad.add("translation identity", std::abs(ts - (t0 - shift)) <= 2 * so.tol_scalar);
  }
}

Verdict invariants() {
  Verdict out;
  Violations bad;
  std::mt19937_64 rng(2024);
  int instances = 0;
  int degenerate = 0;
  const auto start = Clock::now();
  for (int trial = 0; instances < 200; ++trial) {
    const int n = 2 + trial % 2;
    const int p = 2 + (trial / 2) % 2;
    const auto problem = test::random_problem(rng, n, p);
    try {
      check_instance(problem, rng, bad);
      ++instances;
    } catch (const DegenerateIdealAttained&) {
      ++degenerate;
    } catch (const Error& e) {
      ++instances;
      bad.add(fmt::format("error {}", e.what()), false);
    }
  }
  for (const auto& [name, count] : bad.counts) out.require(count == 0, fmt::format("{} {}", name, count));
  out.notes.push_back(fmt::format("{} instances ({} degenerate skipped) {:.1f}s", instances, degenerate,
                                  seconds_since(start)));
  return out;
}

// 7 ------------------------------------------------------------------------

Verdict determinism() {
  Verdict out;
  const auto ex1 = test::load("example1.json");
  auto run = [&] {
    auto doc = result_to_json(solve(ex1, with_epsilon(0.5)));
    doc.erase("wall_time_s");
    return doc.dump();
  };
  const auto a = run();
  const auto b = run();
  out.require(a == b, fmt::format("{} bytes", a.size()));
  return out;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const auto ex1 = test::load("example1.json");
  const auto ex2 = test::load("example2.json");
  const auto ex3 = test::load("example3.json");

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"trace at eps 0.5", trace},
      {"first example counts",
       [&] {
         return counts(ex1, {{0.1, 35, 18}, {0.05, 67, 34}, {0.025, 117, 59}, {0.0125, 231, 116}}, 0.20, 30.0, 1);
       }},
      {"second example counts",
       [&] {
         return counts(ex2, {{0.1, 19, 10}, {0.08, 25, 13}, {0.04, 70, 35}, {0.02, 110, 55}, {0.01, 170, 84}}, 0.20,
                       60.0, 1);
       }},
      {"third example at eps 800", [&] { return counts(ex3, {{800, 606, 1122}}, 0.25, 600.0, 4); }},
      {"grid front oracle", oracle_equivalence},
      {"random invariants", invariants},
      {"determinism", determinism},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict verdict;
    try {
      verdict = criteria[i].second();
    } catch (const std::exception& e) {
      verdict.require(false, fmt::format("exception: {}", e.what()));
    }
    report(static_cast<int>(i + 1), criteria[i].first, verdict);
    all = all && verdict.pass;
  }
  return all ? 0 : 1;
}
