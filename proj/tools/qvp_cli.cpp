// qvp: command-line front end for the outcome-space outer approximation solver.
//
//   qvp solve  problem.json --epsilon 0.1 [--out result.json] [--csv dir]
//   qvp verify problem.json --x 1.5,2
//   qvp bounds problem.json

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "qvp/driver.hpp"
#include "qvp/problem_io.hpp"
#include "qvp/result_io.hpp"
#include "qvp/sampling.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitCap = 3;

struct RunConfig {
  std::string problem_path;
  double epsilon = 0.0;
  std::string direction;
  std::string selection = "fifo";
  int workers = 1;
  std::string out_path = "result.json";
  std::string csv_dir;
  double tol_scalar = 1e-6;
  double tol_feas = 1e-7;
  std::uint64_t seed = 0;
  std::uint64_t max_scalarizations = 10'000'000;
  std::string x;
};

Eigen::VectorXd parse_vector(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw qvp::Error(qvp::ErrorCode::kParse, fmt::format("{}: '{}' is not a number", flag, item));
    }
    values.push_back(value);
  }
  if (values.empty()) throw qvp::Error(qvp::ErrorCode::kParse, fmt::format("{}: expected a,b,...", flag));
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string show(const Eigen::VectorXd& v) {
  return fmt::format("({})", fmt::join(v.data(), v.data() + v.size(), ", "));
}

qvp::SolveOptions solve_options(const RunConfig& cfg) {
  qvp::SolveOptions options;
  options.epsilon = cfg.epsilon;
  options.workers = cfg.workers;
  options.max_scalarizations = cfg.max_scalarizations;
  options.selection = cfg.selection == "max-gap" ? qvp::Selection::kMaxGap : qvp::Selection::kFifo;
  if (!cfg.direction.empty()) options.direction = parse_vector(cfg.direction, "--direction");
  options.bounds.scalarize.tol_scalar = cfg.tol_scalar;
  options.bounds.scalarize.oracle.tol_feas = cfg.tol_feas;
  return options;
}

int cmd_solve(const RunConfig& cfg) {
  const auto problem = qvp::load_problem(cfg.problem_path);
  const auto result = qvp::solve(problem, solve_options(cfg));
  if (!cfg.out_path.empty()) qvp::write_result(result, cfg.out_path);
  if (!cfg.csv_dir.empty()) {
    std::filesystem::create_directories(cfg.csv_dir);
    qvp::write_front_csv(result, std::filesystem::path(cfg.csv_dir) / "front.csv");
    qvp::write_vertices_csv(result, std::filesystem::path(cfg.csv_dir) / "vertices.csv");
  }
  if (result.ideal_attained) std::cout << "ideal point attained; the front is {m}\n";
  std::cout << qvp::summary_line(result) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const auto problem = qvp::load_problem(cfg.problem_path);
  const auto x = parse_vector(cfg.x, "--x");
  if (x.size() != problem.n) {
    throw qvp::Error(qvp::ErrorCode::kDimensionMismatch,
                     fmt::format("--x has {} entries, problem has n = {}", x.size(), problem.n));
  }
  const auto options = solve_options(cfg);
  const auto d = qvp::resolve_direction(problem, options);
  try {
    const auto verdict = qvp::verify_wes(problem, x, d, options.bounds.scalarize);
    std::cout << (verdict.weakly_efficient ? "true" : "false") << fmt::format(" t={:.6g}\n", verdict.t);
  } catch (const qvp::Error& e) {
    if (e.code() != qvp::ErrorCode::kInfeasiblePoint) throw;
    std::cout << "false (x is not feasible: " << e.what() << ")\n";
  }
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg) {
  const auto problem = qvp::load_problem(cfg.problem_path);
  const auto options = solve_options(cfg);
  const auto ideal = qvp::ideal_point(problem, options.bounds);
  std::cout << "computed ideal point m = " << show(ideal.m) << '\n';
  if (problem.box_m) std::cout << "file overrides m = " << show(*problem.box_m) << '\n';

  try {
    const auto sb = qvp::simplex_bound(problem, options.bounds);
    std::cout << "simplex alpha0 = " << show(sb.simplex.vertices.front()) << fmt::format(", U_cap = {}\n", sb.simplex.cap);
    std::cout << "simplex bound M = " << show(sb.M) << '\n';
  } catch (const qvp::Error& e) {
    if (e.code() != qvp::ErrorCode::kDenominatorNonPositiveOnSimplex && !problem.box_M) throw;
    std::cout << "simplex bound unavailable: " << e.what() << '\n';
  }
  if (problem.box_M) std::cout << "file overrides M = " << show(*problem.box_M) << '\n';

  const auto m = problem.box_m.value_or(ideal.m);
  std::cout << "box [m, M] lower = " << show(m) << '\n';

  // Sampled outcome range, a sanity check on M.
  const auto samples = qvp::sample_feasible(problem.feasible_set, 10'000, cfg.seed, 1'000'000);
  if (!samples.empty()) {
    Eigen::VectorXd hi = qvp::evaluate_all(problem, samples.front());
    for (const auto& x : samples) hi = hi.cwiseMax(qvp::evaluate_all(problem, x));
    std::cout << fmt::format("max sampled outcome over {} feasible points = ", samples.size()) << show(hi) << '\n';
  }
  return kExitOk;
}

int exit_code_for(qvp::ErrorCode code) {
  switch (code) {
    case qvp::ErrorCode::kInfeasibleSet: return kExitInfeasible;
    case qvp::ErrorCode::kIterationCapExceeded: return kExitCap;
    default: return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("QVP_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"Outer approximation of the weakly nondominated set of a strictly quasiconvex multiobjective program"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("problem", cfg.problem_path, "problem JSON file")->required();
    sub->add_option("--direction", cfg.direction, "strictly positive direction a,b,...");
    sub->add_option("--tol-scalar", cfg.tol_scalar, "scalarization bisection tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-feas", cfg.tol_feas, "feasibility tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for sampling diagnostics");
  };

  auto* solve = app.add_subcommand("solve", "run the solver and write the result");
  add_common(solve);
  solve->add_option("--epsilon", cfg.epsilon, "approximation tolerance")->required()->check(CLI::PositiveNumber);
  solve->add_option("--selection", cfg.selection, "vertex selection rule")
      ->check(CLI::IsMember({"fifo", "max-gap"}));
  solve->add_option("--workers", cfg.workers, "parallel scalarizations per round")->check(CLI::PositiveNumber);
  solve->add_option("--out", cfg.out_path, "result JSON path");
  solve->add_option("--csv", cfg.csv_dir, "directory for front.csv and vertices.csv");
  solve->add_option("--max-scalarizations", cfg.max_scalarizations, "safety cap")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "check whether x is weakly efficient");
  add_common(verify);
  verify->add_option("--x", cfg.x, "decision point a,b,...")->required();

  auto* bounds = app.add_subcommand("bounds", "print the enclosing outcome box");
  add_common(bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_bounds(cfg);
  } catch (const qvp::Error& e) {
    std::cerr << "error [" << qvp::to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
