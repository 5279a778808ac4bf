#include "qvp/result_io.hpp"

#include <fstream>

#include <fmt/format.h>

namespace qvp {

using nlohmann::json;

namespace {

json vec(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vec_of(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "result: expected an array of numbers");
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kValidation, "cannot write '" + path.string() + "'");
  return out;
}

std::string csv_row(const Eigen::VectorXd& v) {
  std::string row;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) row += ',';
    row += fmt::format("{:.17g}", v(i));
  }
  return row;
}

std::string csv_header(const char* prefix, Eigen::Index count) {
  std::string row;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i > 0) row += ',';
    row += fmt::format("{}{}", prefix, i + 1);
  }
  return row;
}

}  // namespace

json result_to_json(const SolveResult& result) {
  json doc;
  doc["epsilon"] = result.epsilon;
  doc["direction"] = vec(result.direction);
  doc["box"] = {{"m", vec(result.box.m)}, {"M", vec(result.box.M)}};
  json veps = json::array();
  for (const auto& v : result.V_eps) veps.push_back(vec(v));
  doc["V_eps"] = std::move(veps);
  json front = json::array();
  for (const auto& q : result.Y_WN) front.push_back({{"w", vec(q.w)}, {"f", vec(q.f)}, {"x", vec(q.x)}});
  doc["Y_WN"] = std::move(front);
  doc["final_gap"] = result.final_gap;
  doc["iterations"] = result.iterations;
  doc["scalarizations"] = result.scalarizations;
  doc["wall_time_s"] = result.wall_time_s;
  doc["ideal_attained"] = result.ideal_attained;
  json log = json::array();
  for (const auto& rec : result.log) {
    log.push_back({{"k", rec.k}, {"v", vec(rec.v)}, {"t", rec.t}, {"w", vec(rec.w)}, {"action", to_string(rec.action)}});
  }
  doc["log"] = std::move(log);
  return doc;
}

SolveResult result_from_json(const json& doc) {
  try {
    SolveResult out;
    out.epsilon = doc.at("epsilon").get<double>();
    out.direction = vec_of(doc.at("direction"));
    out.box.m = vec_of(doc.at("box").at("m"));
    out.box.M = vec_of(doc.at("box").at("M"));
    for (const auto& v : doc.at("V_eps")) out.V_eps.push_back(vec_of(v));
    for (const auto& q : doc.at("Y_WN")) out.Y_WN.push_back({vec_of(q.at("w")), vec_of(q.at("f")), vec_of(q.at("x"))});
    out.final_gap = doc.at("final_gap").get<double>();
    out.iterations = doc.at("iterations").get<std::uint64_t>();
    out.scalarizations = doc.at("scalarizations").get<std::uint64_t>();
    out.wall_time_s = doc.at("wall_time_s").get<double>();
    out.ideal_attained = doc.value("ideal_attained", false);
    for (const auto& rec : doc.at("log")) {
      const auto action = rec.at("action").get<std::string>();
      if (action != "accepted" && action != "cut") throw Error(ErrorCode::kParse, "result: unknown action " + action);
      out.log.push_back({rec.at("k").get<std::uint64_t>(), vec_of(rec.at("v")), rec.at("t").get<double>(),
                         vec_of(rec.at("w")), action == "accepted" ? Action::kAccepted : Action::kCut});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("result: ") + e.what());
  }
}

void write_result(const SolveResult& result, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << result_to_json(result).dump(2) << '\n';
}

void write_front_csv(const SolveResult& result, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  const auto p = result.box.m.size();
  const auto n = result.Y_WN.empty() ? Eigen::Index{0} : result.Y_WN.front().x.size();
  out << csv_header("w", p) << ',' << csv_header("f", p) << ',' << csv_header("x", n) << '\n';
  for (const auto& q : result.Y_WN) out << csv_row(q.w) << ',' << csv_row(q.f) << ',' << csv_row(q.x) << '\n';
}

void write_vertices_csv(const SolveResult& result, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << csv_header("v", result.box.m.size()) << '\n';
  for (const auto& v : result.V_eps) out << csv_row(v) << '\n';
}

std::string summary_line(const SolveResult& result) {
  return fmt::format("epsilon={} scalarizations={} |Y_WN|={} |V_eps|={} gap={:.4f} time={:.3f}s", result.epsilon,
                     result.scalarizations, result.Y_WN.size(), result.V_eps.size(), result.final_gap,
                     result.wall_time_s);
}

}  // namespace qvp
