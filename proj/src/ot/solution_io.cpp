#include "otreg/ot/solution_io.hpp"

#include "otreg/error.hpp"
#include "otreg/io.hpp"

namespace otreg::ot {

using nlohmann::json;

PLConvexPotential Solution::potential() const {
  return PLConvexPotential::from_weights(cloud.points, weights.w, source);
}

Solution make_solution(const ConvexPolygon& source, const ConvexPolygon& target, const TargetCloud& cloud,
                       const SolveResult& result) {
  return Solution{source, target, cloud, result.weights, result.tol_achieved, result.iterations};
}

namespace {

json points_to_json(const std::vector<Vec2>& pts) {
  json a = json::array();
  for (const Vec2& p : pts) a.push_back({p.x(), p.y()});
  return a;
}

std::vector<Vec2> points_from_json(const json& j) {
  if (!j.is_array()) throw Error("expected an array of [x, y] pairs");
  std::vector<Vec2> pts;
  pts.reserve(j.size());
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2) throw Error("expected an [x, y] pair");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return pts;
}

}  // namespace

json polygon_to_json(const ConvexPolygon& p) { return points_to_json(p.vertices()); }

ConvexPolygon polygon_from_json(const json& j) { return ConvexPolygon(points_from_json(j)); }

json solution_to_json(const Solution& s) {
  json j;
  j["source_polygon"] = polygon_to_json(s.source);
  j["target_polygon"] = polygon_to_json(s.target);
  j["points"] = points_to_json(s.cloud.points);
  j["masses"] = s.cloud.masses;
  j["weights"] = s.weights.w;
  j["tol_achieved"] = s.tol_achieved;
  j["iterations"] = s.iterations;
  return j;
}

Solution solution_from_json(const json& j) {
  try {
    TargetCloud cloud{points_from_json(j.at("points")), j.at("masses").get<std::vector<double>>()};
    DualWeights w{j.at("weights").get<std::vector<double>>()};
    if (cloud.masses.size() != cloud.points.size() || w.w.size() != cloud.points.size())
      throw Error("solution: points, masses and weights differ in length");
    return Solution{polygon_from_json(j.at("source_polygon")), polygon_from_json(j.at("target_polygon")),
                    std::move(cloud), std::move(w), j.at("tol_achieved").get<double>(),
                    j.at("iterations").get<std::size_t>()};
  } catch (const json::exception& e) {
    throw Error(std::string("solution: ") + e.what());
  }
}

void write_solution(const std::filesystem::path& path, const Solution& s) {
  write_file_atomic(path, solution_to_json(s).dump(1) + "\n");
}

Solution read_solution(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error("solution: " + std::string(e.what()));
  }
  return solution_from_json(j);
}

}  // namespace otreg::ot
