#include "otreg/lab/config.hpp"

#include "otreg/error.hpp"
#include "otreg/geometry/affine.hpp"
#include "otreg/io.hpp"
#include "otreg/lab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace otreg::lab {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, "missing required field '" + key + "'");
  return obj.at(key);
}

void only_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(where, "unknown field '" + it.key() + "'");
}

Vec2 point_of(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_of(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::size_t count_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

const std::set<std::string> kGenerators{"regular",         "random_hull", "rectangle", "wedge",
                                        "critical_corner_source", "critical_corner_target", "source"};
const std::set<std::string> kTransforms{"linear", "rotate_deg", "translate"};

void validate_domain(const Json& spec, const std::string& where, bool is_target) {
  if (!spec.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed = kTransforms;
  if (spec.contains("vertices")) {
    allowed.insert("vertices");
    const Json& v = spec.at("vertices");
    if (!v.is_array() || v.size() < 3) fail(where + ".vertices", "expected at least three points");
    for (const Json& p : v) point_of(p, where + ".vertices");
  } else {
    allowed.insert("generator");
    const Json& g = require(spec, "generator", where);
    if (!g.is_string() || !kGenerators.count(g.get<std::string>()))
      fail(where + ".generator", "unknown generator");
    const std::string name = g.get<std::string>();
    if (name == "source" && !is_target) fail(where + ".generator", "'source' is only valid for the target");
    if (name == "regular") {
      allowed.insert("sides");
      if (count_of(require(spec, "sides", where), where + ".sides") < 3) fail(where + ".sides", "at least 3");
    } else if (name == "random_hull") {
      allowed.insert({"points", "seed"});
      if (count_of(require(spec, "points", where), where + ".points") < 3) fail(where + ".points", "at least 3");
      count_of(require(spec, "seed", where), where + ".seed");  // seeds are mandatory
    } else if (name == "rectangle") {
      allowed.insert("aspect");
      if (!(number_of(require(spec, "aspect", where), where + ".aspect") > 0.0)) fail(where + ".aspect", "must be positive");
    } else if (name == "wedge") {
      allowed.insert("angle_deg");
      const double a = number_of(require(spec, "angle_deg", where), where + ".angle_deg");
      if (!(a > 0.0 && a < 180.0)) fail(where + ".angle_deg", "must lie in (0, 180)");
    }
  }
  only_keys(spec, allowed, where);
  if (spec.contains("linear")) {
    const Json& m = spec.at("linear");
    if (!m.is_array() || m.size() != 2) fail(where + ".linear", "expected a 2x2 matrix");
    for (const Json& row : m) point_of(row, where + ".linear");
  }
  if (spec.contains("rotate_deg")) number_of(spec.at("rotate_deg"), where + ".rotate_deg");
  if (spec.contains("translate")) point_of(spec.at("translate"), where + ".translate");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"eccentricity-growth", "hessian-growth",    "w2p-table",
                                              "obliqueness-scan",    "corner-growth",     "eccentricity-step",
                                              "volume-bounds",       "engulfing",         "duality-ellipse"};
  return names;
}

bool Threshold::holds(double actual) const {
  if (!std::isfinite(actual)) return false;
  if (op == "<=") return actual <= value;
  if (op == "<") return actual < value;
  if (op == ">=") return actual >= value;
  if (op == ">") return actual > value;
  return false;
}

ConvexPolygon build_domain(const Json& spec, const ConvexPolygon* source) {
  std::optional<ConvexPolygon> p;
  if (spec.contains("vertices")) {
    std::vector<Vec2> v;
    for (const Json& q : spec.at("vertices")) v.push_back(point_of(q, "vertices"));
    p = ConvexPolygon(std::move(v));
  } else {
    const std::string g = spec.at("generator").get<std::string>();
    if (g == "regular") p = regular_polygon(spec.at("sides").get<std::size_t>());
    else if (g == "random_hull") p = random_hull(spec.at("points").get<std::size_t>(), spec.at("seed").get<std::uint64_t>());
    else if (g == "rectangle") p = rectangle(spec.at("aspect").get<double>());
    else if (g == "wedge") p = wedge(spec.at("angle_deg").get<double>() * std::numbers::pi / 180.0);
    else if (g == "critical_corner_source") p = critical_corner_source();
    else if (g == "critical_corner_target") p = critical_corner_target();
    else if (g == "source") {
      if (!source) throw ConfigError("config: target refers to the source but none was given");
      p = *source;
    } else {
      throw ConfigError("config: unknown generator '" + g + "'");
    }
  }
  if (spec.contains("linear")) {
    const Json& m = spec.at("linear");
    Mat2 a;
    a << m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(), m[1][1].get<double>();
    p = p->transformed(AffineMap::linear_map(a));
  }
  if (spec.contains("rotate_deg")) {
    const double t = spec.at("rotate_deg").get<double>() * std::numbers::pi / 180.0;
    Mat2 r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    p = p->transformed(AffineMap::linear_map(r));
  }
  if (spec.contains("translate")) p = p->translated(point_of(spec.at("translate"), "translate"));
  return *p;
}

ExperimentConfig parse_config(const Json& doc) {
  if (!doc.is_object()) fail("<root>", "expected an object");
  only_keys(doc, {"name", "experiment", "seed", "source", "target", "solver", "params", "thresholds", "description"},
            "<root>");
  ExperimentConfig c;
  c.raw = doc;
  const Json& name = require(doc, "name", "<root>");
  if (!name.is_string() || name.get<std::string>().empty()) fail("name", "expected a non-empty string");
  c.name = name.get<std::string>();
  const Json& exp = require(doc, "experiment", "<root>");
  const auto& names = experiment_names();
  if (!exp.is_string() || std::find(names.begin(), names.end(), exp.get<std::string>()) == names.end())
    fail("experiment", "unknown experiment");
  c.experiment = exp.get<std::string>();
  c.seed = count_of(require(doc, "seed", "<root>"), "seed");

  validate_domain(require(doc, "source", "<root>"), "source", false);
  validate_domain(require(doc, "target", "<root>"), "target", true);
  c.source = doc.at("source");
  c.target = doc.at("target");

  const Json& s = require(doc, "solver", "<root>");
  if (!s.is_object()) fail("solver", "expected an object");
  only_keys(s, {"n_targets", "tol", "max_iter", "lloyd_iterations"}, "solver");
  c.solver.n_targets = count_of(require(s, "n_targets", "solver"), "solver.n_targets");
  if (c.solver.n_targets < 1) fail("solver.n_targets", "must be at least 1");
  if (s.contains("tol")) c.solver.tol = number_of(s.at("tol"), "solver.tol");
  if (!(c.solver.tol > 0.0)) fail("solver.tol", "must be positive");
  if (s.contains("max_iter")) c.solver.max_iter = count_of(s.at("max_iter"), "solver.max_iter");
  if (s.contains("lloyd_iterations")) c.solver.lloyd_iterations = count_of(s.at("lloyd_iterations"), "solver.lloyd_iterations");

  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) fail("params", "expected an object");
    c.params = doc.at("params");
  }
  if (doc.contains("thresholds")) {
    const Json& t = doc.at("thresholds");
    if (!t.is_array()) fail("thresholds", "expected an array");
    for (const Json& e : t) {
      if (!e.is_object()) fail("thresholds", "expected objects");
      only_keys(e, {"metric", "op", "value"}, "thresholds[]");
      Threshold th;
      const Json& m = require(e, "metric", "thresholds[]");
      if (!m.is_string()) fail("thresholds[].metric", "expected a string");
      th.metric = m.get<std::string>();
      const Json& op = require(e, "op", "thresholds[]");
      static const std::set<std::string> ops{"<=", "<", ">=", ">"};
      if (!op.is_string() || !ops.count(op.get<std::string>())) fail("thresholds[].op", "expected one of <=, <, >=, >");
      th.op = op.get<std::string>();
      th.value = number_of(require(e, "value", "thresholds[]"), "thresholds[].value");
      c.thresholds.push_back(std::move(th));
    }
  }
  // Geometry must build.
  try {
    const ConvexPolygon src = build_domain(c.source);
    build_domain(c.target, &src);
  } catch (const GeometryError& e) {
    fail("domains", e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

double param_number(const Json& params, const std::string& key, double fallback) {
  if (!params.contains(key)) return fallback;
  return number_of(params.at(key), "params." + key);
}

std::size_t param_count(const Json& params, const std::string& key, std::size_t fallback) {
  if (!params.contains(key)) return fallback;
  return count_of(params.at(key), "params." + key);
}

std::string param_string(const Json& params, const std::string& key, const std::string& fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_string()) fail("params." + key, "expected a string");
  return params.at(key).get<std::string>();
}

std::vector<double> param_numbers(const Json& params, const std::string& key, const std::vector<double>& fallback) {
  if (!params.contains(key)) return fallback;
  const Json& a = params.at(key);
  if (!a.is_array() || a.empty()) fail("params." + key, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const Json& v : a) out.push_back(number_of(v, "params." + key));
  return out;
}

}  // namespace otreg::lab
