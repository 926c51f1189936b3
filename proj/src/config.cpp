#include "widths/config.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "widths/errors.hpp"

namespace widths {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
}

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      fail(path + "." + item.key(), "unknown key");
    }
  }
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  return j.get<int>();
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  return j.get<double>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "must be a string");
  return j.get<std::string>();
}

bool is_inf_token(const json& j) {
  return j.is_string() &&
         (j.get<std::string>() == "inf" || j.get<std::string>() == "Infinity");
}

// Exponents accept a number >= 1 or the token "inf".
double get_exponent(const json& j, const std::string& path, const char* name) {
  if (is_inf_token(j)) return kInf;
  if (j.is_number()) {
    const double v = j.get<double>();
    if (v >= 1.0) return v;
  }
  fail(path, std::string(name) + " must be >= 1 or 'inf'");
}

Command parse_command(const std::string& text, const std::string& path) {
  if (text == "estimate") return Command::kEstimate;
  if (text == "normalize") return Command::kNormalize;
  if (text == "check") return Command::kCheck;
  if (text == "sandwich") return Command::kSandwich;
  if (text == "sweep") return Command::kSweep;
  fail(path, "must be one of estimate|normalize|check|sandwich|sweep");
}

std::vector<BallInput> parse_balls(const json& j, const std::string& path,
                                   std::vector<std::string>& warnings) {
  if (!j.is_array()) fail(path, "must be an array of {p, nu} objects");
  if (j.empty()) fail(path, "family must be non-empty");
  std::vector<BallInput> balls;
  std::map<double, int> seen;  // z value -> first index, for duplicate flags
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    const json& item = j[i];
    expect_object(item, item_path);
    reject_unknown_keys(item, item_path, {"p", "nu"});
    if (!item.contains("p")) fail(item_path, "missing key 'p'");
    if (!item.contains("nu")) fail(item_path, "missing key 'nu'");
    BallInput ball;
    ball.p = get_exponent(item["p"], item_path + ".p", "p");
    ball.nu = get_double(item["nu"], item_path + ".nu");
    if (!(ball.nu > 0.0) || !std::isfinite(ball.nu)) {
      fail(item_path + ".nu", "must be a positive finite number");
    }
    const double z = z_from_p(ball.p);
    auto [it, fresh] = seen.emplace(z, static_cast<int>(i));
    if (!fresh) {
      warnings.push_back("duplicate exponent p at " + item_path +
                         " (same as index " + std::to_string(it->second) +
                         "); the smaller radius wins");
    }
    balls.push_back(ball);
  }
  return balls;
}

std::vector<int> parse_int_axis(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(path, "must be a non-empty array of integers");
  }
  std::vector<int> values;
  for (std::size_t i = 0; i < j.size(); ++i) {
    values.push_back(get_int(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return values;
}

std::vector<double> parse_q_axis(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(path, "must be a non-empty array of exponents");
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < j.size(); ++i) {
    values.push_back(
        get_exponent(j[i], path + "[" + std::to_string(i) + "]", "q"));
  }
  return values;
}

SweepAxes parse_sweep(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path, {"n", "N", "q"});
  SweepAxes axes;
  if (j.contains("n")) axes.n_values = parse_int_axis(j["n"], path + ".n");
  if (j.contains("N")) axes.cap_values = parse_int_axis(j["N"], path + ".N");
  if (j.contains("q")) axes.q_values = parse_q_axis(j["q"], path + ".q");
  if (axes.n_values.empty() && axes.cap_values.empty() &&
      axes.q_values.empty()) {
    fail(path, "must declare at least one of the axes n, N, q");
  }
  return axes;
}

GridResolution parse_resolution(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"boundary_points", "directions", "refine_rounds"});
  GridResolution res;
  if (j.contains("boundary_points")) {
    res.boundary_points = get_int(j["boundary_points"], path + ".boundary_points");
    if (res.boundary_points < 0) fail(path + ".boundary_points", "must be >= 0");
  }
  if (j.contains("directions")) {
    res.directions = get_int(j["directions"], path + ".directions");
    if (res.directions < 0) fail(path + ".directions", "must be >= 0");
  }
  if (j.contains("refine_rounds")) {
    res.refine_rounds = get_int(j["refine_rounds"], path + ".refine_rounds");
    if (res.refine_rounds < 0) fail(path + ".refine_rounds", "must be >= 0");
  }
  return res;
}

json exponent_to_json(double value) {
  if (std::isinf(value)) return json("inf");
  return json(value);
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::kEstimate: return "estimate";
    case Command::kNormalize: return "normalize";
    case Command::kCheck: return "check";
    case Command::kSandwich: return "sandwich";
    case Command::kSweep: return "sweep";
  }
  return "estimate";
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not well-formed JSON: ") +
                      e.what());
  }
  expect_object(root, "$");
  reject_unknown_keys(root, "$",
                      {"command", "balls", "N", "n", "q", "sweep", "seed",
                       "resolution", "auto_normalize", "use_grid_oracle",
                       "with_bounds", "log_base", "output", "format"});

  RunConfig config;
  if (root.contains("command")) {
    config.command = parse_command(get_string(root["command"], "$.command"),
                                   "$.command");
  }
  if (!root.contains("balls")) fail("$.balls", "family must be non-empty");
  config.balls = parse_balls(root["balls"], "$.balls", config.warnings);

  if (!root.contains("N")) fail("$.N", "missing ambient dimension");
  config.N = get_int(root["N"], "$.N");
  if (config.N < 1) fail("$.N", "must be >= 1");

  if (root.contains("n")) {
    config.n = get_int(root["n"], "$.n");
    if (config.n < 0) fail("$.n", "must be >= 0");
  }
  if (root.contains("q")) {
    config.q = get_exponent(root["q"], "$.q", "q");
  }
  if (root.contains("sweep")) {
    config.sweep = parse_sweep(root["sweep"], "$.sweep");
  }
  if (config.command == Command::kSweep && !config.sweep.has_value()) {
    fail("$.sweep", "the sweep command needs a sweep axes object");
  }
  if (root.contains("seed")) {
    const json& s = root["seed"];
    const bool ok = s.is_number_unsigned() ||
                    (s.is_number_integer() && s.get<std::int64_t>() >= 0);
    if (!ok) fail("$.seed", "must be a nonnegative integer");
    config.seed = s.get<std::uint64_t>();
  }
  if (root.contains("resolution")) {
    config.resolution = parse_resolution(root["resolution"], "$.resolution");
  }
  if (root.contains("auto_normalize")) {
    config.auto_normalize = get_bool(root["auto_normalize"], "$.auto_normalize");
  }
  if (root.contains("use_grid_oracle")) {
    config.use_grid_oracle = get_bool(root["use_grid_oracle"], "$.use_grid_oracle");
  }
  if (root.contains("with_bounds")) {
    config.with_bounds = get_bool(root["with_bounds"], "$.with_bounds");
  }
  if (root.contains("log_base")) {
    config.log_base = get_double(root["log_base"], "$.log_base");
    if (!(config.log_base > 1.0)) fail("$.log_base", "must exceed 1");
  }
  if (root.contains("output")) {
    config.output = get_string(root["output"], "$.output");
  }
  if (root.contains("format")) {
    config.format = get_string(root["format"], "$.format");
    if (config.format != "csv" && config.format != "jsonl") {
      fail("$.format", "must be 'csv' or 'jsonl'");
    }
  }
  return config;
}

std::string serialize(const RunConfig& config) {
  json root;
  root["command"] = to_string(config.command);
  json balls = json::array();
  for (const BallInput& b : config.balls) {
    json item;
    item["p"] = exponent_to_json(b.p);
    item["nu"] = b.nu;
    balls.push_back(item);
  }
  root["balls"] = balls;
  root["N"] = config.N;
  root["n"] = config.n;
  root["q"] = exponent_to_json(config.q);
  if (config.sweep.has_value()) {
    json sweep;
    if (!config.sweep->n_values.empty()) sweep["n"] = config.sweep->n_values;
    if (!config.sweep->cap_values.empty()) sweep["N"] = config.sweep->cap_values;
    if (!config.sweep->q_values.empty()) {
      json axis = json::array();
      for (double q : config.sweep->q_values) axis.push_back(exponent_to_json(q));
      sweep["q"] = axis;
    }
    root["sweep"] = sweep;
  }
  root["seed"] = config.seed;
  json res;
  res["boundary_points"] = config.resolution.boundary_points;
  res["directions"] = config.resolution.directions;
  res["refine_rounds"] = config.resolution.refine_rounds;
  root["resolution"] = res;
  root["auto_normalize"] = config.auto_normalize;
  root["use_grid_oracle"] = config.use_grid_oracle;
  root["with_bounds"] = config.with_bounds;
  root["log_base"] = config.log_base;
  if (!config.output.empty()) root["output"] = config.output;
  root["format"] = config.format;
  return root.dump(2);
}

BallFamily family_from(const RunConfig& config, int ambient_dim) {
  std::vector<BallSpec> specs;
  specs.reserve(config.balls.size());
  for (const BallInput& b : config.balls) {
    specs.push_back({z_from_p(b.p), b.nu});
  }
  return BallFamily::create(ambient_dim, specs);
}

}  // namespace widths
