#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "widths/config.hpp"
#include "widths/errors.hpp"
#include "widths/kappa.hpp"
#include "widths/normalize.hpp"
#include "widths/records.hpp"
#include "widths/width_formulas.hpp"

namespace {

using widths::BallFamily;
using widths::BallInput;
using widths::Command;
using widths::RunConfig;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw widths::ConfigError("cannot read config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw widths::Error("cannot open output file for writing: " + path);
  }
  out << payload;
  if (!out) {
    throw widths::Error("write failed: " + path);
  }
}

nlohmann::json exponent_to_json(double p) {
  if (std::isinf(p)) return nlohmann::json("inf");
  return nlohmann::json(p);
}

// Reports exponents the way the user wrote them where possible.
nlohmann::json display_p_json(const RunConfig& config, double z) {
  for (const BallInput& b : config.balls) {
    if (widths::z_from_p(b.p) == z) return exponent_to_json(b.p);
  }
  return exponent_to_json(widths::p_from_z(z));
}

std::string emit_records(const RunConfig& config,
                         const std::vector<widths::SweepRecord>& records) {
  return config.format == "jsonl" ? widths::to_jsonl(records)
                                  : widths::to_csv(records);
}

int run_normalize(const RunConfig& config) {
  const BallFamily raw = widths::family_from(config, config.N);
  const BallFamily cooked = widths::normalize_family(raw);
  nlohmann::json out;
  out["N"] = config.N;
  nlohmann::json balls = nlohmann::json::array();
  for (const widths::BallSpec& b : cooked.balls) {
    nlohmann::json item;
    item["p"] = display_p_json(config, b.z);
    item["nu"] = b.nu;
    balls.push_back(item);
  }
  out["balls"] = balls;
  out["changed"] = cooked.balls != raw.balls;
  out["warnings"] = config.warnings;
  write_output(config.output, out.dump(2) + "\n");
  return 0;
}

int run_check(const RunConfig& config) {
  const BallFamily fam = widths::family_from(config, config.N);
  const widths::KappaMatrix matrix = widths::compute_kappa_matrix(fam);
  const widths::Condition4Report report = widths::check_condition4(fam);
  nlohmann::json out;
  out["N"] = config.N;
  out["ok"] = report.ok();
  out["kappa"] = matrix.values;
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    nlohmann::json item;
    item["p_i"] = display_p_json(config, fam.balls[v.i].z);
    item["p_j"] = display_p_json(config, fam.balls[v.j].z);
    item["kappa"] = v.kappa;
    violations.push_back(item);
  }
  out["violations"] = violations;
  write_output(config.output, out.dump(2) + "\n");
  return 0;
}

int run(const RunConfig& config) {
  for (const std::string& w : config.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  switch (config.command) {
    case Command::kNormalize:
      return run_normalize(config);
    case Command::kCheck:
      return run_check(config);
    case Command::kEstimate: {
      const widths::SweepRecord rec = widths::evaluate_point_strict(
          config, config.n, config.N, config.q, /*with_bounds=*/false);
      write_output(config.output, emit_records(config, {rec}));
      return 0;
    }
    case Command::kSandwich: {
      const widths::SweepRecord rec = widths::evaluate_point_strict(
          config, config.n, config.N, config.q, /*with_bounds=*/true);
      write_output(config.output, emit_records(config, {rec}));
      return 0;
    }
    case Command::kSweep: {
      const std::vector<widths::SweepRecord> records = widths::run_sweep(config);
      write_output(config.output, emit_records(config, records));
      return 0;
    }
  }
  return 0;
}

double parse_q_flag(const std::string& text) {
  if (text == "inf" || text == "Infinity") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v >= 1.0) return v;
  } catch (const std::exception&) {
  }
  throw widths::ConfigError("--q: q must be >= 1 or 'inf'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Order estimates of Kolmogorov widths of intersections of weighted "
      "lp balls, with rigorous sandwich bounds and sweep tooling"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON configuration file")
      ->required();
  long long n_flag = 0;
  CLI::Option* n_opt =
      app.add_option("--n", n_flag, "override the approximation dimension n");
  long long cap_flag = 0;
  CLI::Option* cap_opt =
      app.add_option("--N", cap_flag, "override the ambient dimension N");
  std::string q_flag;
  CLI::Option* q_opt =
      app.add_option("--q", q_flag, "override the target exponent q (or 'inf')");
  long long seed_flag = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_flag, "override the grid-search seed");
  bool auto_normalize_flag = false;
  CLI::Option* auto_opt = app.add_option(
      "--auto-normalize", auto_normalize_flag,
      "override auto normalization of inadmissible weights (true/false)");
  std::string output_flag;
  CLI::Option* output_opt =
      app.add_option("--output", output_flag, "write results to this path");
  std::string format_flag;
  CLI::Option* format_opt =
      app.add_option("--format", format_flag, "output format")
          ->check(CLI::IsMember({"csv", "jsonl"}));

  CLI::App* sub_estimate =
      app.add_subcommand("estimate", "evaluate the order estimate");
  CLI::App* sub_normalize =
      app.add_subcommand("normalize", "print the normalized weight family");
  CLI::App* sub_check =
      app.add_subcommand("check", "report pairwise crossing scales");
  CLI::App* sub_sandwich = app.add_subcommand(
      "sandwich", "bracket the estimate between rigorous bounds");
  CLI::App* sub_sweep =
      app.add_subcommand("sweep", "evaluate a grid of queries");
  for (CLI::App* sub :
       {sub_estimate, sub_normalize, sub_check, sub_sandwich, sub_sweep}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig config = widths::parse_config(read_file(config_path));
    if (app.got_subcommand(sub_estimate)) config.command = Command::kEstimate;
    if (app.got_subcommand(sub_normalize)) config.command = Command::kNormalize;
    if (app.got_subcommand(sub_check)) config.command = Command::kCheck;
    if (app.got_subcommand(sub_sandwich)) config.command = Command::kSandwich;
    if (app.got_subcommand(sub_sweep)) config.command = Command::kSweep;

    if (n_opt->count() > 0) {
      if (n_flag < 0) throw widths::ConfigError("--n: must be >= 0");
      config.n = static_cast<int>(n_flag);
    }
    if (cap_opt->count() > 0) {
      if (cap_flag < 1) throw widths::ConfigError("--N: must be >= 1");
      config.N = static_cast<int>(cap_flag);
    }
    if (q_opt->count() > 0) config.q = parse_q_flag(q_flag);
    if (seed_opt->count() > 0) {
      if (seed_flag < 0) throw widths::ConfigError("--seed: must be >= 0");
      config.seed = static_cast<std::uint64_t>(seed_flag);
    }
    if (auto_opt->count() > 0) config.auto_normalize = auto_normalize_flag;
    if (output_opt->count() > 0) config.output = output_flag;
    if (format_opt->count() > 0) config.format = format_flag;
    if (config.command == Command::kSweep && !config.sweep.has_value()) {
      throw widths::ConfigError(
          "$.sweep: the sweep command needs a sweep axes object");
    }

    return run(config);
  } catch (const widths::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const widths::UnsupportedRegimeError& e) {
    std::cerr << "unsupported regime: " << e.what() << "\n";
    return 4;
  } catch (const widths::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
