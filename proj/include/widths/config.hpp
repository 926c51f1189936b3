#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "widths/ball_family.hpp"
#include "widths/oracle.hpp"

namespace widths {

// One ball as the user wrote it: exponent in p-space (+inf for the cube).
struct BallInput {
  double p = 2.0;
  double nu = 1.0;

  friend bool operator==(const BallInput&, const BallInput&) = default;
};

enum class Command { kEstimate, kNormalize, kCheck, kSandwich, kSweep };

std::string to_string(Command command);

// Optional grids for the sweep runner.  Empty axes fall back to the scalar
// fields of the owning config.
struct SweepAxes {
  std::vector<int> n_values;
  std::vector<int> cap_values;  // ambient dimensions N
  std::vector<double> q_values; // +inf allowed

  friend bool operator==(const SweepAxes&, const SweepAxes&) = default;
};

struct RunConfig {
  Command command = Command::kEstimate;
  std::vector<BallInput> balls;
  int N = 1;
  int n = 0;
  double q = 2.0;  // +inf for the sup norm
  std::optional<SweepAxes> sweep;
  std::uint64_t seed = 20240917;
  GridResolution resolution;
  bool auto_normalize = false;
  bool use_grid_oracle = false;  // sandwich/sweep: fold in the small-N search
  bool with_bounds = false;      // sweep: attach rigorous sandwich bounds
  double log_base = 2.718281828459045;
  std::string output;            // empty = stdout
  std::string format = "csv";    // csv | jsonl

  // Parse-time diagnostics (duplicate exponents and the like); not part of
  // the serialized document and excluded from equality.
  std::vector<std::string> warnings;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.command == b.command && a.balls == b.balls && a.N == b.N &&
           a.n == b.n && a.q == b.q && a.sweep == b.sweep && a.seed == b.seed &&
           a.resolution == b.resolution &&
           a.auto_normalize == b.auto_normalize &&
           a.use_grid_oracle == b.use_grid_oracle &&
           a.with_bounds == b.with_bounds && a.log_base == b.log_base &&
           a.output == b.output && a.format == b.format;
  }
};

// Strict parse of the JSON configuration document: unknown keys are
// rejected, violations name the offending field path.  Throws ConfigError.
RunConfig parse_config(const std::string& text);

// Inverse of parse_config up to defaults: parse_config(serialize(c)) == c
// for every valid config.
std::string serialize(const RunConfig& config);

// The weighted family of the config realized in dimension N (sweeps reuse
// the same weights across ambient dimensions).
BallFamily family_from(const RunConfig& config, int ambient_dim);

}  // namespace widths
