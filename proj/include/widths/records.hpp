#pragma once

#include <optional>
#include <string>
#include <vector>

#include "widths/config.hpp"

namespace widths {

// One evaluated (or skipped) grid point.  Optional fields stay empty for
// rows where the quantity does not apply (skipped points, case tags whose
// formula has no sub-term breakdown, runs without bounds).
struct SweepRecord {
  int n = 0;
  int cap = 1;     // ambient dimension N
  double q = 2.0;  // +inf for the sup norm
  std::string case_tag;
  std::optional<double> phi;
  std::optional<double> phi1;
  std::optional<double> phi2;
  std::optional<double> phi3;
  std::optional<double> upper;
  std::optional<double> lower;
  std::string alpha_star_p;
  std::string beta_star_p;
  std::vector<std::string> warnings;
};

// Shortest representation that parses back to the same double; non-finite
// values come out as "inf"/"-inf"/"nan".
std::string format_double(double value);

// Evaluates one grid point of the config (n, N, q taken from the arguments,
// everything else from the config).  Never throws for per-point violations:
// those come back as a skipped row carrying the reason.
SweepRecord evaluate_point(const RunConfig& config, int n, int cap, double q,
                           bool with_bounds);

// Same evaluation, but violations propagate as exceptions.  Single-query
// commands use this so the process exit code reflects the failure class.
SweepRecord evaluate_point_strict(const RunConfig& config, int n, int cap,
                                  double q, bool with_bounds);

// All grid points of config.sweep in deterministic order (N outermost, then
// n, then q; missing axes fall back to the scalar config fields), evaluated
// in parallel and assembled in grid order.
std::vector<SweepRecord> run_sweep(const RunConfig& config);

// CSV with the fixed header
//   n,N,q,case,phi,phi1,phi2,phi3,upper,lower,alpha_star_p,beta_star_p,warnings
// using RFC-4180-style quoting; +inf prints as "inf", absent cells stay
// empty.
std::string to_csv(const std::vector<SweepRecord>& records);

// One JSON object per line, mirroring the CSV field names; absent cells
// are null, infinities use the JavaScript token Infinity.
std::string to_jsonl(const std::vector<SweepRecord>& records);

}  // namespace widths
