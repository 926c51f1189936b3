#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "widths/ball_family.hpp"
#include "widths/width_formulas.hpp"

namespace widths {

// Resolution knobs for the grid oracle.  The shipped defaults are the ones
// the regression tolerances in the test suite were tuned against.
struct GridResolution {
  int boundary_points = 2000;  // random boundary sample size (sign-paired)
  int directions = 0;          // candidate direction count; 0 = auto per (N, n)
  int refine_rounds = 48;      // local frame-refinement sweeps

  friend bool operator==(const GridResolution&, const GridResolution&) = default;
};

// Upper bound from the best coordinate subspace: spanning n coordinates
// leaves M's restriction to the other N - n, where the flat-family supremum
//     flat_sup_norm(fam, zq, N - n)
// is attained by an admissible vector.  For families where flat vectors are
// extremal (single balls with q <= p, all-p >= q families) this equals the
// exact distance to the best coordinate subspace; in general it is the flat
// restriction of that distance and is reported with a method tag.
// Requires 0 <= n <= N; n = N returns 0.
double coordinate_upper_bound(const BallFamily& fam, const WidthQuery& query);

// Rigorous lower bound via the largest inscribed cube: c B_inf lies in M
// for c = min_a nu_a N^{-z_a}, and the cube's width in lq is exactly
// c (N - n)^{zq}.  Requires admissible weights and 0 <= n <= N.
double inscribed_lower_bound(const BallFamily& fam, const WidthQuery& query);

// Smallest factor c such that s * V_k (the scaled truncated octahedron)
// is contained in c * M.  Every extreme point of V_k has exactly k unit
// coordinates, so sup over s V_k of the p_a norm is s k^{z_a} and
//     c = max_a s k^{z_a} / nu_a.
double vk_covering_factor(const BallFamily& fam, double s, int k);

// Grid-search bracket for the true width at toy sizes (N <= 4, n <= 2,
// q < inf).  "upper" is the smallest boundary-sample supremum over the
// searched and locally refined subspaces; it converges to the width as the
// resolution grows but is certified only against the sample.  "lower" is
// certified only against the searched grid (no refinement, flat witnesses)
// and is clamped to stay below "upper"; treat it as heuristic.
struct BruteForceResult {
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};
BruteForceResult brute_force_width(const BallFamily& fam,
                                   const WidthQuery& query,
                                   const GridResolution& res = {},
                                   std::uint64_t seed = 20240917u);

// Assembled two-sided report around the closed-form estimate.
struct SandwichOptions {
  bool use_grid_oracle = false;  // fold in brute_force_width when applicable
  bool auto_normalize = true;    // false: reject inadmissible weights instead
  GridResolution resolution;
  std::uint64_t seed = 20240917u;
};

struct SandwichReport {
  double phi = 0.0;    // closed-form order estimate
  double upper = 0.0;  // certified upper bound (see method_tags)
  double lower = 0.0;  // certified lower bound (see method_tags)
  EstimateResult estimate;
  std::vector<std::string> method_tags;

  double upper_over_phi() const { return upper / phi; }
  double phi_over_lower() const { return phi / lower; }
};

// Normalizes the family, evaluates the closed-form estimate and brackets it
// with coordinate_upper_bound / inscribed_lower_bound; optionally folds in
// the grid oracle, clamped so that lower <= upper always holds exactly.
SandwichReport sandwich(const BallFamily& fam, const WidthQuery& query,
                        const SandwichOptions& options = {});

}  // namespace widths
