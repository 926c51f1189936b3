#pragma once

#include <vector>

#include "widths/ball_family.hpp"

namespace widths {

// A weight function on a finite set of inverse exponents: the family
// {nu(z) B_{1/z}^N} seen as points (z, nu(z)).  Points are kept sorted by
// z ascending with pairwise distinct z.
struct WeightPoint {
  double z = 0.0;
  double nu = 1.0;

  friend bool operator==(const WeightPoint&, const WeightPoint&) = default;
};

struct WeightProfile {
  int ambient_dim = 0;
  std::vector<WeightPoint> points;

  static WeightProfile create(int ambient_dim, std::vector<WeightPoint> points);

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
};

// Conversions to/from BallFamily (same data, different viewpoint).
WeightProfile profile_of(const BallFamily& fam);
BallFamily family_of(const WeightProfile& profile);

// Monotone envelope: nu_*(z) = min { nu(w) : w >= z }.  Nondecreasing in z
// by construction (exactly, in floating point too) and it does not change
// the intersection M, because a ball with a cheaper constraint at a larger
// exponent already implies the dropped part.
WeightProfile nu_star(const WeightProfile& profile);

// Lipschitz-capped envelope:
//     nu_**(z) = min { nu_*(w) * N^{z - w} : w <= z }.
// Evaluated left to right through the recurrence
//     out_i = min(nu_*_i, out_{i-1} * N^{z_i - z_{i-1}}),
// which keeps the output exactly nondecreasing and exactly idempotent.
// The result satisfies 1 <= nu_**(z2)/nu_**(z1) <= N^{z2 - z1} for
// z1 <= z2, i.e. every pairwise crossing scale lands in [1, N], and M is
// again unchanged (the cap is what a smaller ball already enforces at
// nearby exponents through interpolation across support sizes 1..N).
WeightProfile nu_star_star(const WeightProfile& profile);

// Full normalization pass: both envelopes, returned as a family.
// A family that is already admissible (monotone weights, crossing scales
// inside [1, N]) comes back unchanged.
BallFamily normalize_family(const BallFamily& fam);

}  // namespace widths
