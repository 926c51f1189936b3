#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace widths {

// One weighted lp ball, nu * B_p^N.  Exponents are stored as the inverse
// exponent z = 1/p in [0, 1]; z = 0 means p = inf.  Working in z makes every
// exponent manipulation a plain subtraction and gives p = inf a finite
// representation.
struct BallSpec {
  double z = 0.0;   // inverse exponent 1/p, in [0, 1]
  double nu = 1.0;  // radius (weight), > 0

  friend bool operator==(const BallSpec&, const BallSpec&) = default;
};

// A finite intersection M = /\_a nu_a B_{p_a}^N in a fixed ambient
// dimension.  Balls are kept sorted by z ascending (p descending) with
// pairwise distinct z; duplicate exponents collapse to the smallest radius,
// which leaves the set M unchanged.
struct BallFamily {
  int ambient_dim = 0;
  std::vector<BallSpec> balls;

  // Validates, sorts by z and collapses duplicate exponents.
  // Throws InvalidInputError on empty input, nu <= 0, z outside [0, 1],
  // non-finite entries or ambient_dim < 1.
  static BallFamily create(int ambient_dim, std::vector<BallSpec> balls);

  friend bool operator==(const BallFamily&, const BallFamily&) = default;
};

// Converts between exponent p in [1, inf] and its inverse z in [0, 1].
double z_from_p(double p);
double p_from_z(double z);

// lp norm with the exponent given as z = 1/p.  z = 0 is the max norm.
// For very large p (1/z > 64) the power sum is accumulated in the log
// domain after factoring out the largest coordinate, so the result does
// not overflow or collapse prematurely.
// Throws InvalidInputError on non-finite coordinates or z outside [0, 1].
double lp_norm(std::span<const double> x, double z);

// True iff x lies in every ball of the family, each radius relaxed by the
// multiplicative slack (balls are closed; default slack 0).
bool member(std::span<const double> x, const BallFamily& fam,
            double slack = 0.0);

// Largest t >= 0 with t*u in M.  u must be nonzero.
double boundary_scale(const BallFamily& fam, std::span<const double> u);

// The truncated octahedron V_k: the convex hull of all sign/permutation
// images of the vector of k ones.  Equivalently (validated in the tests
// against the hull description) {x : max|x_i| <= 1 and sum|x_i| <= k}.
struct TruncatedOctahedron {
  int k = 1;
  int ambient_dim = 1;
};

// Membership in V_k via the two-inequality description, with the same
// multiplicative slack convention as member().
bool vk_member(std::span<const double> x, const TruncatedOctahedron& vk,
               double slack = 0.0);

// Supremum of the lq norm over the "flat" members of M: vectors with k
// coordinates of equal modulus and the rest zero, k = 1..m.  The modulus is
// pushed to the boundary of M, so the value is
//     max_{1<=k<=m} k^{zq} * min_a nu_a k^{-z_a},
// exact for the flat family itself (ties resolve to the smallest k).
struct FlatSup {
  double value = 0.0;
  int k = 1;  // support size attaining the maximum
};
FlatSup flat_sup_norm(const BallFamily& fam, double zq, int m);

}  // namespace widths
