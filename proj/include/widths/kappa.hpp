#pragma once

#include <vector>

#include "widths/ball_family.hpp"

namespace widths {

// Side channel for kappa_pair.  kappa never throws: out-of-range results
// are clamped to the representable positive range and flagged instead.
struct KappaFlags {
  bool clamped = false;     // result hit the floating-point range
  bool degenerate = false;  // exponents nearly equal, kappa defined as 1
};

// The crossing scale of two weighted balls,
//     kappa(a, b) = (nu_b / nu_a)^(1 / (z_b - z_a)),   kappa(a, a) = 1.
// At t = kappa the two radius curves nu * t^{-z} intersect:
//     nu_a * kappa^{-z_a} = nu_b * kappa^{-z_b}.
// Evaluated in the log domain and after canonical argument ordering, so the
// function is exactly symmetric in (a, b).
double kappa_pair(const BallSpec& a, const BallSpec& b,
                  KappaFlags* flags = nullptr);

// Relative residual of the crossing identity above:
//     |nu_a k^{-z_a} - nu_b k^{-z_b}| <= tol * max(terms).
bool kappa_identity_check(const BallSpec& a, const BallSpec& b,
                          double tol = 1e-12);

// All pairwise crossing scales of a family; symmetric with unit diagonal.
struct KappaMatrix {
  BallFamily family;                       // the family it was computed from
  std::vector<std::vector<double>> values; // values[i][j] = kappa(ball_i, ball_j)
};
KappaMatrix compute_kappa_matrix(const BallFamily& fam);

// Admissibility of a family: every pairwise crossing scale must lie in
// [1, N].  Violating pairs are reported with their kappa value; an empty
// report means the family is admissible.  The comparison carries a small
// relative tolerance so envelope outputs sitting exactly on the cap pass.
struct Condition4Report {
  struct Violation {
    int i = 0;
    int j = 0;
    double kappa = 0.0;
  };
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};
Condition4Report check_condition4(const BallFamily& fam, double tol = 1e-9);

// Throws PreconditionError, naming the first offending pair, when the
// family is not admissible.  Estimators and lower-bound constructions call
// this before trusting the crossing scales.
void require_condition4(const BallFamily& fam);

}  // namespace widths
