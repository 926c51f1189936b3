#pragma once

#include <string>
#include <vector>

#include "widths/ball_family.hpp"

namespace widths {

// A width query: the order of the subspace n, the ambient dimension N and
// the target norm given as zq = 1/q (zq = 0 means q = inf).
struct WidthQuery {
  int n = 0;
  int N = 1;
  double zq = 0.5;
};

// Index sets of a family relative to a query exponent.  "Strict" sets use
// strict inequalities, primed sets are their closures; an exponent sitting
// exactly on a boundary belongs to both adjacent closed sets.
//
// For q <= 2 the split is at q only:
//   a1 / a1p : p > q / p >= q        a2 / a2p : p < q / p <= q
// For q > 2 there is an additional split at 2:
//   a1 / a1p : p > q / p >= q
//   a2 / a2p : 2 < p < q / 2 <= p <= q
//   a3 / a3p : p < 2 / p <= 2
struct RegimePartition {
  std::vector<int> a1, a2, a3;
  std::vector<int> a1p, a2p, a3p;
};
RegimePartition partition(const BallFamily& fam, double zq);

// Which closed-form branch produced an estimate.
enum class CaseTag {
  kCase1,   // all p >= q
  kCase2,   // q <= 2, all p <= q
  kCase3,   // q <= 2, exponents on both sides of q
  kCase4,   // q > 2, all p <= 2
  kCase5,   // q > 2, mixed regime (three-term minimum)
  kLInfty,  // q = inf estimator
};
std::string to_string(CaseTag tag);

// Order estimate of the n-width together with its provenance: the branch,
// the three-term breakdown where the branch has one (+inf marks terms whose
// index range is empty), the attaining indices into family_used.balls
// (beta_star = -1 when the branch has no pairing), and the family the
// formula was actually evaluated on (normalized input when auto-normalize
// is requested).
struct EstimateResult {
  double value = 0.0;
  CaseTag case_tag = CaseTag::kCase1;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  int alpha_star = -1;
  int beta_star = -1;
  int attaining_phi = 0;  // 1..3 when case_tag == kCase5, else 0
  BallFamily family_used;
  std::vector<std::string> warnings;
};

// The small-ball factor min(1, n^{-1/2} N^{zq}); n = 0 yields 1.
double min_bracket(const WidthQuery& query);

// Term evaluators shared by the estimator branches.  Exposed so callers can
// re-evaluate a reported attaining pair and reproduce the estimate exactly.
double case1_term(const BallSpec& a, const WidthQuery& query);
double phi1_term(const BallSpec& a, const BallSpec& b, const WidthQuery& query);
double phi2_term(const BallSpec& a, const WidthQuery& query);
double phi3_term(const BallSpec& a, const BallSpec& b, const WidthQuery& query);

// Order estimate of d_n(M, lq^N) for finite q (zq > 0), valid for
// n <= N/2 under the admissibility condition (all pairwise crossing scales
// in [1, N]).  Throws
//   RedirectError        if zq == 0 (use theorem2_estimate),
//   RangeError           if n > N/2 or n < 0,
//   InvalidInputError    if the family dimension disagrees with the query,
//   PreconditionError    naming the first offending pair if admissibility
//                        fails.
EstimateResult theorem1_estimate(const BallFamily& fam,
                                 const WidthQuery& query);

// Order estimate of d_n(M, linf^N) for families with all p >= 2,
// 0 <= n <= N-1:
//     min_a nu_a * min(1, log(2N/n) / n)^{z_a},
// natural logarithm by default (log_base configures it).  Throws
// RedirectError for zq != 0, UnsupportedRegimeError if some p < 2,
// RangeError for n >= N, PreconditionError on inadmissible weights.
EstimateResult theorem2_estimate(const BallFamily& fam,
                                 const WidthQuery& query,
                                 double log_base = 2.718281828459045);

// Reference values for a single unweighted ball B_p^N.
//
// Exact width of B_p in lq for q <= p, any 0 <= n <= N:
//     (N - n)^{zq - zp}.
double pietsch_stesin(double zp, double zq, int n, int N);

// Order of the width of B_p in lq for p <= q < inf, n <= N/2:
//     q <= 2 : 1
//     q > 2  : min(1, n^{-1/2} N^{zq})^lambda,
//              lambda = min(1, (zp - zq) / (1/2 - zq)).
double gluskin_single_ball(double zp, double zq, int n, int N);

// Order of the width of B_p in linf for p >= 2, n <= N-1:
//     min(1, n^{-zp} * log(1 + N/n)^{zp}).
double garnaev_gluskin(double zp, int n, int N, double log_base = 2.718281828459045);

// Front door: normalizes the family first when auto_normalize is set
// (refuses inadmissible families otherwise) and dispatches on zq == 0
// between the finite-q and the sup-norm estimator.
EstimateResult estimate(const BallFamily& fam, const WidthQuery& query,
                        bool auto_normalize = false);

}  // namespace widths
