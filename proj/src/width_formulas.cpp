#include "widths/width_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "widths/errors.hpp"
#include "widths/kappa.hpp"
#include "widths/normalize.hpp"

namespace widths {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_query(const BallFamily& fam, const WidthQuery& query) {
  if (query.N < 1) throw InvalidInputError("query: N must be >= 1");
  if (query.n < 0) throw RangeError("query: n must be >= 0");
  if (!(query.zq >= 0.0 && query.zq <= 1.0)) {
    throw InvalidInputError("query: zq must lie in [0, 1], got " +
                            std::to_string(query.zq));
  }
  if (fam.ambient_dim != query.N) {
    throw InvalidInputError("query: family lives in dimension " +
                            std::to_string(fam.ambient_dim) +
                            " but the query asks about N = " +
                            std::to_string(query.N));
  }
}

// pow with exact handling of the exponents the estimator hits on case
// boundaries, so values agree bit-for-bit across branches that coincide
// there (exponent 0 -> 1, exponent 1 -> base).
double pow_at(double base, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (exponent == 1.0) return base;
  return std::pow(base, exponent);
}

struct TermMin {
  double value = kInf;
  int alpha = -1;
  int beta = -1;
};

void consider(TermMin& best, double value, int alpha, int beta) {
  if (value < best.value) {
    best.value = value;
    best.alpha = alpha;
    best.beta = beta;
  }
}

}  // namespace

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::kCase1: return "case1";
    case CaseTag::kCase2: return "case2";
    case CaseTag::kCase3: return "case3";
    case CaseTag::kCase4: return "case4";
    case CaseTag::kCase5: return "case5";
    case CaseTag::kLInfty: return "linfty";
  }
  return "unknown";
}

RegimePartition partition(const BallFamily& fam, double zq) {
  if (!(zq >= 0.0 && zq <= 1.0)) {
    throw InvalidInputError("partition: zq must lie in [0, 1]");
  }
  RegimePartition part;
  const bool split_at_two = zq < 0.5;  // q > 2
  for (int i = 0; i < static_cast<int>(fam.balls.size()); ++i) {
    const double z = fam.balls[i].z;
    if (z < zq) part.a1.push_back(i);
    if (z <= zq) part.a1p.push_back(i);
    if (!split_at_two) {
      if (z > zq) part.a2.push_back(i);
      if (z >= zq) part.a2p.push_back(i);
    } else {
      if (z > zq && z < 0.5) part.a2.push_back(i);
      if (z >= zq && z <= 0.5) part.a2p.push_back(i);
      if (z > 0.5) part.a3.push_back(i);
      if (z >= 0.5) part.a3p.push_back(i);
    }
  }
  return part;
}

double min_bracket(const WidthQuery& query) {
  if (query.n == 0) return 1.0;
  return std::min(1.0, std::pow(static_cast<double>(query.n), -0.5) *
                           std::pow(static_cast<double>(query.N), query.zq));
}

double case1_term(const BallSpec& a, const WidthQuery& query) {
  return a.nu * pow_at(static_cast<double>(query.N), query.zq - a.z);
}

double phi1_term(const BallSpec& a, const BallSpec& b, const WidthQuery& query) {
  return a.nu * pow_at(kappa_pair(a, b), query.zq - a.z);
}

double phi2_term(const BallSpec& a, const WidthQuery& query) {
  const double lambda = (a.z - query.zq) / (0.5 - query.zq);
  return a.nu * pow_at(min_bracket(query), lambda);
}

double phi3_term(const BallSpec& a, const BallSpec& b, const WidthQuery& query) {
  return a.nu * pow_at(kappa_pair(a, b), 0.5 - a.z) * min_bracket(query);
}

EstimateResult theorem1_estimate(const BallFamily& fam,
                                 const WidthQuery& query) {
  check_query(fam, query);
  if (query.zq == 0.0) {
    throw RedirectError(
        "q = inf is handled by theorem2_estimate, not the finite-q path");
  }
  if (2 * query.n > query.N) {
    throw RangeError("finite-q estimate requires n <= N/2, got n = " +
                     std::to_string(query.n) + ", N = " +
                     std::to_string(query.N));
  }
  require_condition4(fam);

  EstimateResult result;
  result.family_used = fam;
  result.phi1 = result.phi2 = result.phi3 = kInf;

  const RegimePartition part = partition(fam, query.zq);
  const int count = static_cast<int>(fam.balls.size());
  const bool all_large_p = static_cast<int>(part.a1p.size()) == count;

  if (all_large_p) {
    // Every p >= q: the N-flat vector governs.
    TermMin best;
    for (int i = 0; i < count; ++i) {
      consider(best, case1_term(fam.balls[i], query), i, -1);
    }
    result.case_tag = CaseTag::kCase1;
    result.value = best.value;
    result.alpha_star = best.alpha;
    return result;
  }

  if (query.zq >= 0.5) {
    const bool all_small_p = static_cast<int>(part.a2p.size()) == count;
    if (all_small_p) {
      // Every p <= q <= 2: the smallest radius alone.
      TermMin best;
      for (int i = 0; i < count; ++i) consider(best, fam.balls[i].nu, i, -1);
      result.case_tag = CaseTag::kCase2;
      result.value = best.value;
      result.alpha_star = best.alpha;
      return result;
    }
    // Exponents on both sides of q: pair each large-p ball with each
    // small-p ball at their crossing scale.
    TermMin best;
    for (int a : part.a1p) {
      for (int b : part.a2p) {
        consider(best, phi1_term(fam.balls[a], fam.balls[b], query), a, b);
      }
    }
    result.case_tag = CaseTag::kCase3;
    result.value = best.value;
    result.phi1 = best.value;
    result.alpha_star = best.alpha;
    result.beta_star = best.beta;
    return result;
  }

  // q > 2 from here on.
  const bool all_p_at_most_two = part.a3p.size() == fam.balls.size();
  if (all_p_at_most_two) {
    TermMin best;
    const double m = min_bracket(query);
    for (int i = 0; i < count; ++i) consider(best, fam.balls[i].nu * m, i, -1);
    result.case_tag = CaseTag::kCase4;
    result.value = best.value;
    result.alpha_star = best.alpha;
    return result;
  }

  // Mixed regime: three competing mechanisms, empty ranges score +inf.
  TermMin t1, t2, t3;
  for (int a : part.a1p) {
    for (int b : part.a2p) {
      consider(t1, phi1_term(fam.balls[a], fam.balls[b], query), a, b);
    }
    for (int b : part.a3p) {
      consider(t1, phi1_term(fam.balls[a], fam.balls[b], query), a, b);
    }
  }
  for (int a : part.a2p) {
    consider(t2, phi2_term(fam.balls[a], query), a, -1);
  }
  for (int a : part.a1p) {
    for (int b : part.a3p) {
      consider(t3, phi3_term(fam.balls[a], fam.balls[b], query), a, b);
    }
  }
  for (int a : part.a2p) {
    for (int b : part.a3p) {
      consider(t3, phi3_term(fam.balls[a], fam.balls[b], query), a, b);
    }
  }

  result.case_tag = CaseTag::kCase5;
  result.phi1 = t1.value;
  result.phi2 = t2.value;
  result.phi3 = t3.value;
  const TermMin* pick = &t1;
  int which = 1;
  if (t2.value < pick->value) { pick = &t2; which = 2; }
  if (t3.value < pick->value) { pick = &t3; which = 3; }
  if (std::isinf(pick->value)) {
    throw Error("internal: mixed-regime estimate saw all three terms empty");
  }
  result.value = pick->value;
  result.alpha_star = pick->alpha;
  result.beta_star = pick->beta;
  result.attaining_phi = which;
  return result;
}

EstimateResult theorem2_estimate(const BallFamily& fam,
                                 const WidthQuery& query, double log_base) {
  check_query(fam, query);
  if (query.zq != 0.0) {
    throw RedirectError(
        "finite q is handled by theorem1_estimate, not the sup-norm path");
  }
  if (!(log_base > 1.0)) {
    throw InvalidInputError("theorem2_estimate: log base must exceed 1");
  }
  for (const BallSpec& b : fam.balls) {
    if (b.z > 0.5) {
      throw UnsupportedRegimeError(
          "sup-norm estimate covers only p >= 2; family contains p = " +
          std::to_string(p_from_z(b.z)));
    }
  }
  if (query.n >= query.N) {
    throw RangeError("sup-norm estimate requires n <= N - 1");
  }
  require_condition4(fam);

  double bracket = 1.0;
  if (query.n > 0) {
    const double nd = static_cast<double>(query.n);
    const double arg = 2.0 * static_cast<double>(query.N) / nd;
    bracket = std::min(1.0, std::log(arg) / std::log(log_base) / nd);
  }

  EstimateResult result;
  result.family_used = fam;
  result.case_tag = CaseTag::kLInfty;
  result.phi1 = result.phi2 = result.phi3 = kInf;
  TermMin best;
  for (int i = 0; i < static_cast<int>(fam.balls.size()); ++i) {
    const BallSpec& b = fam.balls[i];
    consider(best, b.nu * pow_at(bracket, b.z), i, -1);
  }
  result.value = best.value;
  result.alpha_star = best.alpha;
  return result;
}

double pietsch_stesin(double zp, double zq, int n, int N) {
  if (!(zp >= 0.0 && zp <= 1.0 && zq >= 0.0 && zq <= 1.0)) {
    throw InvalidInputError("pietsch_stesin: exponents must lie in [0, 1]");
  }
  if (zq < zp) {
    throw RangeError("pietsch_stesin: exact value requires q <= p");
  }
  if (N < 1 || n < 0 || n > N) {
    throw RangeError("pietsch_stesin: requires 0 <= n <= N");
  }
  return pow_at(static_cast<double>(N - n), zq - zp);
}

double gluskin_single_ball(double zp, double zq, int n, int N) {
  if (!(zp >= 0.0 && zp <= 1.0 && zq >= 0.0 && zq <= 1.0)) {
    throw InvalidInputError("gluskin_single_ball: exponents must lie in [0, 1]");
  }
  if (zq == 0.0) {
    throw RedirectError("gluskin_single_ball covers q < inf; use "
                        "garnaev_gluskin for the sup norm");
  }
  if (zp < zq) {
    throw RangeError("gluskin_single_ball: requires p <= q");
  }
  if (N < 1 || n < 0 || 2 * n > N) {
    throw RangeError("gluskin_single_ball: requires 0 <= n <= N/2");
  }
  if (zq >= 0.5) return 1.0;
  const WidthQuery query{n, N, zq};
  const double lambda = std::min(1.0, (zp - zq) / (0.5 - zq));
  return pow_at(min_bracket(query), lambda);
}

double garnaev_gluskin(double zp, int n, int N, double log_base) {
  if (!(zp >= 0.0)) {
    throw InvalidInputError("garnaev_gluskin: zp must be >= 0");
  }
  if (zp > 0.5) {
    throw UnsupportedRegimeError("garnaev_gluskin covers only p >= 2");
  }
  if (!(log_base > 1.0)) {
    throw InvalidInputError("garnaev_gluskin: log base must exceed 1");
  }
  if (N < 1 || n < 0 || n >= N) {
    throw RangeError("garnaev_gluskin: requires 0 <= n <= N - 1");
  }
  if (n == 0) return 1.0;
  const double nd = static_cast<double>(n);
  const double ratio =
      std::log(1.0 + static_cast<double>(N) / nd) / std::log(log_base) / nd;
  return std::min(1.0, pow_at(ratio, zp));
}

EstimateResult estimate(const BallFamily& fam, const WidthQuery& query,
                        bool auto_normalize) {
  check_query(fam, query);
  BallFamily working = fam;
  bool normalized = false;
  if (auto_normalize) {
    working = normalize_family(fam);
    normalized = working.balls != fam.balls;
  } else {
    require_condition4(fam);
  }
  EstimateResult result = query.zq == 0.0 ? theorem2_estimate(working, query)
                                          : theorem1_estimate(working, query);
  if (normalized) {
    result.warnings.push_back("weights were normalized before evaluation");
  }
  return result;
}

}  // namespace widths
