#include "widths/kappa.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "widths/errors.hpp"

namespace widths {

namespace {

// Exponent gaps below this count as "the same ball" for kappa purposes;
// the crossing scale of two copies of one curve is taken to be 1.
constexpr double kDegenerateGap = 1e-12;

}  // namespace

double kappa_pair(const BallSpec& a, const BallSpec& b, KappaFlags* flags) {
  KappaFlags local;
  KappaFlags& f = flags ? *flags : local;
  f = KappaFlags{};

  // Canonical order: smaller z first.  Makes kappa_pair(a, b) and
  // kappa_pair(b, a) evaluate the identical expression.
  const BallSpec& lo = (a.z <= b.z) ? a : b;
  const BallSpec& hi = (a.z <= b.z) ? b : a;

  const double gap = hi.z - lo.z;
  if (gap < kDegenerateGap) {
    f.degenerate = gap != 0.0 || lo.nu != hi.nu;
    return 1.0;
  }

  const double log_kappa = (std::log(hi.nu) - std::log(lo.nu)) / gap;
  double value = std::exp(log_kappa);
  if (std::isinf(value)) {
    value = std::numeric_limits<double>::max();
    f.clamped = true;
  } else if (value <= 0.0) {
    value = std::numeric_limits<double>::min();
    f.clamped = true;
  }
  return value;
}

bool kappa_identity_check(const BallSpec& a, const BallSpec& b, double tol) {
  const double k = kappa_pair(a, b);
  const double ta = a.nu * std::pow(k, -a.z);
  const double tb = b.nu * std::pow(k, -b.z);
  const double scale = std::max(std::fabs(ta), std::fabs(tb));
  return std::fabs(ta - tb) <= tol * scale;
}

KappaMatrix compute_kappa_matrix(const BallFamily& fam) {
  const int k = static_cast<int>(fam.balls.size());
  KappaMatrix mat;
  mat.family = fam;
  mat.values.assign(k, std::vector<double>(k, 1.0));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double v = kappa_pair(fam.balls[i], fam.balls[j]);
      mat.values[i][j] = v;
      mat.values[j][i] = v;
    }
  }
  return mat;
}

Condition4Report check_condition4(const BallFamily& fam, double tol) {
  Condition4Report report;
  const int k = static_cast<int>(fam.balls.size());
  const double n = static_cast<double>(fam.ambient_dim);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double v = kappa_pair(fam.balls[i], fam.balls[j]);
      if (v < 1.0 * (1.0 - tol) || v > n * (1.0 + tol)) {
        report.violations.push_back({i, j, v});
      }
    }
  }
  return report;
}

void require_condition4(const BallFamily& fam) {
  const Condition4Report report = check_condition4(fam);
  if (report.ok()) return;
  const auto& v = report.violations.front();
  throw PreconditionError(
      "weights are not admissible: kappa(p=" +
      std::to_string(p_from_z(fam.balls[v.i].z)) + ", p=" +
      std::to_string(p_from_z(fam.balls[v.j].z)) + ") = " +
      std::to_string(v.kappa) + " outside [1, " +
      std::to_string(fam.ambient_dim) +
      "]; normalize the family (or pass auto_normalize) first");
}

}  // namespace widths
