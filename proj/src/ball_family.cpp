#include "widths/ball_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "widths/errors.hpp"

namespace widths {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Above this exponent the power sum is evaluated in the log domain.
constexpr double kLogDomainExponent = 64.0;

void require_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw InvalidInputError("lp_norm: coordinate " + std::to_string(i) +
                              " is not finite");
    }
  }
}

void check_z(double z, const char* where) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw InvalidInputError(std::string(where) +
                            ": inverse exponent z must lie in [0, 1], got " +
                            std::to_string(z));
  }
}

}  // namespace

double z_from_p(double p) {
  if (std::isinf(p) && p > 0) return 0.0;
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidInputError("exponent p must satisfy 1 <= p <= inf");
  }
  return 1.0 / p;
}

double p_from_z(double z) {
  check_z(z, "p_from_z");
  return z == 0.0 ? kInf : 1.0 / z;
}

BallFamily BallFamily::create(int ambient_dim, std::vector<BallSpec> balls) {
  if (ambient_dim < 1) {
    throw InvalidInputError("BallFamily: ambient_dim must be >= 1");
  }
  if (balls.empty()) {
    throw InvalidInputError("BallFamily: at least one ball is required");
  }
  for (const BallSpec& b : balls) {
    check_z(b.z, "BallFamily");
    if (!(b.nu > 0.0) || !std::isfinite(b.nu)) {
      throw InvalidInputError("BallFamily: radius nu must be positive and "
                              "finite, got " + std::to_string(b.nu));
    }
  }
  std::sort(balls.begin(), balls.end(), [](const BallSpec& a, const BallSpec& b) {
    return a.z < b.z || (a.z == b.z && a.nu < b.nu);
  });
  // Equal exponents: only the smallest radius can bind, drop the rest.
  std::vector<BallSpec> unique;
  unique.reserve(balls.size());
  for (const BallSpec& b : balls) {
    if (!unique.empty() && unique.back().z == b.z) continue;
    unique.push_back(b);
  }
  BallFamily fam;
  fam.ambient_dim = ambient_dim;
  fam.balls = std::move(unique);
  return fam;
}

double lp_norm(std::span<const double> x, double z) {
  check_z(z, "lp_norm");
  require_finite(x);
  if (x.empty()) return 0.0;

  double top = 0.0;
  for (double v : x) top = std::max(top, std::fabs(v));
  if (z == 0.0 || top == 0.0) return top;

  const double p = 1.0 / z;
  if (p <= kLogDomainExponent) {
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::fabs(v), p);
    return std::pow(acc, z);
  }
  // Large p: factor out the max coordinate and accumulate exp(p*log(r))
  // with r <= 1, then scale back.  Keeps intermediate terms in range for
  // any representable input.
  double acc = 0.0;
  for (double v : x) {
    const double r = std::fabs(v) / top;
    if (r > 0.0) acc += std::exp(p * std::log(r));
  }
  return top * std::exp(z * std::log(acc));
}

bool member(std::span<const double> x, const BallFamily& fam, double slack) {
  if (static_cast<int>(x.size()) != fam.ambient_dim) {
    throw InvalidInputError("member: vector has dimension " +
                            std::to_string(x.size()) + ", family expects " +
                            std::to_string(fam.ambient_dim));
  }
  if (!(slack >= 0.0) || !std::isfinite(slack)) {
    throw InvalidInputError("member: slack must be finite and >= 0");
  }
  for (const BallSpec& b : fam.balls) {
    if (lp_norm(x, b.z) > b.nu * (1.0 + slack)) return false;
  }
  return true;
}

double boundary_scale(const BallFamily& fam, std::span<const double> u) {
  double t = kInf;
  for (const BallSpec& b : fam.balls) {
    const double nrm = lp_norm(u, b.z);
    if (nrm > 0.0) t = std::min(t, b.nu / nrm);
  }
  if (std::isinf(t)) {
    throw InvalidInputError("boundary_scale: direction must be nonzero");
  }
  return t;
}

bool vk_member(std::span<const double> x, const TruncatedOctahedron& vk,
               double slack) {
  if (vk.k < 1 || vk.k > vk.ambient_dim) {
    throw InvalidInputError("vk_member: k must satisfy 1 <= k <= ambient_dim");
  }
  if (static_cast<int>(x.size()) != vk.ambient_dim) {
    throw InvalidInputError("vk_member: vector has dimension " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(vk.ambient_dim));
  }
  if (!(slack >= 0.0) || !std::isfinite(slack)) {
    throw InvalidInputError("vk_member: slack must be finite and >= 0");
  }
  double sum = 0.0, top = 0.0;
  for (double v : x) {
    const double a = std::fabs(v);
    sum += a;
    top = std::max(top, a);
  }
  return top <= 1.0 + slack && sum <= static_cast<double>(vk.k) * (1.0 + slack);
}

FlatSup flat_sup_norm(const BallFamily& fam, double zq, int m) {
  check_z(zq, "flat_sup_norm");
  if (m < 1 || m > fam.ambient_dim) {
    throw RangeError("flat_sup_norm: support bound m = " + std::to_string(m) +
                     " outside [1, " + std::to_string(fam.ambient_dim) + "]");
  }
  FlatSup best;
  best.value = -kInf;
  for (int k = 1; k <= m; ++k) {
    const double kd = static_cast<double>(k);
    double radius = kInf;  // boundary modulus of the k-flat vector
    for (const BallSpec& b : fam.balls) {
      radius = std::min(radius, b.nu * std::pow(kd, -b.z));
    }
    const double value = std::pow(kd, zq) * radius;
    if (value > best.value) {
      best.value = value;
      best.k = k;
    }
  }
  return best;
}

}  // namespace widths
