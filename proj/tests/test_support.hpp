#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "widths/ball_family.hpp"
#include "widths/normalize.hpp"

namespace test_support {

inline double rel_err(double got, double want) {
  const double scale = std::max(std::fabs(got), std::fabs(want));
  if (scale == 0.0) return 0.0;
  return std::fabs(got - want) / scale;
}

// Random family with distinct, well-separated exponents and log-uniform
// radii; optionally restricted to z <= z_max or z >= z_min.
inline widths::BallFamily random_family(std::mt19937_64& rng, int ambient_dim,
                                        int max_balls, double z_lo = 0.0,
                                        double z_hi = 1.0) {
  // Never ask for more exponents than the separation leaves room for.
  const int slots = 1 + static_cast<int>((z_hi - z_lo) / 0.021);
  std::uniform_int_distribution<int> count_dist(1, std::min(max_balls, slots));
  std::uniform_real_distribution<double> z_dist(z_lo, z_hi);
  std::uniform_real_distribution<double> log_nu(-3.0, 3.0);
  int count = count_dist(rng);
  // Resample the whole exponent set on collisions (greedy single-slot
  // redraws can wedge themselves in a narrow range), and give up one ball
  // whenever the range stays too cramped.
  std::vector<double> zs;
  for (int attempt = 1; ; ++attempt) {
    zs.clear();
    for (int i = 0; i < count; ++i) zs.push_back(z_dist(rng));
    std::sort(zs.begin(), zs.end());
    bool ok = true;
    for (std::size_t i = 1; i < zs.size(); ++i) {
      if (zs[i] - zs[i - 1] < 0.02) ok = false;
    }
    if (ok) break;
    if (attempt % 50 == 0 && count > 1) --count;
  }
  std::vector<widths::BallSpec> balls;
  for (double z : zs) balls.push_back({z, std::exp(log_nu(rng))});
  return widths::BallFamily::create(ambient_dim, balls);
}

inline widths::BallFamily random_normalized_family(std::mt19937_64& rng,
                                                   int ambient_dim,
                                                   int max_balls,
                                                   double z_lo = 0.0,
                                                   double z_hi = 1.0) {
  return widths::normalize_family(
      random_family(rng, ambient_dim, max_balls, z_lo, z_hi));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, int dim,
                                         double half_width = 1.0) {
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  std::vector<double> x(dim);
  for (double& v : x) v = coord(rng);
  return x;
}

}  // namespace test_support
