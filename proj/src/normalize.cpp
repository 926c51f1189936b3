#include "widths/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace widths {

WeightProfile WeightProfile::create(int ambient_dim,
                                    std::vector<WeightPoint> points) {
  std::vector<BallSpec> balls;
  balls.reserve(points.size());
  for (const WeightPoint& pt : points) balls.push_back({pt.z, pt.nu});
  return profile_of(BallFamily::create(ambient_dim, std::move(balls)));
}

WeightProfile profile_of(const BallFamily& fam) {
  WeightProfile profile;
  profile.ambient_dim = fam.ambient_dim;
  profile.points.reserve(fam.balls.size());
  for (const BallSpec& b : fam.balls) profile.points.push_back({b.z, b.nu});
  return profile;
}

BallFamily family_of(const WeightProfile& profile) {
  std::vector<BallSpec> balls;
  balls.reserve(profile.points.size());
  for (const WeightPoint& pt : profile.points) balls.push_back({pt.z, pt.nu});
  return BallFamily::create(profile.ambient_dim, std::move(balls));
}

WeightProfile nu_star(const WeightProfile& profile) {
  WeightProfile out = profile;
  double running = std::numeric_limits<double>::infinity();
  for (auto it = out.points.rbegin(); it != out.points.rend(); ++it) {
    running = std::min(running, it->nu);
    it->nu = running;
  }
  return out;
}

WeightProfile nu_star_star(const WeightProfile& profile) {
  WeightProfile out = nu_star(profile);
  if (out.points.empty()) return out;
  const double log_n = std::log(static_cast<double>(out.ambient_dim));
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const double step = out.points[i].z - out.points[i - 1].z;
    const double cap = out.points[i - 1].nu * std::exp(step * log_n);
    out.points[i].nu = std::min(out.points[i].nu, cap);
  }
  return out;
}

BallFamily normalize_family(const BallFamily& fam) {
  return family_of(nu_star_star(profile_of(fam)));
}

}  // namespace widths
