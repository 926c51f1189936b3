#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "test_support.hpp"
#include "widths/ball_family.hpp"
#include "widths/errors.hpp"
#include "widths/kappa.hpp"
#include "widths/normalize.hpp"

using namespace widths;
using test_support::rel_err;

TEST_CASE("nu_star computes the monotone envelope examples") {
  const WeightProfile a = nu_star(
      WeightProfile::create(4, {{0.5, 5.0}, {1.0, 1.0}}));
  REQUIRE(a.points.size() == 2);
  CHECK(a.points[0] == WeightPoint{0.5, 1.0});
  CHECK(a.points[1] == WeightPoint{1.0, 1.0});

  const WeightProfile monotone =
      WeightProfile::create(4, {{0.25, 1.0}, {0.5, 2.0}, {1.0, 3.0}});
  CHECK(nu_star(monotone) == monotone);

  const WeightProfile b = nu_star(
      WeightProfile::create(4, {{0.25, 3.0}, {0.5, 1.0}, {1.0, 2.0}}));
  REQUIRE(b.points.size() == 3);
  CHECK(b.points[0] == WeightPoint{0.25, 1.0});
  CHECK(b.points[1] == WeightPoint{0.5, 1.0});
  CHECK(b.points[2] == WeightPoint{1.0, 2.0});
}

TEST_CASE("nu_star_star computes the capped envelope examples") {
  const WeightProfile a = nu_star_star(
      WeightProfile::create(10, {{0.5, 1.0}, {1.0, 100.0}}));
  REQUIRE(a.points.size() == 2);
  CHECK(a.points[0].nu == 1.0);
  CHECK(rel_err(a.points[1].nu, std::sqrt(10.0)) < 1e-12);

  const WeightProfile untouched =
      WeightProfile::create(10, {{0.5, 1.0}, {1.0, 1.0}});
  CHECK(nu_star_star(untouched) == untouched);

  const WeightProfile b = nu_star_star(
      WeightProfile::create(4, {{0.0, 1.0}, {1.0, 100.0}}));
  REQUIRE(b.points.size() == 2);
  CHECK(b.points[0].nu == 1.0);
  CHECK(rel_err(b.points[1].nu, 4.0) < 1e-12);
}

TEST_CASE("envelopes are monotone, dominated, and within the cap") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 63);
    const BallFamily fam = test_support::random_family(rng, dim, 6);
    const WeightProfile in = profile_of(fam);
    const WeightProfile star = nu_star(in);
    const WeightProfile capped = nu_star_star(in);
    const double log_n = std::log(static_cast<double>(dim));
    REQUIRE(star.points.size() == in.points.size());
    REQUIRE(capped.points.size() == in.points.size());
    for (std::size_t i = 0; i < in.points.size(); ++i) {
      CHECK(star.points[i].z == in.points[i].z);
      CHECK(star.points[i].nu <= in.points[i].nu);    // pointwise below
      CHECK(capped.points[i].nu <= star.points[i].nu);
      if (i > 0) {
        // Exact monotonicity.
        CHECK(star.points[i].nu >= star.points[i - 1].nu);
        CHECK(capped.points[i].nu >= capped.points[i - 1].nu);
        // Lipschitz cap: ratio <= N^{dz}, up to one rounding step.
        const double dz = capped.points[i].z - capped.points[i - 1].z;
        const double ratio = capped.points[i].nu / capped.points[i - 1].nu;
        CHECK(ratio <= std::exp(dz * log_n) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("envelopes are exactly idempotent") {
  std::mt19937_64 rng(1010);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 63);
    const BallFamily fam = test_support::random_family(rng, dim, 6);
    const WeightProfile in = profile_of(fam);
    const WeightProfile star = nu_star(in);
    CHECK(nu_star(star) == star);  // bitwise
    const WeightProfile capped = nu_star_star(in);
    CHECK(nu_star_star(capped) == capped);  // bitwise
    const BallFamily norm = normalize_family(fam);
    CHECK(normalize_family(norm) == norm);  // bitwise
  }
}

TEST_CASE("normalize_family reproduces the worked examples") {
  const BallFamily same = BallFamily::create(
      10, {{0.5, 1.0}, {1.0, 2.0}});
  CHECK(normalize_family(same) == same);

  const BallFamily drop = normalize_family(
      BallFamily::create(10, {{0.5, 5.0}, {1.0, 1.0}}));
  REQUIRE(drop.balls.size() == 2);
  CHECK(drop.balls[0] == BallSpec{0.5, 1.0});
  CHECK(drop.balls[1] == BallSpec{1.0, 1.0});

  const BallFamily cap = normalize_family(
      BallFamily::create(10, {{0.5, 1.0}, {1.0, 100.0}}));
  REQUIRE(cap.balls.size() == 2);
  CHECK(cap.balls[0] == BallSpec{0.5, 1.0});
  CHECK(rel_err(cap.balls[1].nu, std::sqrt(10.0)) < 1e-12);
}

TEST_CASE("normalization never changes the intersection") {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 7);
    const BallFamily fam = test_support::random_family(rng, dim, 5);
    const BallFamily norm = normalize_family(fam);
    CHECK(check_condition4(norm).ok());
    for (int s = 0; s < 1000; ++s) {
      std::vector<double> x = test_support::random_vector(rng, dim, 1.0);
      if (lp_norm(x, 0.0) == 0.0) continue;
      // Bias the samples toward the boundary, where the sets could differ.
      const double t = boundary_scale(fam, x);
      const double scale = t * (0.85 + 0.3 * unit(rng));
      for (double& v : x) v *= scale;
      // Same set up to a 1e-9 collar: a point inside one description must
      // not fall clearly outside the other.
      if ((member(x, fam) && !member(x, norm, 1e-9)) ||
          (member(x, norm) && !member(x, fam, 1e-9))) {
        ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("nu_star_star composes the two envelopes on rough input") {
  std::mt19937_64 rng(1212);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 31);
    const BallFamily fam = test_support::random_family(rng, dim, 6);
    const WeightProfile in = profile_of(fam);
    CHECK(nu_star_star(in) == nu_star_star(nu_star(in)));  // bitwise
  }
}
