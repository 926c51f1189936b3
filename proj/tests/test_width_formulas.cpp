#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <doctest.h>

#include "test_support.hpp"
#include "widths/errors.hpp"
#include "widths/kappa.hpp"
#include "widths/normalize.hpp"
#include "widths/width_formulas.hpp"

using namespace widths;
using test_support::rel_err;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("partition splits exponents around q (and around 2 for q > 2)") {
  // {p=4, p=1} against q = 2.
  const BallFamily a = BallFamily::create(16, {{0.25, 1.0}, {1.0, 1.0}});
  const RegimePartition pa = partition(a, 0.5);
  CHECK(pa.a1 == std::vector<int>{0});
  CHECK(pa.a2 == std::vector<int>{1});
  CHECK(pa.a1p == std::vector<int>{0});
  CHECK(pa.a2p == std::vector<int>{1});
  CHECK(pa.a3.empty());
  CHECK(pa.a3p.empty());

  // p = q = 2: the boundary exponent joins both closed sets.
  const BallFamily b = BallFamily::create(8, {{0.5, 1.0}});
  const RegimePartition pb = partition(b, 0.5);
  CHECK(pb.a1.empty());
  CHECK(pb.a2.empty());
  CHECK(pb.a1p == std::vector<int>{0});
  CHECK(pb.a2p == std::vector<int>{0});

  // {inf, 3, 1} against q = 4: three bands.
  const BallFamily c =
      BallFamily::create(16, {{0.0, 1.0}, {1.0 / 3.0, 1.0}, {1.0, 2.0}});
  const RegimePartition pc = partition(c, 0.25);
  CHECK(pc.a1 == std::vector<int>{0});
  CHECK(pc.a2 == std::vector<int>{1});
  CHECK(pc.a3 == std::vector<int>{2});
  CHECK(pc.a1p == std::vector<int>{0});
  CHECK(pc.a2p == std::vector<int>{1});
  CHECK(pc.a3p == std::vector<int>{2});
}

TEST_CASE("min_bracket follows min(1, n^{-1/2} N^{zq})") {
  CHECK(min_bracket({0, 16, 0.5}) == 1.0);
  CHECK(min_bracket({4, 16, 0.25}) == 1.0);  // (1/2) * 2 = 1
  CHECK(rel_err(min_bracket({16, 64, 0.25}), 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(rel_err(min_bracket({8, 16, 0.0}), 1.0 / std::sqrt(8.0)) < 1e-15);
}

TEST_CASE("estimator picks the all-large-p branch") {
  const BallFamily fam = BallFamily::create(16, {{0.0, 1.0}, {0.25, 1.0}});
  const EstimateResult r = theorem1_estimate(fam, {4, 16, 0.5});
  CHECK(r.case_tag == CaseTag::kCase1);
  CHECK(rel_err(r.value, 2.0) < 1e-12);  // min(16^{1/2}, 16^{1/4}) = 2
  CHECK(r.alpha_star == 1);
  CHECK(r.beta_star == -1);
  CHECK(r.attaining_phi == 0);
  // The reported index reproduces the value exactly.
  CHECK(case1_term(fam.balls[r.alpha_star], {4, 16, 0.5}) == r.value);
}

TEST_CASE("estimator pairs exponents across q for q <= 2") {
  const BallFamily fam = BallFamily::create(16, {{0.25, 1.0}, {1.0, 2.0}});
  const EstimateResult r = theorem1_estimate(fam, {4, 16, 0.5});
  CHECK(r.case_tag == CaseTag::kCase3);
  CHECK(rel_err(r.value, std::pow(2.0, 1.0 / 3.0)) < 1e-12);
  CHECK(r.alpha_star == 0);
  CHECK(r.beta_star == 1);
  CHECK(r.phi1 == r.value);
  CHECK(phi1_term(fam.balls[0], fam.balls[1], {4, 16, 0.5}) == r.value);
  // kappa for this pair is 2^{4/3}.
  CHECK(rel_err(kappa_pair(fam.balls[0], fam.balls[1]),
                std::pow(2.0, 4.0 / 3.0)) < 1e-12);
}

TEST_CASE("estimator handles the mixed regime for q > 2") {
  const BallFamily fam = BallFamily::create(16, {{0.0, 1.0}, {1.0, 2.0}});
  const WidthQuery query{4, 16, 0.25};
  const EstimateResult r = theorem1_estimate(fam, query);
  CHECK(r.case_tag == CaseTag::kCase5);
  CHECK(rel_err(r.value, std::pow(2.0, 0.25)) < 1e-12);
  CHECK(r.attaining_phi == 1);
  CHECK(r.alpha_star == 0);
  CHECK(r.beta_star == 1);
  CHECK(rel_err(r.phi1, std::pow(2.0, 0.25)) < 1e-12);
  CHECK(r.phi2 == kInf);  // no exponent sits in (2, q)
  CHECK(rel_err(r.phi3, std::sqrt(2.0)) < 1e-12);
  CHECK(phi1_term(fam.balls[0], fam.balls[1], query) == r.value);
}

TEST_CASE("estimator covers a single intermediate exponent for q > 2") {
  const BallFamily fam = BallFamily::create(64, {{1.0 / 3.0, 1.0}});
  const WidthQuery query{16, 64, 0.25};
  const EstimateResult r = theorem1_estimate(fam, query);
  CHECK(r.case_tag == CaseTag::kCase5);
  CHECK(r.attaining_phi == 2);
  CHECK(r.alpha_star == 0);
  CHECK(r.beta_star == -1);
  CHECK(r.phi1 == kInf);
  CHECK(r.phi3 == kInf);
  CHECK(rel_err(r.value, std::pow(2.0, -1.0 / 6.0)) < 1e-12);
  CHECK(r.phi2 == r.value);
  CHECK(phi2_term(fam.balls[0], query) == r.value);
}

TEST_CASE("estimator covers the all-small-p branches") {
  // q <= 2, every p <= q: smallest radius.
  const BallFamily small = BallFamily::create(8, {{0.8, 1.5}, {1.0, 2.0}});
  const EstimateResult r2 = theorem1_estimate(small, {2, 8, 0.75});
  CHECK(r2.case_tag == CaseTag::kCase2);
  CHECK(r2.value == 1.5);
  CHECK(r2.alpha_star == 0);

  // q > 2, every p <= 2: smallest radius times the small-ball factor.
  const BallFamily heavy = BallFamily::create(16, {{0.6, 2.0}, {1.0, 3.0}});
  const EstimateResult r4 = theorem1_estimate(heavy, {4, 16, 0.25});
  CHECK(r4.case_tag == CaseTag::kCase4);
  CHECK(r4.value == 2.0 * min_bracket({4, 16, 0.25}));
  CHECK(r4.alpha_star == 0);
}

TEST_CASE("finite-q estimator validates its inputs") {
  const BallFamily fam = BallFamily::create(16, {{0.25, 1.0}});
  CHECK_THROWS_AS(theorem1_estimate(fam, {4, 16, 0.0}), RedirectError);
  CHECK_THROWS_AS(theorem1_estimate(fam, {9, 16, 0.5}), RangeError);
  CHECK_THROWS_AS(theorem1_estimate(fam, {-1, 16, 0.5}), RangeError);
  CHECK_THROWS_AS(theorem1_estimate(fam, {4, 8, 0.5}), InvalidInputError);
  const BallFamily bad = BallFamily::create(8, {{0.25, 1.0}, {0.5, 2.0}});
  CHECK_THROWS_AS(theorem1_estimate(bad, {2, 8, 0.5}), PreconditionError);
}

TEST_CASE("sup-norm estimator matches the worked examples") {
  const EstimateResult a =
      theorem2_estimate(BallFamily::create(8, {{0.5, 1.0}}), {2, 8, 0.0});
  CHECK(a.value == 1.0);  // log(8)/2 > 1, so the bracket saturates
  CHECK(a.case_tag == CaseTag::kLInfty);

  const EstimateResult b =
      theorem2_estimate(BallFamily::create(100, {{0.0, 3.0}}), {10, 100, 0.0});
  CHECK(b.value == 3.0);  // p = inf ignores the bracket entirely

  const EstimateResult c =
      theorem2_estimate(BallFamily::create(8, {{0.5, 1.0}}), {7, 8, 0.0});
  CHECK(rel_err(c.value, std::sqrt(std::log(16.0 / 7.0) / 7.0)) < 1e-12);
}

TEST_CASE("sup-norm estimator takes the minimum over the family") {
  // kappa = (2/1)^(1/(1/2)) = 4 lies in [1, 100], so the pair is admissible,
  // and the p = 2 ball wins once the bracket drops below (1/2)^2.
  const BallFamily fam = BallFamily::create(100, {{0.0, 1.0}, {0.5, 2.0}});
  const EstimateResult r = theorem2_estimate(fam, {50, 100, 0.0});
  const double bracket = std::min(1.0, std::log(4.0) / 50.0);
  CHECK(rel_err(r.value, 2.0 * std::sqrt(bracket)) < 1e-12);
  CHECK(r.alpha_star == 1);
}

TEST_CASE("sup-norm estimator honors the configurable log base") {
  const BallFamily fam = BallFamily::create(8, {{0.5, 1.0}});
  const EstimateResult r = theorem2_estimate(fam, {7, 8, 0.0}, 2.0);
  const double bracket = std::min(1.0, std::log2(16.0 / 7.0) / 7.0);
  CHECK(rel_err(r.value, std::sqrt(bracket)) < 1e-12);
}

TEST_CASE("sup-norm estimator validates its inputs") {
  const BallFamily fam = BallFamily::create(8, {{0.5, 1.0}});
  CHECK_THROWS_AS(theorem2_estimate(fam, {2, 8, 0.5}), RedirectError);
  CHECK_THROWS_AS(theorem2_estimate(fam, {8, 8, 0.0}), RangeError);
  CHECK_THROWS_AS(theorem2_estimate(fam, {2, 8, 0.0}, 1.0), InvalidInputError);
  const BallFamily low = BallFamily::create(8, {{0.8, 1.0}});
  CHECK_THROWS_AS(theorem2_estimate(low, {2, 8, 0.0}),
                  UnsupportedRegimeError);
  try {
    theorem2_estimate(low, {2, 8, 0.0});
  } catch (const UnsupportedRegimeError& e) {
    CHECK(std::string(e.what()).find("p >= 2") != std::string::npos);
  }
}

TEST_CASE("single-ball reference widths match the worked examples") {
  CHECK(pietsch_stesin(0.0, 1.0, 2, 4) == 2.0);
  CHECK(pietsch_stesin(0.5, 0.5, 3, 9) == 1.0);  // p = q, any n < N
  CHECK(pietsch_stesin(0.5, 1.0, 5, 9) == 2.0);
  CHECK(pietsch_stesin(0.5, 1.0, 9, 9) == 0.0);  // n = N: nothing left
  CHECK_THROWS_AS(pietsch_stesin(0.5, 0.25, 1, 4), RangeError);
  CHECK_THROWS_AS(pietsch_stesin(0.5, 1.0, 5, 4), RangeError);

  CHECK(gluskin_single_ball(1.0, 0.5, 4, 16) == 1.0);
  CHECK(rel_err(gluskin_single_ball(0.5, 0.25, 8, 16), 1.0 / std::sqrt(2.0)) <
        1e-12);
  CHECK_THROWS_AS(gluskin_single_ball(0.25, 0.5, 4, 16), RangeError);
  CHECK_THROWS_AS(gluskin_single_ball(0.5, 0.25, 9, 16), RangeError);
  CHECK_THROWS_AS(gluskin_single_ball(0.5, 0.0, 4, 16), RedirectError);

  CHECK(garnaev_gluskin(0.0, 2, 8) == 1.0);
  CHECK(rel_err(garnaev_gluskin(0.5, 2, 8), std::sqrt(std::log(5.0) / 2.0)) <
        1e-12);
  CHECK(rel_err(garnaev_gluskin(0.5, 500, 1000),
                std::sqrt(std::log(3.0) / 500.0)) < 1e-12);
  CHECK(garnaev_gluskin(0.5, 0, 8) == 1.0);
  CHECK_THROWS_AS(garnaev_gluskin(0.6, 2, 8), UnsupportedRegimeError);
  CHECK_THROWS_AS(garnaev_gluskin(0.5, 8, 8), RangeError);
}

TEST_CASE("single-ball estimate agrees bitwise with the reference order") {
  // {p=3, nu=1}, N=64, n=16, q=4 runs through the same division-free
  // expressions in both entry points.
  const EstimateResult r = theorem1_estimate(
      BallFamily::create(64, {{1.0 / 3.0, 1.0}}), {16, 64, 0.25});
  CHECK(r.value == gluskin_single_ball(1.0 / 3.0, 0.25, 16, 64));
}

TEST_CASE("front-door estimate normalizes on request and warns") {
  const BallFamily raw = BallFamily::create(10, {{0.5, 1.0}, {1.0, 100.0}});
  CHECK_THROWS_AS(estimate(raw, {2, 10, 0.5}), PreconditionError);

  const EstimateResult r = estimate(raw, {2, 10, 0.5}, true);
  const BallFamily norm = normalize_family(raw);
  CHECK(rel_err(norm.balls[1].nu, std::sqrt(10.0)) < 1e-12);
  const EstimateResult direct = theorem1_estimate(norm, {2, 10, 0.5});
  CHECK(r.value == direct.value);
  CHECK(r.case_tag == direct.case_tag);
  CHECK(r.family_used == norm);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0] == "weights were normalized before evaluation");

  // Already admissible: no warning, untouched family.
  const EstimateResult clean = estimate(norm, {2, 10, 0.5}, true);
  CHECK(clean.warnings.empty());
  CHECK(clean.value == direct.value);
}

TEST_CASE("front-door estimate redirects q = inf to the sup-norm path") {
  const BallFamily fam = BallFamily::create(8, {{0.5, 1.0}});
  const EstimateResult r = estimate(fam, {2, 8, 0.0});
  CHECK(r.case_tag == CaseTag::kLInfty);
  CHECK(r.value == theorem2_estimate(fam, {2, 8, 0.0}).value);

  const BallFamily low = BallFamily::create(8, {{0.8, 1.0}});
  CHECK_THROWS_AS(estimate(low, {2, 8, 0.0}), UnsupportedRegimeError);
}

TEST_CASE("single-ball estimate brackets the exact width for p >= q") {
  std::mt19937_64 rng(1313);
  std::uniform_real_distribution<double> z_dist(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    double zp = z_dist(rng), zq = z_dist(rng);
    if (zp > zq) std::swap(zp, zq);  // ensure p >= q
    if (zq == 0.0) continue;
    const int N = 4 << rng() % 5;
    const int n = static_cast<int>(rng() % (N / 2 + 1));
    const double est =
        theorem1_estimate(BallFamily::create(N, {{zp, 1.0}}), {n, N, zq})
            .value;
    const double exact = pietsch_stesin(zp, zq, n, N);
    // est = N^{zq-zp} vs exact (N-n)^{zq-zp}: ratio in [1, 2^{zq-zp}].
    CHECK(est >= exact * (1.0 - 1e-12));
    CHECK(est <= exact * std::pow(2.0, zq - zp) * (1.0 + 1e-12));
  }
}

TEST_CASE("reported attainment indices reproduce the estimate exactly") {
  std::mt19937_64 rng(1414);
  std::uniform_real_distribution<double> zq_dist(0.02, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int N = 4 << rng() % 7;
    const int n = static_cast<int>(rng() % (N / 2 + 1));
    const BallFamily fam =
        normalize_family(test_support::random_family(rng, N, 5));
    const WidthQuery query{n, N, zq_dist(rng)};
    const EstimateResult r = theorem1_estimate(fam, query);
    REQUIRE(r.alpha_star >= 0);
    const BallSpec& a = fam.balls[r.alpha_star];
    switch (r.case_tag) {
      case CaseTag::kCase1:
        CHECK(case1_term(a, query) == r.value);
        break;
      case CaseTag::kCase2:
        CHECK(a.nu == r.value);
        break;
      case CaseTag::kCase3:
        REQUIRE(r.beta_star >= 0);
        CHECK(phi1_term(a, fam.balls[r.beta_star], query) == r.value);
        break;
      case CaseTag::kCase4:
        CHECK(a.nu * min_bracket(query) == r.value);
        break;
      case CaseTag::kCase5: {
        REQUIRE(r.attaining_phi >= 1);
        REQUIRE(r.attaining_phi <= 3);
        double again = 0.0;
        if (r.attaining_phi == 1) {
          REQUIRE(r.beta_star >= 0);
          again = phi1_term(a, fam.balls[r.beta_star], query);
        } else if (r.attaining_phi == 2) {
          again = phi2_term(a, query);
        } else {
          REQUIRE(r.beta_star >= 0);
          again = phi3_term(a, fam.balls[r.beta_star], query);
        }
        CHECK(again == r.value);
        CHECK(r.value == std::min({r.phi1, r.phi2, r.phi3}));
        break;
      }
      case CaseTag::kLInfty:
        FAIL("finite-q estimate reported the sup-norm branch");
        break;
    }
  }
}

TEST_CASE("mixed-regime term table matches a direct recomputation") {
  std::mt19937_64 rng(1515);
  std::uniform_real_distribution<double> zq_dist(0.02, 0.48);
  for (int trial = 0; trial < 500; ++trial) {
    const int N = 8 << rng() % 5;
    const int n = static_cast<int>(rng() % (N / 2 + 1));
    const BallFamily fam =
        normalize_family(test_support::random_family(rng, N, 5));
    const WidthQuery query{n, N, zq_dist(rng)};
    const EstimateResult r = theorem1_estimate(fam, query);
    if (r.case_tag != CaseTag::kCase5) continue;
    const RegimePartition part = partition(fam, query.zq);
    double t1 = kInf, t2 = kInf, t3 = kInf;
    for (int ia : part.a1p) {
      for (int ib : part.a2p)
        t1 = std::min(t1, phi1_term(fam.balls[ia], fam.balls[ib], query));
      for (int ib : part.a3p)
        t1 = std::min(t1, phi1_term(fam.balls[ia], fam.balls[ib], query));
    }
    for (int ia : part.a2p) t2 = std::min(t2, phi2_term(fam.balls[ia], query));
    for (int ia : part.a1p) {
      for (int ib : part.a3p)
        t3 = std::min(t3, phi3_term(fam.balls[ia], fam.balls[ib], query));
    }
    for (int ia : part.a2p) {
      for (int ib : part.a3p)
        t3 = std::min(t3, phi3_term(fam.balls[ia], fam.balls[ib], query));
    }
    CHECK(r.phi1 == t1);
    CHECK(r.phi2 == t2);
    CHECK(r.phi3 == t3);
    CHECK(r.value == std::min({t1, t2, t3}));
  }
}

TEST_CASE("boundary exponents collapse the term table as expected") {
  std::mt19937_64 rng(1616);
  std::uniform_real_distribution<double> zq_dist(0.1, 0.45);
  std::uniform_real_distribution<double> log_nu(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double zq = zq_dist(rng);
    const int N = 4 << rng() % 7;
    const int n = static_cast<int>(rng() % (N / 2 + 1));
    const WidthQuery query{n, N, zq};
    const double m = min_bracket(query);

    // (a) a ball exactly at q: both pairing terms collapse to its radius.
    {
      const BallSpec a{zq, std::exp(log_nu(rng))};
      const BallSpec b{zq + 0.05 + unit(rng) * (1.0 - zq - 0.05),
                       std::exp(log_nu(rng))};
      CHECK(phi1_term(a, b, query) == a.nu);    // bitwise
      CHECK(phi2_term(a, query) == a.nu);       // bitwise
    }
    // (b) the partner sits exactly at q: the pair term hands over to the
    // partner's radius through the crossing identity.
    {
      const BallSpec a{unit(rng) * (zq - 0.05), std::exp(log_nu(rng))};
      const BallSpec b{zq, std::exp(log_nu(rng))};
      CHECK(rel_err(phi1_term(a, b, query), b.nu) < 1e-12);
      CHECK(phi2_term(b, query) == b.nu);       // bitwise
    }
    // (c) a ball exactly at p = 2: the bracket exponent becomes 1 and the
    // pair term drops its kappa factor.
    {
      const BallSpec a{0.5, std::exp(log_nu(rng))};
      const BallSpec b{0.55 + unit(rng) * 0.45, std::exp(log_nu(rng))};
      CHECK(phi2_term(a, query) == a.nu * m);         // bitwise
      CHECK(phi3_term(a, b, query) == a.nu * m);      // bitwise
    }
    // (d) the partner sits exactly at p = 2.
    {
      const BallSpec a{unit(rng) * 0.45, std::exp(log_nu(rng))};
      const BallSpec b{0.5, std::exp(log_nu(rng))};
      CHECK(rel_err(phi3_term(a, b, query), b.nu * m) < 1e-12);
      CHECK(phi2_term(b, query) == b.nu * m);         // bitwise
    }
  }
}

TEST_CASE("the estimate is continuous across the regime boundary at q") {
  // Two balls on a common crossing curve at scale N describe the same set;
  // the estimate must not jump as the second exponent crosses q.
  std::mt19937_64 rng(1717);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const int N = 8 << rng() % 5;
    const double nd = static_cast<double>(N);
    const bool low_q = trial % 2 == 0;
    const double zq = low_q ? 0.1 + 0.3 * unit(rng)    // q > 2
                            : 0.55 + 0.4 * unit(rng);  // q < 2
    const double z0 = (zq - 0.05) * unit(rng);
    const double nu0 = std::exp(2.0 * unit(rng) - 1.0);
    const double v = nu0 * std::pow(nd, zq - z0);

    // Partner exactly at q: still the all-large-p branch, same value.
    {
      const double nu_b = nu0 * std::pow(nd, zq - z0);
      const BallFamily fam = BallFamily::create(N, {{z0, nu0}, {zq, nu_b}});
      const EstimateResult r = theorem1_estimate(fam, {0, N, zq});
      CHECK(r.case_tag == CaseTag::kCase1);
      CHECK(rel_err(r.value, v) < 1e-12);
    }
    // Partner strictly beyond q: the pairing branch takes over with the
    // same value, because kappa for the pair is exactly N.
    {
      const double top = low_q ? 0.45 : 1.0;
      const double zb = zq + 0.05 + unit(rng) * (top - zq - 0.05);
      const double nu_b = nu0 * std::pow(nd, zb - z0);
      const BallFamily fam = BallFamily::create(N, {{z0, nu0}, {zb, nu_b}});
      const EstimateResult r = theorem1_estimate(fam, {0, N, zq});
      if (low_q) {
        CHECK(r.case_tag == CaseTag::kCase5);
        CHECK(r.attaining_phi == 1);  // n = 0 keeps the bracket at 1
      } else {
        CHECK(r.case_tag == CaseTag::kCase3);
      }
      CHECK(rel_err(r.value, v) < 1e-12);
    }
  }
}

TEST_CASE("estimate is monotone in n and equivariant under scaling") {
  std::mt19937_64 rng(1818);
  std::uniform_real_distribution<double> zq_dist(0.02, 1.0);
  std::uniform_real_distribution<double> log_c(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int N = 8 << rng() % 5;
    const BallFamily fam =
        normalize_family(test_support::random_family(rng, N, 4));
    const double zq = zq_dist(rng);
    double prev = kInf;
    for (int n = 0; 2 * n <= N; n += std::max(1, N / 16)) {
      const double value = theorem1_estimate(fam, {n, N, zq}).value;
      CHECK(value <= prev * (1.0 + 1e-12));
      prev = value;
    }

    const double c = std::exp(log_c(rng));
    std::vector<BallSpec> scaled = fam.balls;
    for (BallSpec& b : scaled) b.nu *= c;
    const int n = static_cast<int>(rng() % (N / 2 + 1));
    const double base = theorem1_estimate(fam, {n, N, zq}).value;
    const double moved =
        theorem1_estimate(BallFamily::create(N, scaled), {n, N, zq}).value;
    CHECK(rel_err(moved, c * base) < 1e-12);
  }
}

TEST_CASE("estimate grows when any single radius grows") {
  std::mt19937_64 rng(1919);
  std::uniform_real_distribution<double> zq_dist(0.02, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int N = 8 << rng() % 5;
    const BallFamily fam =
        normalize_family(test_support::random_family(rng, N, 4));
    const double zq = zq_dist(rng);
    const int n = static_cast<int>(rng() % (N / 2 + 1));
    const double base = theorem1_estimate(fam, {n, N, zq}).value;
    for (std::size_t i = 0; i < fam.balls.size(); ++i) {
      std::vector<BallSpec> bumped = fam.balls;
      bumped[i].nu *= 1.001;
      const BallFamily moved = BallFamily::create(N, bumped);
      if (!check_condition4(moved).ok()) continue;  // bump broke the cap
      CHECK(theorem1_estimate(moved, {n, N, zq}).value >=
            base * (1.0 - 1e-12));
    }
  }
}
