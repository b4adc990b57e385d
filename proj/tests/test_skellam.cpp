#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mvb/errors.hpp"
#include "mvb/rng.hpp"
#include "mvb/skellam.hpp"
#include "oracles.hpp"

using namespace mvb;

namespace {

// inversion sampler, adequate for the small means used here
int sample_poisson(double mu, RandomStream& stream) {
  double u = stream.next_double();
  double p = std::exp(-mu);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= mu / k;
    cdf += p;
  }
  return k;
}

}  // namespace

TEST_CASE("log_bessel_i at the origin and on invalid input") {
  CHECK(log_bessel_i(0, 0.0) == 0.0);
  CHECK(log_bessel_i(3, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(log_bessel_i(-1, 1.0), Error);
  CHECK_THROWS_AS(log_bessel_i(0, -0.5), Error);
  CHECK_THROWS_AS(log_bessel_i(0, std::nan("")), Error);
}

TEST_CASE("log_bessel_i matches the power-series oracle") {
  // frozen from the series oracle: I_0(2) = 2.2795853023360673,
  // I_1(1) = 0.5651591039924851
  CHECK(log_bessel_i(0, 2.0) == doctest::Approx(0.8239935414829562).epsilon(1e-13));
  CHECK(log_bessel_i(1, 1.0) == doctest::Approx(-0.5706479874908312).epsilon(1e-13));
  CHECK(std::exp(log_bessel_i(0, 2.0)) ==
        doctest::Approx(oracles::bessel_i_series(0, 2.0)).epsilon(1e-12));
  CHECK(std::exp(log_bessel_i(1, 1.0)) ==
        doctest::Approx(oracles::bessel_i_series(1, 1.0)).epsilon(1e-12));

  for (int order : {0, 1, 2, 3, 5, 8, 15}) {
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
      const double got = std::exp(log_bessel_i(order, x));
      const double want = oracles::bessel_i_series(order, x);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("series and asymptotic evaluations agree at the switch point") {
  for (long order : {0L, 1L, 2L, 5L, 17L, 40L, 90L, 200L}) {
    const double s = detail::log_bessel_i_series(order, detail::kBesselSwitch);
    const double a =
        detail::log_bessel_i_asymptotic(order, detail::kBesselSwitch);
    // agreement in log space is relative agreement in I itself
    CHECK(std::abs(s - a) < 1e-12);
  }
}

TEST_CASE("skellam_log_pmf degenerate closed forms") {
  CHECK(skellam_log_pmf(0, {0.0, 0.0}) == 0.0);
  CHECK(skellam_log_pmf(1, {0.0, 0.0}) ==
        -std::numeric_limits<double>::infinity());
  CHECK(skellam_log_pmf(2, {0.0, 3.0}) ==
        -std::numeric_limits<double>::infinity());
  CHECK(skellam_log_pmf(-2, {3.0, 0.0}) ==
        -std::numeric_limits<double>::infinity());
  // pure Poisson mass on one side
  CHECK(skellam_log_pmf(-3, {0.0, 2.5}) ==
        doctest::Approx(std::log(oracles::poisson_pmf(2.5, 3))).epsilon(1e-13));
  CHECK(skellam_log_pmf(4, {1.5, 0.0}) ==
        doctest::Approx(std::log(oracles::poisson_pmf(1.5, 4))).epsilon(1e-13));
  CHECK_THROWS_AS(skellam_log_pmf(0, {-1.0, 1.0}), Error);
}

TEST_CASE("skellam_log_pmf matches the convolution oracle") {
  // frozen: Pr(N1 - N2 = 0) for means (1,1) is 0.30850832255367105
  CHECK(skellam_log_pmf(0, {1.0, 1.0}) ==
        doctest::Approx(-1.1760064585170438).epsilon(1e-13));
  for (double mu1 : {0.1, 1.0, 2.5, 5.0}) {
    for (double mu2 : {0.1, 1.0, 2.5, 5.0}) {
      for (long alpha = -15; alpha <= 15; ++alpha) {
        const double want = oracles::skellam_pmf_convolution(alpha, mu1, mu2);
        if (want < 1e-280) continue;
        const double got = std::exp(skellam_log_pmf(alpha, {mu1, mu2}));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("skellam pmf symmetry under exchanging the two counts") {
  for (double mu1 : {0.2, 1.0, 7.0, 40.0}) {
    for (double mu2 : {0.5, 3.0, 11.0}) {
      for (long alpha : {-9L, -2L, 0L, 1L, 6L}) {
        CHECK(skellam_log_pmf(alpha, {mu1, mu2}) ==
              doctest::Approx(skellam_log_pmf(-alpha, {mu2, mu1}))
                  .epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("skellam normalization over the truncated support") {
  const double mus[] = {0.0, 0.1, 1.0, 10.0, 100.0, 10000.0};
  for (double mu1 : mus) {
    for (double mu2 : mus) {
      const double mean = mu1 - mu2;
      const double spread = 12.0 * std::sqrt(mu1 + mu2) + 30.0;
      const auto lo = static_cast<std::int64_t>(std::floor(mean - spread));
      const auto hi = static_cast<std::int64_t>(std::ceil(mean + spread));
      double sum = 0.0;
      for (std::int64_t a = lo; a <= hi; ++a) {
        sum += std::exp(skellam_log_pmf(a, {mu1, mu2}));
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("skellam_tail_ge degenerate and frozen values") {
  // full support
  CHECK(skellam_tail_ge(-200, {3.0, 7.0}) == doctest::Approx(1.0).epsilon(1e-12));
  // only N2 = 0 qualifies
  CHECK(skellam_tail_ge(0, {0.0, 2.0}) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  // frozen from the double-sum convolution oracle
  CHECK(skellam_tail_ge(0, {0.2, 0.8}) ==
        doctest::Approx(0.5170526201624197).epsilon(1e-12));
  CHECK(skellam_tail_ge(0, {0.2, 0.8}) ==
        doctest::Approx(oracles::skellam_tail_convolution(0, 0.2, 0.8))
            .epsilon(1e-11));
  CHECK(skellam_tail_ge(5, {0.0, 2.0}) == 0.0);
  CHECK(skellam_tail_ge(0, {0.0, 0.0}) == 1.0);
  CHECK(skellam_tail_ge(1, {0.0, 0.0}) == 0.0);
  CHECK(skellam_tail_ge(-3, {0.0, 2.0}) ==
        doctest::Approx(oracles::poisson_pmf(2.0, 0) +
                        oracles::poisson_pmf(2.0, 1) +
                        oracles::poisson_pmf(2.0, 2) +
                        oracles::poisson_pmf(2.0, 3))
            .epsilon(1e-13));
  CHECK(skellam_tail_ge(2, {1.5, 0.0}) ==
        doctest::Approx(oracles::poisson_tail_ge(1.5, 2)).epsilon(1e-12));
}

TEST_CASE("skellam_tail_ge against the convolution oracle") {
  for (double mu1 : {0.1, 1.0, 5.0}) {
    for (double mu2 : {0.1, 1.0, 5.0}) {
      for (long a0 : {-12L, -3L, -1L, 0L, 1L, 4L, 10L}) {
        const double want = oracles::skellam_tail_convolution(a0, mu1, mu2);
        const double got = skellam_tail_ge(a0, {mu1, mu2});
        CHECK(std::abs(got - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("tail difference equals the pmf") {
  for (auto [mu1, mu2] : {std::pair{3.0, 7.0}, {0.4, 0.9}, {120.0, 80.0},
                          {2000.0, 1500.0}}) {
    for (long a0 : {-40L, -5L, 0L, 3L, 40L}) {
      const double diff = skellam_tail_ge(a0, {mu1, mu2}) -
                          skellam_tail_ge(a0 + 1, {mu1, mu2});
      const double pmf = std::exp(skellam_log_pmf(a0, {mu1, mu2}));
      CHECK(std::abs(diff - pmf) < 1e-12);
    }
  }
}

TEST_CASE("empirical mean of sampled count differences") {
  const double mu1 = 4.2, mu2 = 2.7;
  const std::int64_t n = 1000000;
  RandomStream root(20240601);
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    RandomStream s = root.derive(static_cast<std::uint64_t>(i));
    sum += sample_poisson(mu1, s) - sample_poisson(mu2, s);
  }
  const double mean = sum / static_cast<double>(n);
  const double se = std::sqrt((mu1 + mu2) / static_cast<double>(n));
  CHECK(std::abs(mean - (mu1 - mu2)) < 4.0 * se);
}
