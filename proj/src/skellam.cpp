#include "mvb/skellam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mvb/errors.hpp"

namespace mvb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Olver's large-order expansion coefficients u_k(t), generated from
//   u_{k+1} = t^2(1-t^2)/2 * u_k' + 1/8 * int_0^t (1-5 s^2) u_k(s) ds.
// Dense coefficient vectors indexed by power of t, degree 3k.
std::vector<std::vector<double>> make_olver_polynomials(int count) {
  std::vector<std::vector<double>> u;
  u.push_back({1.0});
  for (int k = 1; k < count; ++k) {
    const auto& prev = u.back();
    const int deg = static_cast<int>(prev.size()) - 1;
    std::vector<double> next(static_cast<std::size_t>(deg) + 4, 0.0);
    // t^2 (1 - t^2)/2 * d/dt prev
    for (int j = 1; j <= deg; ++j) {
      const double d = prev[j] * j;
      next[j + 1] += 0.5 * d;
      next[j + 3] -= 0.5 * d;
    }
    // 1/8 * int_0^t (1 - 5 s^2) prev(s) ds
    for (int j = 0; j <= deg; ++j) {
      next[j + 1] += 0.125 * prev[j] / (j + 1);
      next[j + 3] -= 0.625 * prev[j] / (j + 3);
    }
    u.push_back(std::move(next));
  }
  return u;
}

const std::vector<std::vector<double>>& olver_polynomials() {
  static const auto polys = make_olver_polynomials(13);
  return polys;
}

double eval_poly(const std::vector<double>& coeffs, double t) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    v = v * t + *it;
  }
  return v;
}

// ln I_nu(x) by the uniform large-order expansion; needs nu >= ~40 for full
// double accuracy.
double olver_log_bessel(double nu, double x) {
  const double z = x / nu;
  const double r = std::hypot(1.0, z);
  const double eta = r + std::log(z / (1.0 + r));
  const double p = 1.0 / r;
  const auto& polys = olver_polynomials();
  double sum = 0.0;
  double nu_pow = 1.0;
  for (const auto& poly : polys) {
    sum += eval_poly(poly, p) / nu_pow;
    nu_pow *= nu;
  }
  return nu * eta - 0.5 * std::log(2.0 * M_PI * nu) - 0.5 * std::log(r) +
         std::log(sum);
}

// Pr(N >= k0) for N ~ Poisson(mu), mu > 0, k0 >= 1.
double poisson_tail_ge(double mu, std::int64_t k0) {
  double lt = -mu + k0 * std::log(mu) - detail::log_factorial(k0);
  double lacc = lt;
  for (std::int64_t j = k0;; ++j) {
    const double ratio = mu / static_cast<double>(j + 1);
    lt += std::log(ratio);
    lacc = logaddexp(lacc, lt);
    if (ratio < 1.0) {
      const double lrem = lt + std::log(ratio / (1.0 - ratio));
      if (lt < lacc + std::log(1e-16) && lrem < std::log(1e-13)) break;
    }
  }
  return std::min(1.0, std::exp(lacc));
}

// Pr(N <= k0) for N ~ Poisson(mu), mu > 0, k0 >= 0.
double poisson_cdf_le(double mu, std::int64_t k0) {
  if (k0 < 0) return 0.0;
  if (static_cast<double>(k0) >= mu) {
    return std::max(0.0, 1.0 - poisson_tail_ge(mu, k0 + 1));
  }
  double lt = -mu + k0 * std::log(mu) - detail::log_factorial(k0);
  double lacc = lt;
  for (std::int64_t j = k0; j > 0; --j) {
    const double ratio = static_cast<double>(j) / mu;
    lt += std::log(ratio);
    lacc = logaddexp(lacc, lt);
    if (ratio < 1.0) {
      const double lrem = lt + std::log(ratio / (1.0 - ratio));
      if (lt < lacc + std::log(1e-16) && lrem < std::log(1e-13)) break;
    }
  }
  return std::min(1.0, std::exp(lacc));
}

}  // namespace

namespace detail {

double log_factorial(std::int64_t n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(20001);
    long double acc = 0.0L;
    t[0] = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
      acc += std::log(static_cast<long double>(k));
      t[k] = static_cast<double>(acc);
    }
    return t;
  }();
  if (n < static_cast<std::int64_t>(table.size())) {
    return table[static_cast<std::size_t>(n)];
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_bessel_i_series(std::int64_t order, double x) {
  // All terms of the defining series are positive; accumulate them in log
  // space until well past the peak.
  const double lhalf = std::log(0.5 * x);
  double lacc = kNegInf;
  double lmax = kNegInf;
  const double nd = static_cast<double>(order);
  const std::int64_t peak = static_cast<std::int64_t>(
      std::max(0.0, 0.5 * (std::sqrt(nd * nd + x * x) - nd)));
  for (std::int64_t m = 0;; ++m) {
    const double lt = (2 * m + order) * lhalf - log_factorial(m) -
                      log_factorial(m + order);
    lacc = logaddexp(lacc, lt);
    lmax = std::max(lmax, lt);
    if (m > peak && lt < lmax - 45.0) break;
  }
  return lacc;
}

double log_bessel_i_asymptotic(std::int64_t order, double x) {
  constexpr std::int64_t kMinOlverOrder = 40;
  if (order >= kMinOlverOrder) {
    return olver_log_bessel(static_cast<double>(order), x);
  }
  // Stable downward recurrence from Olver seeds, on e^{-x}-scaled values.
  double hi = std::exp(olver_log_bessel(kMinOlverOrder + 1, x) - x);
  double lo = std::exp(olver_log_bessel(kMinOlverOrder, x) - x);
  for (std::int64_t m = kMinOlverOrder; m > order; --m) {
    const double next = (2.0 * static_cast<double>(m) / x) * lo + hi;
    hi = lo;
    lo = next;
  }
  return std::log(lo) + x;
}

}  // namespace detail

double log_bessel_i(std::int64_t order, double x) {
  if (order < 0) {
    throw Error(ErrorKind::kNegativeArgument,
                "Bessel order must be nonnegative, got " +
                    std::to_string(order));
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::kNegativeArgument,
                "Bessel argument must be finite and nonnegative");
  }
  if (x == 0.0) return order == 0 ? 0.0 : kNegInf;
  return x < detail::kBesselSwitch ? detail::log_bessel_i_series(order, x)
                                   : detail::log_bessel_i_asymptotic(order, x);
}

double skellam_log_pmf(std::int64_t alpha, const SkellamParams& params) {
  const double mu1 = params.mu1;
  const double mu2 = params.mu2;
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0) || !std::isfinite(mu1) ||
      !std::isfinite(mu2)) {
    throw Error(ErrorKind::kNegativeArgument,
                "Skellam means must be finite and nonnegative");
  }
  if (mu1 == 0.0 && mu2 == 0.0) return alpha == 0 ? 0.0 : kNegInf;
  if (mu1 == 0.0) {
    // Difference collapses to -N2.
    if (alpha > 0) return kNegInf;
    return -mu2 + static_cast<double>(-alpha) * std::log(mu2) -
           detail::log_factorial(-alpha);
  }
  if (mu2 == 0.0) {
    if (alpha < 0) return kNegInf;
    return -mu1 + static_cast<double>(alpha) * std::log(mu1) -
           detail::log_factorial(alpha);
  }
  const double x = 2.0 * std::sqrt(mu1 * mu2);
  return -(mu1 + mu2) +
         0.5 * static_cast<double>(alpha) * (std::log(mu1) - std::log(mu2)) +
         log_bessel_i(alpha >= 0 ? alpha : -alpha, x);
}

double skellam_tail_ge(std::int64_t alpha0, const SkellamParams& params) {
  const double mu1 = params.mu1;
  const double mu2 = params.mu2;
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0) || !std::isfinite(mu1) ||
      !std::isfinite(mu2)) {
    throw Error(ErrorKind::kNegativeArgument,
                "Skellam means must be finite and nonnegative");
  }
  if (mu1 == 0.0 && mu2 == 0.0) return alpha0 <= 0 ? 1.0 : 0.0;
  if (mu1 == 0.0) {
    if (alpha0 > 0) return 0.0;
    return poisson_cdf_le(mu2, -alpha0);
  }
  if (mu2 == 0.0) {
    if (alpha0 <= 0) return 1.0;
    return poisson_tail_ge(mu1, alpha0);
  }

  const auto mode = static_cast<std::int64_t>(std::llround(mu1 - mu2));
  const double lstop_rel = std::log(1e-16);
  const double lstop_abs = std::log(1e-13);

  if (alpha0 > mode) {
    // Right flank: sum upward from alpha0.
    double lacc = kNegInf;
    double lprev = kNegInf;
    for (std::int64_t a = alpha0;; ++a) {
      const double lt = skellam_log_pmf(a, params);
      lacc = logaddexp(lacc, lt);
      if (a > alpha0 && lt < lprev) {
        const double lr = lt - lprev;
        const double r = std::exp(lr);
        const double lrem = lt + lr - std::log1p(-r);
        if (lt < lacc + lstop_rel && lrem < lstop_abs) break;
      }
      lprev = lt;
    }
    return std::min(1.0, std::exp(lacc));
  }

  // Left flank: result = 1 - Pr(N1 - N2 < alpha0), summing downward.
  double lacc = kNegInf;
  double lprev = kNegInf;
  for (std::int64_t a = alpha0 - 1;; --a) {
    const double lt = skellam_log_pmf(a, params);
    lacc = logaddexp(lacc, lt);
    if (a < alpha0 - 1 && lt < lprev) {
      const double lr = lt - lprev;
      const double r = std::exp(lr);
      const double lrem = lt + lr - std::log1p(-r);
      if (lt < lacc + lstop_rel && lrem < lstop_abs) break;
    }
    lprev = lt;
  }
  return std::clamp(1.0 - std::exp(lacc), 0.0, 1.0);
}

}  // namespace mvb
