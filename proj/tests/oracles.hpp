#pragma once

// Test-only oracles, deliberately independent of the library's evaluation
// paths: plain-double series, Poisson convolutions, and small-space
// enumerations.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracles {

// Partial sums of the defining power series, plain double arithmetic.
// Only valid where I_n(x) itself is representable (small x).
inline double bessel_i_series(int order, double x) {
  double sum = 0.0;
  double term = std::pow(0.5 * x, order);
  for (int j = 1; j <= order; ++j) term /= j;  // (x/2)^n / n!
  for (int m = 0;; ++m) {
    sum += term;
    const double next = term * (0.25 * x * x) / ((m + 1.0) * (m + 1.0 + order));
    if (next < sum * 1e-18 && m > x) break;
    term = next;
  }
  return sum;
}

inline double poisson_pmf(double mu, std::int64_t k) {
  if (k < 0) return 0.0;
  if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
}

// Pr(N1 - N2 = alpha) by direct convolution of the two Poisson laws.
inline double skellam_pmf_convolution(std::int64_t alpha, double mu1,
                                      double mu2) {
  double sum = 0.0;
  for (std::int64_t m = 0; m < 4000; ++m) {
    const double t = poisson_pmf(mu2, m) * poisson_pmf(mu1, m + alpha);
    sum += t;
    if (m > mu1 + mu2 + 60 && t < 1e-22) break;
  }
  return sum;
}

// Pr(N >= k) by summation, truncated once the added mass is below 1e-16.
inline double poisson_tail_ge(double mu, std::int64_t k) {
  if (k <= 0) return 1.0;
  double sum = 0.0;
  for (std::int64_t j = k;; ++j) {
    const double t = poisson_pmf(mu, j);
    sum += t;
    if (j > mu + 40 && t < 1e-16) break;
  }
  return sum;
}

// Pr(N1 - N2 >= alpha0) by the double-sum convolution with truncation below
// 1e-14 per strip.
inline double skellam_tail_convolution(std::int64_t alpha0, double mu1,
                                       double mu2) {
  double sum = 0.0;
  for (std::int64_t n = 0;; ++n) {
    const double pn = poisson_pmf(mu2, n);
    sum += pn * poisson_tail_ge(mu1, n + alpha0);
    if (n > mu2 + 40 && pn < 1e-14) break;
  }
  return sum;
}

// Exact Pr(V_a <= V_b) for M trials with per-trial probabilities
// (p_a, p_b, 1 - p_a - p_b): trinomial enumeration.
inline double trinomial_pr_le(double p_a, double p_b, int m) {
  const double p_rest = 1.0 - p_a - p_b;
  double total = 0.0;
  for (int a = 0; a <= m; ++a) {
    for (int b = a; b <= m - a; ++b) {
      const int rest = m - a - b;
      double logp = std::lgamma(m + 1.0) - std::lgamma(a + 1.0) -
                    std::lgamma(b + 1.0) - std::lgamma(rest + 1.0);
      if (a > 0) {
        if (p_a == 0.0) continue;
        logp += a * std::log(p_a);
      }
      if (b > 0) {
        if (p_b == 0.0) continue;
        logp += b * std::log(p_b);
      }
      if (rest > 0) {
        if (p_rest <= 0.0) continue;
        logp += rest * std::log(p_rest);
      }
      total += std::exp(logp);
    }
  }
  return total;
}

// Exact Pr(V_1 >= V_2 | truth = class 1) for a single K=3 voter type:
// multinomial enumeration over the first two counts.
inline double multinomial_pr_v1_ge_v2(const std::vector<double>& row, int m) {
  const double p1 = row[0], p2 = row[1], p3 = row[2];
  double total = 0.0;
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; a + b <= m; ++b) {
      if (a < b) continue;
      const int c = m - a - b;
      double logp = std::lgamma(m + 1.0) - std::lgamma(a + 1.0) -
                    std::lgamma(b + 1.0) - std::lgamma(c + 1.0);
      if (a > 0) {
        if (p1 == 0.0) continue;
        logp += a * std::log(p1);
      }
      if (b > 0) {
        if (p2 == 0.0) continue;
        logp += b * std::log(p2);
      }
      if (c > 0) {
        if (p3 == 0.0) continue;
        logp += c * std::log(p3);
      }
      total += std::exp(logp);
    }
  }
  return total;
}

}  // namespace oracles
