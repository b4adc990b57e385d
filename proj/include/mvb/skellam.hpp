#pragma once

#include <cstdint>

namespace mvb {

// Means of the two independent Poisson counts whose difference is studied.
struct SkellamParams {
  double mu1 = 0.0;  // mean of the first count (e.g. M * p_{l|k})
  double mu2 = 0.0;  // mean of the second count (e.g. M * p_{k|k})
};

// ln I_n(x) for integer order n >= 0 and x >= 0, stable far beyond the range
// where I_n itself overflows. Ascending power series in log space below the
// switch point, uniform large-order asymptotics (with a short downward
// recurrence for small orders) above it. Throws NegativeArgument.
double log_bessel_i(std::int64_t order, double x);

// ln Pr(N1 - N2 = alpha) for independent Poisson counts N1 ~ mu1, N2 ~ mu2.
// Degenerate means use the exact one-sided Poisson forms; -inf marks
// impossible outcomes.
double skellam_log_pmf(std::int64_t alpha, const SkellamParams& params);

// Pr(N1 - N2 >= alpha0), absolute error <= 1e-12. Terms are accumulated
// outward from the distribution mode in log space; each side stops once its
// next term falls below 1e-16 of the running sum and the geometric ratio
// bound certifies a remainder below 1e-13 (the pmf is log-concave, so
// successive term ratios only decrease).
double skellam_tail_ge(std::int64_t alpha0, const SkellamParams& params);

namespace detail {

// Series/asymptotic switch point for log_bessel_i; both sides are exposed so
// the agreement at the switch can be checked directly.
inline constexpr double kBesselSwitch = 50.0;

double log_bessel_i_series(std::int64_t order, double x);
double log_bessel_i_asymptotic(std::int64_t order, double x);

// ln(n!) via a cumulative table (lgamma fallback for large n).
double log_factorial(std::int64_t n);

}  // namespace detail

}  // namespace mvb
