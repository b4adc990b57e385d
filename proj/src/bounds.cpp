#include "mvb/bounds.hpp"

#include <cmath>
#include <string>

#include "mvb/errors.hpp"
#include "mvb/skellam.hpp"

namespace mvb {

namespace {

void require_voters(int voters, int minimum) {
  if (voters < minimum) {
    throw Error(ErrorKind::kInvalidArgument,
                "voter count must be at least " + std::to_string(minimum) +
                    ", got " + std::to_string(voters));
  }
}

std::string pair_list(const std::vector<std::pair<int, int>>& pairs) {
  std::string out;
  for (const auto& [k, l] : pairs) {
    if (!out.empty()) out += ", ";
    out += "(k=" + std::to_string(k + 1) + ",l=" + std::to_string(l + 1) + ")";
  }
  return out;
}

// Start index for the group-resolved tail: ceil(alpha0), with values within
// 1e-9 of an integer snapped first so that analytically-zero alpha0 (the
// single-group case) does not ceil up on rounding noise.
std::int64_t tail_start_index(double alpha0) {
  const double snapped = std::round(alpha0);
  if (std::abs(alpha0 - snapped) < 1e-9) {
    return static_cast<std::int64_t>(snapped);
  }
  return static_cast<std::int64_t>(std::ceil(alpha0));
}

}  // namespace

const char* bound_method_name(BoundMethod method) {
  switch (method) {
    case BoundMethod::kThm1: return "thm1";
    case BoundMethod::kThm2Pair: return "thm2-pair";
    case BoundMethod::kChernoffUnion: return "chernoff-union";
    case BoundMethod::kThm3Slope: return "thm3-slope";
    case BoundMethod::kThm4: return "thm4";
    case BoundMethod::kThm6Slope: return "thm6-slope";
  }
  return "?";
}

BoundReport iid_upper_bound(const TransitionMatrix& p, int voters) {
  require_voters(voters, 1);
  const int k_count = p.class_count();
  const double m = voters;
  BoundReport report;
  report.method = BoundMethod::kThm1;
  report.voters = voters;
  report.per_class.resize(k_count);
  double mean_prod = 0.0;
  for (int k = 0; k < k_count; ++k) {
    double log_prod = 0.0;
    for (int l = 0; l < k_count; ++l) {
      if (l == k) continue;
      const double s =
          skellam_tail_ge(0, SkellamParams{m * p.prob(k, l), m * p.prob(k, k)});
      log_prod += std::log1p(-s);
    }
    const double one_minus_prod = -std::expm1(log_prod);
    report.per_class[k] = 2.0 * one_minus_prod;
    mean_prod += std::exp(log_prod);
  }
  report.raw = 2.0 * (1.0 - mean_prod / k_count);
  report.clamped = std::min(report.raw, 1.0);
  return report;
}

double pairwise_chernoff_bound(double p_a, double p_b, int voters) {
  require_voters(voters, 1);
  if (!(p_b >= 0.0) || !(p_a <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "pair probabilities must lie in [0,1]");
  }
  if (!(p_a > p_b)) {
    throw Error(ErrorKind::kPreconditionViolated,
                "pairwise bound needs p_a > p_b strictly, got p_a=" +
                    std::to_string(p_a) + ", p_b=" + std::to_string(p_b));
  }
  const double gap = std::sqrt(p_a) - std::sqrt(p_b);
  return 2.0 * std::exp(-static_cast<double>(voters) * gap * gap);
}

BoundReport iid_chernoff_union_bound(const TransitionMatrix& p, int voters) {
  require_voters(voters, 1);
  const int k_count = p.class_count();
  BoundReport report;
  report.method = BoundMethod::kChernoffUnion;
  report.voters = voters;
  report.per_class.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    double sum = 0.0;
    for (int l = 0; l < k_count; ++l) {
      if (l == k) continue;
      if (p.prob(k, k) > p.prob(k, l)) {
        sum += pairwise_chernoff_bound(p.prob(k, k), p.prob(k, l), voters);
      } else {
        sum += 2.0;  // vacuous term; Pr <= 1 <= 2 always holds
        report.dominance_violations.emplace_back(k, l);
      }
    }
    report.per_class[k] = sum;
  }
  report.raw = report.per_class.mean();
  report.clamped = std::min(report.raw, 1.0);
  return report;
}

SlopeResult iid_slope(const TransitionMatrix& p) {
  const int k_count = p.class_count();
  std::vector<std::pair<int, int>> violations;
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < k_count; ++l) {
      if (l != k && !(p.prob(k, k) > p.prob(k, l))) {
        violations.emplace_back(k, l);
      }
    }
  }
  if (!violations.empty()) {
    throw Error(ErrorKind::kDominanceViolated,
                "diagonal dominance violated at " + pair_list(violations));
  }
  SlopeResult result;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < k_count; ++l) {
      if (l == k) continue;
      const double gap = std::sqrt(p.prob(k, k)) - std::sqrt(p.prob(k, l));
      if (gap < best) {
        best = gap;
        result.k_star = k;
        result.l_star = l;
      }
    }
  }
  result.slope = -best * best;
  result.note =
      "asymptotic slope; omits a vanishing O(ln(M^(-3/4))/M) correction";
  return result;
}

BoundReport noniid_upper_bound(const VoterPopulation& pop, int voters) {
  require_voters(voters, 1);
  const int k_count = pop.class_count();
  const int t_count = pop.group_count();
  const Eigen::MatrixXd deltas = delta_table(pop);
  BoundReport report;
  report.method = BoundMethod::kThm4;
  report.voters = voters;
  report.per_class.resize(k_count);
  report.alpha0_table.assign(t_count,
                             Eigen::MatrixXd::Zero(k_count, k_count));
  double sum_terms = 0.0;
  for (int k = 0; k < k_count; ++k) {
    double log_prod = 0.0;
    for (int t = 0; t < t_count; ++t) {
      const auto& group = pop.group(t);
      const double rt_m = group.proportion * voters;
      for (int l = 0; l < k_count; ++l) {
        if (l == k) continue;
        const double q_lk = group.matrix.prob(k, l);
        const double q_kk = group.matrix.prob(k, k);
        const double alpha0 = rt_m * (q_lk - q_kk + deltas(k, l));
        const std::int64_t start = tail_start_index(alpha0);
        report.alpha0_table[t](k, l) = static_cast<double>(start);
        const double s =
            skellam_tail_ge(start, SkellamParams{rt_m * q_lk, rt_m * q_kk});
        log_prod += std::log1p(-s);
      }
    }
    const double one_minus_prod = -std::expm1(log_prod);
    report.per_class[k] = 2.0 * one_minus_prod;
    sum_terms += one_minus_prod;
  }
  report.raw = 2.0 * sum_terms / k_count;
  report.clamped = std::min(report.raw, 1.0);
  return report;
}

EpsilonStar epsilon_star(const VoterPopulation& pop) {
  const int k_count = pop.class_count();
  const int t_count = pop.group_count();
  const Eigen::MatrixXd deltas = delta_table(pop);
  std::vector<std::pair<int, int>> violations;
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < k_count; ++l) {
      if (l != k && !(deltas(k, l) > 0.0)) violations.emplace_back(k, l);
    }
  }
  if (!violations.empty()) {
    throw Error(ErrorKind::kDeltaNotPositive,
                "delta margins must be positive at " + pair_list(violations));
  }
  EpsilonStar result;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < k_count; ++l) {
      if (l == k) continue;
      const double d = deltas(k, l);
      for (int t = 0; t < t_count; ++t) {
        const auto& group = pop.group(t);
        const double value = group.proportion * d * d /
                             (8.0 * (group.matrix.prob(k, l) + d / 6.0));
        if (value < best) {
          best = value;
          result.true_class = k;
          result.voted_class = l;
          result.group = t;
        }
      }
    }
  }
  result.value = best;
  return result;
}

BoundReport noniid_slope_bound(const VoterPopulation& pop, int voters) {
  require_voters(voters, 0);
  const EpsilonStar eps = epsilon_star(pop);
  BoundReport report;
  report.method = BoundMethod::kThm6Slope;
  report.voters = voters;
  report.raw = 2.0 * pop.class_count() * pop.group_count() *
               std::exp(-static_cast<double>(voters) * eps.value);
  report.clamped = std::min(report.raw, 1.0);
  report.slope = -eps.value;
  report.epsilon_star = eps.value;
  report.epsilon_argmin = {eps.true_class, eps.voted_class, eps.group};
  return report;
}

}  // namespace mvb
