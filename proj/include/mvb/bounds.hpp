#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mvb/population.hpp"
#include "mvb/transition_matrix.hpp"

namespace mvb {

enum class BoundMethod {
  kThm1,
  kThm2Pair,
  kChernoffUnion,
  kThm3Slope,
  kThm4,
  kThm6Slope,
};

const char* bound_method_name(BoundMethod method);

// Result of a bound evaluation. `raw` is the bound exactly as derived and may
// exceed one at small voter counts; `clamped` is min(raw, 1). Both are kept
// because values above one mark the pre-asymptotic regime.
struct BoundReport {
  BoundMethod method = BoundMethod::kThm1;
  int voters = 0;
  double raw = 0.0;
  double clamped = 0.0;
  Eigen::VectorXd per_class;  // conditional term per true class (may be empty)

  std::optional<double> slope;
  std::optional<double> epsilon_star;
  std::optional<std::array<int, 3>> epsilon_argmin;  // (true k, voted l, group t)
  std::vector<std::pair<int, int>> dominance_violations;  // (true k, voted l)
  std::vector<Eigen::MatrixXd> alpha0_table;  // per group: K x K start indices
};

// Skellam-sum upper bound on the voting error rate for i.i.d. voters:
//   raw = 2 (1 - (1/K) sum_k prod_{l != k} (1 - s_{l,k})),
// where s_{l,k} = Pr(N_l - N_k >= 0) for independent Poisson counts with
// means M p_{l|k} and M p_{k|k}.
BoundReport iid_upper_bound(const TransitionMatrix& p, int voters);

// Chernoff bound on Pr(V_a <= V_b | truth) for one ordered pair of vote
// probabilities with p_a > p_b: 2 exp(-M (sqrt(p_a) - sqrt(p_b))^2).
// Throws PreconditionViolated when p_a <= p_b.
double pairwise_chernoff_bound(double p_a, double p_b, int voters);

// Union-of-pairs Chernoff bound. Pairs violating diagonal dominance
// contribute the trivial term 2 and are flagged in dominance_violations.
BoundReport iid_chernoff_union_bound(const TransitionMatrix& p, int voters);

// Asymptotic decay slope of the i.i.d. bound. (k_star, l_star) minimizes
// sqrt(p_{k|k}) - sqrt(p_{l|k}) over ordered pairs (lexicographic
// tie-break); the slope is the negated square of that minimum. Requires full
// diagonal dominance (DominanceViolated lists offending pairs). The omitted
// vanishing correction is described in `note`, never folded into the number.
struct SlopeResult {
  int k_star = 0;
  int l_star = 0;
  double slope = 0.0;
  std::string note;
};

SlopeResult iid_slope(const TransitionMatrix& p);

// Group-resolved Skellam-sum bound for independent, non-identically
// distributed voters. Per (true class k, voted class l, group t) the inner
// tail starts at ceil(alpha0) with
//   alpha0 = r_t M (q_{l|k} - q_{k|k} + delta_{l|k});
// near-integer alpha0 is snapped before the ceiling so that the single-group
// case reduces exactly to the i.i.d. bound. The start indices are recorded
// in alpha0_table.
BoundReport noniid_upper_bound(const VoterPopulation& pop, int voters);

// Minimal Chernoff exponent over class pairs and groups:
//   min r_t delta_{l|k}^2 / (8 (q_{l|k}^{(t)} + delta_{l|k}/6)),
// lexicographic tie-break on (k, l, t). Requires all margins positive
// (DeltaNotPositive lists offenders).
struct EpsilonStar {
  double value = 0.0;
  int true_class = 0;
  int voted_class = 0;
  int group = 0;
};

EpsilonStar epsilon_star(const VoterPopulation& pop);

// Exponential envelope 2KT exp(-M epsilon_star); slope meta carries
// -epsilon_star. voters may be zero (value 2KT).
BoundReport noniid_slope_bound(const VoterPopulation& pop, int voters);

}  // namespace mvb
