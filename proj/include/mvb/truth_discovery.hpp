#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mvb/population.hpp"
#include "mvb/rng.hpp"
#include "mvb/simulate.hpp"

namespace mvb {

// Per-voter reliability state of the iterative weighted-vote scheme. Weights
// start uniform and are recomputed each round from the count of rounds in
// which a voter disagreed with the fused estimate.
struct TruthDiscoveryState {
  int round = 1;                    // next round to run, 1-based
  std::vector<double> weights;      // w_m >= 0
  std::vector<int> disagreements;   // e_m, rounds with Y_m != estimate
  double smoothing = 0.5;
};

// Uniform initialization: round 1, every weight = c, no disagreements.
// Throws NonPositiveConstant / ZeroVoters.
TruthDiscoveryState td_init(int voters, double c, double smoothing = 0.5);

struct TdRoundResult {
  int estimate = 0;
  TruthDiscoveryState next;
};

// One fusion round: the estimate maximizes the weight-summed tally (with
// equal weights this is exactly the plurality decision), ties follow the
// policy and stream; then disagreement counts are bumped and weights are
// refreshed as max(0, ln((t+1)/(e_m + smoothing))) — a log-reciprocal-error
// update with additive smoothing. Throws SizeMismatch when the vote vector
// does not match the voter count.
TdRoundResult td_round(const TruthDiscoveryState& state,
                       const std::vector<int>& votes, int class_count,
                       TiePolicy policy, std::optional<int> true_class,
                       RandomStream& stream);

// Head-to-head trajectory of the weighted scheme against plain plurality on
// identical sampled vote streams.
struct TdArmRound {
  std::int64_t errors = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::vector<ClassEstimate> per_class;
};

struct TdRoundEstimates {
  std::int64_t trials = 0;
  TdArmRound td;
  TdArmRound mvf;
};

struct TdTrajectory {
  std::vector<TdRoundEstimates> rounds;
  int voters = 0;
  std::uint64_t seed = 0;
  TiePolicy tie_policy = TiePolicy::kRandom;
};

// Runs `trials` independent histories of `rounds` fusion rounds each. Every
// round draws one hidden class uniformly and one vote per voter; the same
// votes feed both arms, and tie draws are replicated so the arms differ only
// in the aggregation rule. Bitwise deterministic under the seed for any
// thread count.
TdTrajectory run_td_experiment(const VoterPopulation& pop, int voters,
                               int rounds, std::int64_t trials,
                               std::uint64_t seed,
                               TiePolicy policy = TiePolicy::kRandom,
                               double init_weight = 1.0,
                               double smoothing = 0.5, int threads = 1);

}  // namespace mvb
