#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvb/population.hpp"
#include "mvb/rng.hpp"

namespace mvb {

// Rule applied when several classes share the maximum tally. Worst and best
// are referee policies: they see the true class (used by the simulator and
// the exact oracle only, never by the voting function itself).
enum class TiePolicy { kRandom, kWorst, kBest };

const char* tie_policy_name(TiePolicy policy);
TiePolicy parse_tie_policy(const std::string& name);

// Vote counts of one simulated round, split by group.
struct TallyVector {
  Eigen::MatrixXi per_group;  // T x K
  Eigen::VectorXi totals;     // K
  int voters = 0;
};

// 95% Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials);

struct ClassEstimate {
  std::int64_t trials = 0;
  std::int64_t errors = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

struct SimulationEstimate {
  std::int64_t trials = 0;
  std::int64_t errors = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::vector<ClassEstimate> per_class;
  TiePolicy tie_policy = TiePolicy::kRandom;
  std::uint64_t seed = 0;
  int voters = 0;
};

// Deterministic largest-remainder apportionment of r_t * M into integer
// group sizes summing to M. With strict on, a positive-proportion group
// rounding to zero voters raises ApportionmentImpossible; otherwise empty
// groups are allowed with a warning on stderr.
std::vector<int> apportion_group_sizes(const VoterPopulation& pop, int voters,
                                       bool strict = false);

// Plurality decision on a tally. Unique maxima decide directly; ties follow
// the policy (random draws from the stream; worst picks the lexicographically
// smallest incorrect tied class; best keeps the true class when tied).
// Throws MissingTrueClass when worst/best run without a referee class.
int mvf_decide(const Eigen::VectorXi& totals, TiePolicy policy,
               std::optional<int> true_class, RandomStream& stream);
int mvf_decide(const TallyVector& tally, TiePolicy policy,
               std::optional<int> true_class, RandomStream& stream);

// Seeded Monte Carlo run of the full voting pipeline: per trial a uniform
// hidden class, multinomial votes per group, plurality decision. Per-trial
// substreams make the result bitwise identical for any thread count.
SimulationEstimate simulate_error_rate(const VoterPopulation& pop, int voters,
                                       std::int64_t trials, TiePolicy policy,
                                       std::uint64_t seed, int threads = 1,
                                       bool strict_groups = false);

// Exact error rate by enumerating all per-group vote compositions and
// applying the tie policy analytically (random ties contribute fractional
// mass). Throws StateSpaceTooLarge when the composition space exceeds the
// limit.
double exact_error_rate(const VoterPopulation& pop, int voters,
                        TiePolicy policy, double state_space_limit = 1e7);

}  // namespace mvb
