#include "mvb/truth_discovery.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mvb/errors.hpp"

namespace mvb {

namespace {

constexpr std::uint64_t kTdTrialTag = 0x74643031ull;
constexpr std::uint64_t kVoteTag = 1;
constexpr std::uint64_t kTieTag = 2;

// Weighted argmax with the same tie semantics as mvf_decide. Weighted sums
// are compared exactly: with equal weights they are scaled integer tallies,
// which is the case the round-1 equivalence depends on.
int weighted_decide(const std::vector<double>& tally, TiePolicy policy,
                    std::optional<int> true_class, RandomStream& stream) {
  const int k = static_cast<int>(tally.size());
  double best = tally[0];
  for (int i = 1; i < k; ++i) best = std::max(best, tally[i]);
  int winner_count = 0;
  int first = -1, first_wrong = -1;
  bool true_in = false;
  for (int i = 0; i < k; ++i) {
    if (tally[i] != best) continue;
    ++winner_count;
    if (first < 0) first = i;
    if (true_class && i != *true_class && first_wrong < 0) first_wrong = i;
    if (true_class && i == *true_class) true_in = true;
  }
  if (winner_count == 1) return first;
  switch (policy) {
    case TiePolicy::kRandom: {
      int pick = static_cast<int>(
          stream.next_below(static_cast<std::uint32_t>(winner_count)));
      for (int i = 0; i < k; ++i) {
        if (tally[i] == best && pick-- == 0) return i;
      }
      return first;
    }
    case TiePolicy::kWorst:
      if (!true_class.has_value()) {
        throw Error(ErrorKind::kMissingTrueClass,
                    "worst tie policy needs the referee's true class");
      }
      return first_wrong >= 0 ? first_wrong : *true_class;
    case TiePolicy::kBest:
      if (!true_class.has_value()) {
        throw Error(ErrorKind::kMissingTrueClass,
                    "best tie policy needs the referee's true class");
      }
      return true_in ? *true_class : first;
  }
  return first;
}

struct ArmCounters {
  std::vector<std::int64_t> errors;                  // per round
  std::vector<std::vector<std::int64_t>> class_errors;  // round x class
};

struct TdCounters {
  std::vector<std::vector<std::int64_t>> class_trials;  // round x class
  ArmCounters td, mvf;

  TdCounters(int rounds, int k)
      : class_trials(rounds, std::vector<std::int64_t>(k, 0)) {
    td.errors.assign(rounds, 0);
    mvf.errors.assign(rounds, 0);
    td.class_errors.assign(rounds, std::vector<std::int64_t>(k, 0));
    mvf.class_errors.assign(rounds, std::vector<std::int64_t>(k, 0));
  }
};

}  // namespace

TruthDiscoveryState td_init(int voters, double c, double smoothing) {
  if (voters < 1) {
    throw Error(ErrorKind::kZeroVoters,
                "need at least one voter, got " + std::to_string(voters));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::kNonPositiveConstant,
                "initial weight must be positive, got " + std::to_string(c));
  }
  // smoothing below 2 keeps every weight strictly positive (e_m <= t-1),
  // so some voter always carries the estimate
  if (!(smoothing > 0.0 && smoothing < 2.0)) {
    throw Error(ErrorKind::kNonPositiveConstant,
                "smoothing must lie in (0,2), got " + std::to_string(smoothing));
  }
  TruthDiscoveryState state;
  state.round = 1;
  state.weights.assign(static_cast<std::size_t>(voters), c);
  state.disagreements.assign(static_cast<std::size_t>(voters), 0);
  state.smoothing = smoothing;
  return state;
}

TdRoundResult td_round(const TruthDiscoveryState& state,
                       const std::vector<int>& votes, int class_count,
                       TiePolicy policy, std::optional<int> true_class,
                       RandomStream& stream) {
  const std::size_t m = state.weights.size();
  if (votes.size() != m) {
    throw Error(ErrorKind::kSizeMismatch,
                "vote vector has " + std::to_string(votes.size()) +
                    " entries for " + std::to_string(m) + " voters");
  }
  std::vector<double> tally(static_cast<std::size_t>(class_count), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    tally[static_cast<std::size_t>(votes[i])] += state.weights[i];
  }
  TdRoundResult result;
  result.estimate = weighted_decide(tally, policy, true_class, stream);
  result.next = state;
  auto& next = result.next;
  const double t_next = static_cast<double>(state.round) + 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (votes[i] != result.estimate) ++next.disagreements[i];
    next.weights[i] = std::max(
        0.0, std::log(t_next / (next.disagreements[i] + next.smoothing)));
  }
  next.round = state.round + 1;
  return result;
}

TdTrajectory run_td_experiment(const VoterPopulation& pop, int voters,
                               int rounds, std::int64_t trials,
                               std::uint64_t seed, TiePolicy policy,
                               double init_weight, double smoothing,
                               int threads) {
  if (rounds < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "round count must be positive, got " + std::to_string(rounds));
  }
  if (trials < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "trial count must be positive, got " + std::to_string(trials));
  }
  const std::vector<int> sizes = apportion_group_sizes(pop, voters, false);
  const int k = pop.class_count();
  const int t_count = pop.group_count();
  // fixed voter -> group layout so weights track one voter across rounds
  std::vector<int> group_of;
  group_of.reserve(static_cast<std::size_t>(voters));
  for (int t = 0; t < t_count; ++t) {
    group_of.insert(group_of.end(), static_cast<std::size_t>(sizes[t]), t);
  }
  std::vector<Eigen::MatrixXd> cdfs;
  cdfs.reserve(static_cast<std::size_t>(t_count));
  for (const auto& group : pop.groups()) {
    Eigen::MatrixXd cdf(k, k);
    for (int row = 0; row < k; ++row) {
      double acc = 0.0;
      for (int col = 0; col < k; ++col) {
        acc += group.matrix.prob(row, col);
        cdf(row, col) = acc;
      }
      cdf(row, k - 1) = 1.0;
    }
    cdfs.push_back(std::move(cdf));
  }
  const RandomStream root(seed);

  auto run_range = [&](std::int64_t lo, std::int64_t hi, TdCounters& c) {
    std::vector<int> votes(static_cast<std::size_t>(voters), 0);
    Eigen::VectorXi totals(k);
    for (std::int64_t trial = lo; trial < hi; ++trial) {
      RandomStream ts = root.derive(kTdTrialTag, static_cast<std::uint64_t>(trial));
      TruthDiscoveryState state = td_init(voters, init_weight, smoothing);
      for (int r = 0; r < rounds; ++r) {
        RandomStream vote_stream = ts.derive(kVoteTag, static_cast<std::uint64_t>(r));
        const int x = static_cast<int>(
            vote_stream.next_below(static_cast<std::uint32_t>(k)));
        totals.setZero();
        for (int m = 0; m < voters; ++m) {
          const auto& cdf = cdfs[static_cast<std::size_t>(group_of[static_cast<std::size_t>(m)])];
          const double u = vote_stream.next_double();
          int vote = k - 1;
          for (int col = 0; col < k; ++col) {
            if (u < cdf(x, col)) {
              vote = col;
              break;
            }
          }
          votes[static_cast<std::size_t>(m)] = vote;
          ++totals[vote];
        }
        // identical tie streams per arm: the arms differ only in weighting
        RandomStream tie_mvf = ts.derive(kTieTag, static_cast<std::uint64_t>(r));
        RandomStream tie_td = ts.derive(kTieTag, static_cast<std::uint64_t>(r));
        const int mvf_est = mvf_decide(totals, policy, x, tie_mvf);
        TdRoundResult round_result =
            td_round(state, votes, k, policy, x, tie_td);
        state = std::move(round_result.next);
        ++c.class_trials[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
        if (mvf_est != x) {
          ++c.mvf.errors[static_cast<std::size_t>(r)];
          ++c.mvf.class_errors[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
        }
        if (round_result.estimate != x) {
          ++c.td.errors[static_cast<std::size_t>(r)];
          ++c.td.class_errors[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
        }
      }
    }
  };

  TdCounters total(rounds, k);
  if (threads <= 1) {
    run_range(0, trials, total);
  } else {
    const int workers = static_cast<int>(std::min<std::int64_t>(threads, trials));
    std::vector<TdCounters> parts(static_cast<std::size_t>(workers),
                                  TdCounters(rounds, k));
    std::vector<std::thread> pool;
    const std::int64_t chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min(trials, lo + chunk);
      pool.emplace_back(run_range, lo, hi,
                        std::ref(parts[static_cast<std::size_t>(w)]));
    }
    for (auto& th : pool) th.join();
    for (const auto& part : parts) {
      for (int r = 0; r < rounds; ++r) {
        total.td.errors[static_cast<std::size_t>(r)] += part.td.errors[static_cast<std::size_t>(r)];
        total.mvf.errors[static_cast<std::size_t>(r)] += part.mvf.errors[static_cast<std::size_t>(r)];
        for (int i = 0; i < k; ++i) {
          total.class_trials[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] +=
              part.class_trials[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
          total.td.class_errors[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] +=
              part.td.class_errors[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
          total.mvf.class_errors[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] +=
              part.mvf.class_errors[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
        }
      }
    }
  }

  TdTrajectory trajectory;
  trajectory.voters = voters;
  trajectory.seed = seed;
  trajectory.tie_policy = policy;
  trajectory.rounds.resize(static_cast<std::size_t>(rounds));
  auto fill_arm = [&](TdArmRound& arm, std::int64_t errors,
                      const std::vector<std::int64_t>& class_errors,
                      const std::vector<std::int64_t>& class_trials) {
    arm.errors = errors;
    arm.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
    const WilsonInterval ci = wilson_interval(errors, trials);
    arm.ci_low = ci.low;
    arm.ci_high = ci.high;
    arm.per_class.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      auto& ce = arm.per_class[static_cast<std::size_t>(i)];
      ce.trials = class_trials[static_cast<std::size_t>(i)];
      ce.errors = class_errors[static_cast<std::size_t>(i)];
      ce.p_hat = ce.trials > 0 ? static_cast<double>(ce.errors) /
                                     static_cast<double>(ce.trials)
                               : 0.0;
      const WilsonInterval cci = wilson_interval(ce.errors, ce.trials);
      ce.ci_low = cci.low;
      ce.ci_high = cci.high;
    }
  };
  for (int r = 0; r < rounds; ++r) {
    auto& re = trajectory.rounds[static_cast<std::size_t>(r)];
    re.trials = trials;
    fill_arm(re.td, total.td.errors[static_cast<std::size_t>(r)],
             total.td.class_errors[static_cast<std::size_t>(r)],
             total.class_trials[static_cast<std::size_t>(r)]);
    fill_arm(re.mvf, total.mvf.errors[static_cast<std::size_t>(r)],
             total.mvf.class_errors[static_cast<std::size_t>(r)],
             total.class_trials[static_cast<std::size_t>(r)]);
  }
  return trajectory;
}

}  // namespace mvb
