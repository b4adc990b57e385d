#include "mvb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <thread>

#include "mvb/errors.hpp"
#include "mvb/skellam.hpp"

namespace mvb {

namespace {

constexpr std::uint64_t kTrialTag = 0x7472696131ull;
constexpr double kWilsonZ = 1.959963984540054;  // 97.5% normal quantile

struct Counters {
  std::int64_t errors = 0;
  std::vector<std::int64_t> class_trials;
  std::vector<std::int64_t> class_errors;

  explicit Counters(int k)
      : class_trials(static_cast<std::size_t>(k), 0),
        class_errors(static_cast<std::size_t>(k), 0) {}
};

// Cumulative row distributions for fast inverse-cdf vote draws.
std::vector<Eigen::MatrixXd> build_row_cdfs(const VoterPopulation& pop) {
  std::vector<Eigen::MatrixXd> cdfs;
  cdfs.reserve(pop.group_count());
  const int k = pop.class_count();
  for (const auto& group : pop.groups()) {
    Eigen::MatrixXd cdf(k, k);
    for (int row = 0; row < k; ++row) {
      double acc = 0.0;
      for (int col = 0; col < k; ++col) {
        acc += group.matrix.prob(row, col);
        cdf(row, col) = acc;
      }
      cdf(row, k - 1) = 1.0;  // guard against rounding shortfall
    }
    cdfs.push_back(std::move(cdf));
  }
  return cdfs;
}

int draw_from_cdf(const Eigen::MatrixXd& cdf, int row, double u) {
  const int k = static_cast<int>(cdf.cols());
  for (int col = 0; col < k; ++col) {
    if (u < cdf(row, col)) return col;
  }
  return k - 1;
}

// Enumerates all compositions of `total` votes over `k` classes together
// with their multinomial probability under distribution row `probs`.
struct Composition {
  std::vector<int> counts;
  double prob;
};

void enumerate_compositions(int slot, int remaining, double log_coeff,
                            const Eigen::VectorXd& log_probs,
                            const Eigen::VectorXd& probs, int total,
                            std::vector<int>& counts,
                            std::vector<Composition>& out) {
  const int k = static_cast<int>(probs.size());
  if (slot == k - 1) {
    counts[slot] = remaining;
    double lp = log_coeff - detail::log_factorial(remaining);
    if (remaining > 0) {
      if (probs[slot] == 0.0) return;
      lp += remaining * log_probs[slot];
    }
    out.push_back(Composition{counts, std::exp(lp)});
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[slot] = c;
    double lp = log_coeff - detail::log_factorial(c);
    if (c > 0) {
      if (probs[slot] == 0.0) continue;
      lp += c * log_probs[slot];
    }
    enumerate_compositions(slot + 1, remaining - c, lp, log_probs, probs,
                           total, counts, out);
  }
}

std::vector<Composition> group_compositions(const TransitionMatrix& matrix,
                                            int true_class, int size) {
  const int k = matrix.class_count();
  Eigen::VectorXd probs(k), log_probs(k);
  for (int l = 0; l < k; ++l) {
    probs[l] = matrix.prob(true_class, l);
    log_probs[l] = probs[l] > 0.0 ? std::log(probs[l]) : 0.0;
  }
  std::vector<Composition> out;
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  enumerate_compositions(0, size, detail::log_factorial(size), log_probs,
                         probs, size, counts, out);
  return out;
}

// Fraction of decision mass going to a wrong class given final totals.
double error_mass(const std::vector<int>& totals, int true_class,
                  TiePolicy policy) {
  const int k = static_cast<int>(totals.size());
  int best = totals[0];
  for (int i = 1; i < k; ++i) best = std::max(best, totals[i]);
  int winners = 0;
  bool true_in = false;
  for (int i = 0; i < k; ++i) {
    if (totals[i] == best) {
      ++winners;
      if (i == true_class) true_in = true;
    }
  }
  switch (policy) {
    case TiePolicy::kRandom:
      return static_cast<double>(winners - (true_in ? 1 : 0)) / winners;
    case TiePolicy::kWorst:
      return (winners > 1 || !true_in) ? 1.0 : 0.0;
    case TiePolicy::kBest:
      return true_in ? 0.0 : 1.0;
  }
  return 0.0;
}

}  // namespace

const char* tie_policy_name(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::kRandom: return "random";
    case TiePolicy::kWorst: return "worst";
    case TiePolicy::kBest: return "best";
  }
  return "?";
}

TiePolicy parse_tie_policy(const std::string& name) {
  if (name == "random") return TiePolicy::kRandom;
  if (name == "worst") return TiePolicy::kWorst;
  if (name == "best") return TiePolicy::kBest;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown tie policy '" + name + "' (random|worst|best)");
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0) return WilsonInterval{0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half =
      kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return WilsonInterval{std::max(0.0, (center - half) / denom),
                        std::min(1.0, (center + half) / denom)};
}

std::vector<int> apportion_group_sizes(const VoterPopulation& pop, int voters,
                                       bool strict) {
  if (voters < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "voter count must be positive, got " + std::to_string(voters));
  }
  const int t_count = pop.group_count();
  std::vector<int> sizes(static_cast<std::size_t>(t_count), 0);
  std::vector<double> fracs(static_cast<std::size_t>(t_count), 0.0);
  int assigned = 0;
  for (int t = 0; t < t_count; ++t) {
    const double exact = pop.group(t).proportion * voters;
    const int base = static_cast<int>(std::floor(exact + 1e-9));
    sizes[t] = base;
    fracs[t] = exact - base;
    assigned += base;
  }
  std::vector<int> order(static_cast<std::size_t>(t_count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fracs[a] > fracs[b]; });
  for (int i = 0; i < voters - assigned; ++i) {
    ++sizes[order[static_cast<std::size_t>(i)]];
  }
  for (int t = 0; t < t_count; ++t) {
    if (sizes[t] == 0) {
      if (strict) {
        throw Error(ErrorKind::kApportionmentImpossible,
                    "group " + std::to_string(t + 1) + " (proportion " +
                        std::to_string(pop.group(t).proportion) +
                        ") receives no voters at M=" + std::to_string(voters));
      }
      std::cerr << "warning: group " << (t + 1) << " receives no voters at M="
                << voters << "\n";
    }
  }
  return sizes;
}

int mvf_decide(const Eigen::VectorXi& totals, TiePolicy policy,
               std::optional<int> true_class, RandomStream& stream) {
  if (policy != TiePolicy::kRandom && !true_class.has_value()) {
    throw Error(ErrorKind::kMissingTrueClass,
                std::string(tie_policy_name(policy)) +
                    " tie policy needs the referee's true class");
  }
  const int k = static_cast<int>(totals.size());
  int best = totals[0];
  for (int i = 1; i < k; ++i) best = std::max(best, totals[i]);
  int winners[2] = {-1, -1};  // first winner; first incorrect winner
  int winner_count = 0;
  bool true_in = false;
  for (int i = 0; i < k; ++i) {
    if (totals[i] != best) continue;
    ++winner_count;
    if (winners[0] < 0) winners[0] = i;
    if (true_class && i != *true_class && winners[1] < 0) winners[1] = i;
    if (true_class && i == *true_class) true_in = true;
  }
  if (winner_count == 1) return winners[0];
  switch (policy) {
    case TiePolicy::kRandom: {
      int pick = static_cast<int>(stream.next_below(
          static_cast<std::uint32_t>(winner_count)));
      for (int i = 0; i < k; ++i) {
        if (totals[i] == best && pick-- == 0) return i;
      }
      return winners[0];
    }
    case TiePolicy::kWorst:
      return winners[1] >= 0 ? winners[1] : *true_class;
    case TiePolicy::kBest:
      return true_in ? *true_class : winners[0];
  }
  return winners[0];
}

int mvf_decide(const TallyVector& tally, TiePolicy policy,
               std::optional<int> true_class, RandomStream& stream) {
  return mvf_decide(tally.totals, policy, true_class, stream);
}

SimulationEstimate simulate_error_rate(const VoterPopulation& pop, int voters,
                                       std::int64_t trials, TiePolicy policy,
                                       std::uint64_t seed, int threads,
                                       bool strict_groups) {
  if (trials < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "trial count must be positive, got " + std::to_string(trials));
  }
  const std::vector<int> sizes = apportion_group_sizes(pop, voters,
                                                       strict_groups);
  const auto cdfs = build_row_cdfs(pop);
  const int k = pop.class_count();
  const int t_count = pop.group_count();
  const RandomStream root(seed);

  auto run_range = [&](std::int64_t lo, std::int64_t hi, Counters& c) {
    Eigen::VectorXi totals(k);
    for (std::int64_t trial = lo; trial < hi; ++trial) {
      RandomStream ts = root.derive(kTrialTag, static_cast<std::uint64_t>(trial));
      const int x = static_cast<int>(ts.next_below(static_cast<std::uint32_t>(k)));
      totals.setZero();
      for (int t = 0; t < t_count; ++t) {
        for (int j = 0; j < sizes[t]; ++j) {
          ++totals[draw_from_cdf(cdfs[t], x, ts.next_double())];
        }
      }
      const int decided = mvf_decide(totals, policy, x, ts);
      const int err = decided != x ? 1 : 0;
      c.errors += err;
      ++c.class_trials[static_cast<std::size_t>(x)];
      c.class_errors[static_cast<std::size_t>(x)] += err;
    }
  };

  Counters total(k);
  if (threads <= 1) {
    run_range(0, trials, total);
  } else {
    const int workers = std::min<std::int64_t>(threads, trials);
    std::vector<Counters> parts(static_cast<std::size_t>(workers), Counters(k));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min(trials, lo + chunk);
      pool.emplace_back(run_range, lo, hi, std::ref(parts[static_cast<std::size_t>(w)]));
    }
    for (auto& th : pool) th.join();
    for (const auto& part : parts) {
      total.errors += part.errors;
      for (int i = 0; i < k; ++i) {
        total.class_trials[static_cast<std::size_t>(i)] +=
            part.class_trials[static_cast<std::size_t>(i)];
        total.class_errors[static_cast<std::size_t>(i)] +=
            part.class_errors[static_cast<std::size_t>(i)];
      }
    }
  }

  SimulationEstimate est;
  est.trials = trials;
  est.errors = total.errors;
  est.p_hat = static_cast<double>(total.errors) / static_cast<double>(trials);
  const WilsonInterval ci = wilson_interval(total.errors, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.tie_policy = policy;
  est.seed = seed;
  est.voters = voters;
  est.per_class.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& ce = est.per_class[static_cast<std::size_t>(i)];
    ce.trials = total.class_trials[static_cast<std::size_t>(i)];
    ce.errors = total.class_errors[static_cast<std::size_t>(i)];
    ce.p_hat = ce.trials > 0
                   ? static_cast<double>(ce.errors) / static_cast<double>(ce.trials)
                   : 0.0;
    const WilsonInterval cci = wilson_interval(ce.errors, ce.trials);
    ce.ci_low = cci.low;
    ce.ci_high = cci.high;
  }
  return est;
}

double exact_error_rate(const VoterPopulation& pop, int voters,
                        TiePolicy policy, double state_space_limit) {
  const std::vector<int> sizes = apportion_group_sizes(pop, voters, false);
  const int k = pop.class_count();
  const int t_count = pop.group_count();

  double space = 1.0;
  for (int t = 0; t < t_count; ++t) {
    double binom = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
      binom *= static_cast<double>(sizes[t] + i) / i;
    }
    space *= binom;
  }
  if (space > state_space_limit) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "composition space %.6g exceeds limit %.6g", space,
                  state_space_limit);
    throw Error(ErrorKind::kStateSpaceTooLarge, buf);
  }

  double total_error = 0.0;
  for (int x = 0; x < k; ++x) {
    std::vector<std::vector<Composition>> comps;
    comps.reserve(static_cast<std::size_t>(t_count));
    for (int t = 0; t < t_count; ++t) {
      comps.push_back(group_compositions(pop.group(t).matrix, x, sizes[t]));
    }
    std::vector<int> totals(static_cast<std::size_t>(k), 0);
    double err_x = 0.0;
    // depth-first product over group compositions
    auto recurse = [&](auto&& self, int t, double prob) -> void {
      if (prob == 0.0) return;
      if (t == t_count) {
        err_x += prob * error_mass(totals, x, policy);
        return;
      }
      for (const auto& comp : comps[static_cast<std::size_t>(t)]) {
        for (int i = 0; i < k; ++i) totals[static_cast<std::size_t>(i)] += comp.counts[static_cast<std::size_t>(i)];
        self(self, t + 1, prob * comp.prob);
        for (int i = 0; i < k; ++i) totals[static_cast<std::size_t>(i)] -= comp.counts[static_cast<std::size_t>(i)];
      }
    };
    recurse(recurse, 0, 1.0);
    total_error += err_x;
  }
  return total_error / k;
}

}  // namespace mvb
