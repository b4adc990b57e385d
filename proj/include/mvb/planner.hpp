#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mvb/bounds.hpp"
#include "mvb/population.hpp"
#include "mvb/simulate.hpp"

namespace mvb {

enum class PlanMethod { kThm1, kThm4, kChernoffUnion, kSimulation };

const char* plan_method_name(PlanMethod method);
PlanMethod parse_plan_method(const std::string& name);

// Outcome of a voter-count plan. When m_min is set, the attached evidence
// certifies the target (clamped bound, or Wilson upper limit, <= target at
// m_min). When empty, not_achievable_reason explains why and, if the
// asymptotic gate failed, the reliability report is attached.
struct PlanResult {
  double target = 0.0;
  PlanMethod method = PlanMethod::kThm1;
  std::optional<int> m_min;
  std::string not_achievable_reason;
  int scan_ceiling = 0;
  std::optional<BoundReport> bound_evidence;
  std::optional<SimulationEstimate> simulation_evidence;
  std::optional<ReliabilityReport> reliability;
};

// Smallest voter count whose certified bound meets the target. Populations
// that are not fully reliable (some margin <= 0) can never meet any target
// below the limiting error rate, so the reliability gate short-circuits the
// scan. The scan is linear — the bounds are not proven monotone in M.
// Methods thm1 and chernoff-union require a single-group population.
PlanResult min_voters_bound(const VoterPopulation& pop, double target,
                            int m_max, PlanMethod method);

// Smallest scanned voter count whose Wilson upper limit meets the target.
// Scans M = 1, 1+step, ... (default step 2 keeps the grid on odd counts,
// avoiding tie plateaus). Throws TrialsInsufficient when the interval can
// never certify the target at the given trial count.
PlanResult min_voters_simulated(const VoterPopulation& pop, double target,
                                std::int64_t trials, int m_max,
                                std::uint64_t seed, int step = 2,
                                TiePolicy policy = TiePolicy::kRandom,
                                int threads = 1);

}  // namespace mvb
