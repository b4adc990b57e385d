#include "mvb/planner.hpp"

#include <cstdio>

#include "mvb/errors.hpp"

namespace mvb {

namespace {

constexpr std::uint64_t kPlanScanTag = 0x706c616eull;

void validate_target(double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error(ErrorKind::kTargetOutOfRange,
                "target error rate must lie in (0,1), got " +
                    std::to_string(target));
  }
}

}  // namespace

const char* plan_method_name(PlanMethod method) {
  switch (method) {
    case PlanMethod::kThm1: return "thm1";
    case PlanMethod::kThm4: return "thm4";
    case PlanMethod::kChernoffUnion: return "chernoff-union";
    case PlanMethod::kSimulation: return "simulation";
  }
  return "?";
}

PlanMethod parse_plan_method(const std::string& name) {
  if (name == "thm1") return PlanMethod::kThm1;
  if (name == "thm4") return PlanMethod::kThm4;
  if (name == "chernoff-union") return PlanMethod::kChernoffUnion;
  if (name == "simulation") return PlanMethod::kSimulation;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown plan method '" + name +
                  "' (thm1|thm4|chernoff-union|simulation)");
}

PlanResult min_voters_bound(const VoterPopulation& pop, double target,
                            int m_max, PlanMethod method) {
  validate_target(target);
  if (m_max < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "scan ceiling must be at least 1, got " + std::to_string(m_max));
  }
  if (method == PlanMethod::kSimulation) {
    throw Error(ErrorKind::kInvalidArgument,
                "use min_voters_simulated for the simulation method");
  }
  if ((method == PlanMethod::kThm1 || method == PlanMethod::kChernoffUnion) &&
      pop.group_count() != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(plan_method_name(method)) +
                    " needs a single-group population; use thm4");
  }
  PlanResult result;
  result.target = target;
  result.method = method;
  result.scan_ceiling = m_max;

  const ReliabilityReport report = reliability_report(pop);
  if (!report.fully_reliable(pop.class_count())) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "error rate cannot fall below the limiting value %.6g "
                  "(%zu of %d classes reliable)",
                  report.limit, report.reliable_set.size(), pop.class_count());
    result.not_achievable_reason = buf;
    result.reliability = report;
    return result;
  }

  for (int m = 1; m <= m_max; ++m) {
    BoundReport bound;
    switch (method) {
      case PlanMethod::kThm1:
        bound = iid_upper_bound(pop.group(0).matrix, m);
        break;
      case PlanMethod::kChernoffUnion:
        bound = iid_chernoff_union_bound(pop.group(0).matrix, m);
        break;
      default:
        bound = noniid_upper_bound(pop, m);
        break;
    }
    if (bound.clamped <= target) {
      result.m_min = m;
      result.bound_evidence = std::move(bound);
      return result;
    }
  }
  result.not_achievable_reason = "no voter count up to the scan ceiling " +
                                 std::to_string(m_max) +
                                 " certifies the target";
  return result;
}

PlanResult min_voters_simulated(const VoterPopulation& pop, double target,
                                std::int64_t trials, int m_max,
                                std::uint64_t seed, int step,
                                TiePolicy policy, int threads) {
  validate_target(target);
  if (m_max < 1 || step < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "scan ceiling and step must be at least 1");
  }
  if (trials < 1) {
    throw Error(ErrorKind::kInvalidArgument, "trial count must be positive");
  }
  if (target < 10.0 / static_cast<double>(trials)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%lld trials cannot certify a target of %.6g; the Wilson "
                  "upper limit stays above 10/trials = %.6g",
                  static_cast<long long>(trials), target,
                  10.0 / static_cast<double>(trials));
    throw Error(ErrorKind::kTrialsInsufficient, buf);
  }
  PlanResult result;
  result.target = target;
  result.method = PlanMethod::kSimulation;
  result.scan_ceiling = m_max;
  const RandomStream root(seed);
  for (int m = 1; m <= m_max; m += step) {
    const std::uint64_t scan_seed =
        root.derive_key(kPlanScanTag, static_cast<std::uint64_t>(m));
    SimulationEstimate est =
        simulate_error_rate(pop, m, trials, policy, scan_seed, threads);
    if (est.ci_high <= target) {
      result.m_min = m;
      result.simulation_evidence = std::move(est);
      return result;
    }
  }
  result.not_achievable_reason =
      "no scanned voter count up to " + std::to_string(m_max) +
      " certifies the target at " + std::to_string(trials) + " trials";
  return result;
}

}  // namespace mvb
