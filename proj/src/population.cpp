#include "mvb/population.hpp"

#include <cmath>
#include <string>

#include "mvb/errors.hpp"

namespace mvb {

VoterPopulation build_population(
    std::vector<std::pair<double, TransitionMatrix>> specs) {
  if (specs.empty()) {
    throw Error(ErrorKind::kEmptyPopulation, "population needs at least one group");
  }
  double sum = 0.0;
  const int k = specs.front().second.class_count();
  for (const auto& [proportion, matrix] : specs) {
    if (!(proportion > 0.0) || !std::isfinite(proportion)) {
      throw Error(ErrorKind::kProportionSumInvalid,
                  "group proportions must be strictly positive, got " +
                      std::to_string(proportion));
    }
    if (matrix.class_count() != k) {
      throw Error(ErrorKind::kMixedClassCounts,
                  "all groups must share one class count; saw " +
                      std::to_string(k) + " and " +
                      std::to_string(matrix.class_count()));
    }
    sum += proportion;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::kProportionSumInvalid,
                "group proportions must sum to 1, got " + std::to_string(sum));
  }
  std::vector<VoterGroup> groups;
  groups.reserve(specs.size());
  for (auto& [proportion, matrix] : specs) {
    groups.push_back(VoterGroup{proportion, std::move(matrix)});
  }
  return VoterPopulation(std::move(groups));
}

VoterPopulation single_group_population(TransitionMatrix matrix) {
  std::vector<std::pair<double, TransitionMatrix>> specs;
  specs.emplace_back(1.0, std::move(matrix));
  return build_population(std::move(specs));
}

double delta_margin(const VoterPopulation& pop, int voted_class,
                    int true_class) {
  const int k = pop.class_count();
  if (voted_class < 0 || voted_class >= k || true_class < 0 ||
      true_class >= k) {
    throw Error(ErrorKind::kClassOutOfRange,
                "class index out of range for K=" + std::to_string(k));
  }
  if (voted_class == true_class) return 0.0;
  double margin = 0.0;
  for (const auto& g : pop.groups()) {
    margin += g.proportion * (g.matrix.prob(true_class, true_class) -
                              g.matrix.prob(true_class, voted_class));
  }
  return margin;
}

Eigen::MatrixXd delta_table(const VoterPopulation& pop) {
  const int k = pop.class_count();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(k, k);
  for (int kc = 0; kc < k; ++kc) {
    for (int l = 0; l < k; ++l) {
      if (l != kc) table(kc, l) = delta_margin(pop, l, kc);
    }
  }
  return table;
}

ReliabilityReport reliability_report(const VoterPopulation& pop) {
  ReliabilityReport report;
  report.delta_table = delta_table(pop);
  const int k = pop.class_count();
  for (int kc = 0; kc < k; ++kc) {
    double min_margin = std::numeric_limits<double>::infinity();
    for (int l = 0; l < k; ++l) {
      if (l != kc) min_margin = std::min(min_margin, report.delta_table(kc, l));
    }
    if (min_margin > 0.0) {
      report.reliable_set.push_back(kc);
    } else if (min_margin == 0.0) {
      report.marginal_set.push_back(kc);
    }
  }
  report.limit = 1.0 - static_cast<double>(report.reliable_set.size()) / k;
  return report;
}

}  // namespace mvb
