#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mvb/transition_matrix.hpp"

namespace mvb {

// One homogeneous voter group: its share of the population and the
// transition matrix every voter in the group follows.
struct VoterGroup {
  double proportion;
  TransitionMatrix matrix;
};

// An ordered partition of the voter population into groups with identical
// transition matrices. A single group with proportion 1 is the i.i.d. case.
class VoterPopulation {
 public:
  int group_count() const { return static_cast<int>(groups_.size()); }
  int class_count() const { return groups_.front().matrix.class_count(); }
  const VoterGroup& group(int t) const { return groups_[t]; }
  const std::vector<VoterGroup>& groups() const { return groups_; }

  friend VoterPopulation build_population(
      std::vector<std::pair<double, TransitionMatrix>> specs);

 private:
  explicit VoterPopulation(std::vector<VoterGroup> groups)
      : groups_(std::move(groups)) {}
  std::vector<VoterGroup> groups_;
};

// Validates proportions (positive, summing to 1 within 1e-9) and matching
// class counts. Throws EmptyPopulation, ProportionSumInvalid, or
// MixedClassCounts.
VoterPopulation build_population(
    std::vector<std::pair<double, TransitionMatrix>> specs);

// Convenience: wraps a single matrix as the i.i.d. population.
VoterPopulation single_group_population(TransitionMatrix matrix);

// Population-averaged vote margin for the pair (voted=l, true=k):
//   sum_t r_t (q_{k|k}^(t) - q_{l|k}^(t)),
// zero on the diagonal by convention. Throws ClassOutOfRange.
double delta_margin(const VoterPopulation& pop, int voted_class,
                    int true_class);

// Full K x K grid of delta margins (diagonal zero), row = true class.
Eigen::MatrixXd delta_table(const VoterPopulation& pop);

// Asymptotic reliability verdict. A class is reliable when every off-diagonal
// margin in its row is strictly positive; it is marginal when its smallest
// margin is exactly zero (neither set claims classes with a negative margin).
// The limiting error rate of the voting pipeline is 1 - |reliable|/K.
struct ReliabilityReport {
  Eigen::MatrixXd delta_table;
  std::vector<int> reliable_set;
  std::vector<int> marginal_set;
  double limit = 0.0;

  bool fully_reliable(int class_count) const {
    return static_cast<int>(reliable_set.size()) == class_count;
  }
};

ReliabilityReport reliability_report(const VoterPopulation& pop);

}  // namespace mvb
