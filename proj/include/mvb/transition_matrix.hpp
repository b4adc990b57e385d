#pragma once

#include <Eigen/Dense>

namespace mvb {

// Row-stochastic voter confusion matrix: entry (k, l) is the probability of
// voting class l when the true class is k. Rows index the true class, so
// entries(k, l) carries the conditional p_{l|k}. Immutable once built.
class TransitionMatrix {
 public:
  int class_count() const { return static_cast<int>(entries_.rows()); }
  double prob(int true_class, int voted_class) const {
    return entries_(true_class, voted_class);
  }
  double diagonal(int k) const { return entries_(k, k); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  friend TransitionMatrix build_transition_matrix(const Eigen::MatrixXd& raw,
                                                  bool renormalize,
                                                  double tolerance);

 private:
  explicit TransitionMatrix(Eigen::MatrixXd entries)
      : entries_(std::move(entries)) {}
  Eigen::MatrixXd entries_;
};

// Validates and builds a transition matrix from a raw grid.
//
// With renormalize off, every row sum must lie within `tolerance` of 1 and
// rows are taken verbatim; with renormalize on, row sums within 0.02 of 1
// are accepted and each row is divided by its own sum (published matrices
// rounded to two decimals need this). Throws NonSquare, NegativeEntry, or
// RowSumOutOfTolerance (naming the worst row and its sum).
TransitionMatrix build_transition_matrix(const Eigen::MatrixXd& raw,
                                         bool renormalize = false,
                                         double tolerance = 1e-9);

// Homogeneous one-parameter voter model: diagonal gamma + (1-gamma)/K,
// off-diagonal (1-gamma)/K.
TransitionMatrix dawid_skene_matrix(int class_count, double gamma);

}  // namespace mvb
