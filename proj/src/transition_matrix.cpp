#include "mvb/transition_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "mvb/errors.hpp"

namespace mvb {

namespace {

std::string describe_row_sum(int row, double sum) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "row %d sums to %.12g", row + 1, sum);
  return buf;
}

}  // namespace

TransitionMatrix build_transition_matrix(const Eigen::MatrixXd& raw,
                                         bool renormalize, double tolerance) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorKind::kNonSquare,
                "transition matrix must be square, got " +
                    std::to_string(raw.rows()) + "x" +
                    std::to_string(raw.cols()));
  }
  const int k = static_cast<int>(raw.rows());
  if (k < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "transition matrix needs at least 2 classes, got " +
                    std::to_string(k));
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (!(raw(i, j) >= 0.0) || !std::isfinite(raw(i, j))) {
        throw Error(ErrorKind::kNegativeEntry,
                    "entry (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ") is negative or non-finite");
      }
    }
  }
  const double allowed = renormalize ? 0.02 : tolerance;
  int worst_row = 0;
  double worst_dev = 0.0;
  for (int i = 0; i < k; ++i) {
    const double dev = std::abs(raw.row(i).sum() - 1.0);
    if (dev > worst_dev) {
      worst_dev = dev;
      worst_row = i;
    }
  }
  // small slack so grids whose sums land exactly on the tolerance (0.98,
  // 1.02) are not rejected over representation noise
  if (worst_dev > allowed + 1e-12) {
    throw Error(ErrorKind::kRowSumOutOfTolerance,
                "row sum out of tolerance: " +
                    describe_row_sum(worst_row, raw.row(worst_row).sum()));
  }
  Eigen::MatrixXd entries = raw;
  if (renormalize) {
    for (int i = 0; i < k; ++i) {
      entries.row(i) /= entries.row(i).sum();
    }
  }
  return TransitionMatrix(std::move(entries));
}

TransitionMatrix dawid_skene_matrix(int class_count, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::kGammaOutOfRange,
                "gamma must lie in [0,1], got " + std::to_string(gamma));
  }
  if (class_count < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "class count must be at least 2, got " +
                    std::to_string(class_count));
  }
  const double off = (1.0 - gamma) / class_count;
  Eigen::MatrixXd entries =
      Eigen::MatrixXd::Constant(class_count, class_count, off);
  entries.diagonal().array() += gamma;
  return build_transition_matrix(entries, false, 1e-9);
}

}  // namespace mvb
