#pragma once

// Shared test fixtures: the published worst-classifier matrix and the four
// group matrices. Entries are reproduced exactly as printed (rows carry
// two-decimal rounding, so sums range from 0.98 to 1.02).

#include <Eigen/Dense>

#include "mvb/population.hpp"
#include "mvb/transition_matrix.hpp"

namespace fixtures {

inline Eigen::MatrixXd worst_classifier_grid() {
  Eigen::MatrixXd g(10, 10);
  g << 0.33, 0.03, 0.06, 0.30, 0.18, 0.01, 0.00, 0.00, 0.04, 0.06,
       0.04, 0.87, 0.00, 0.03, 0.03, 0.00, 0.00, 0.00, 0.00, 0.02,
       0.07, 0.00, 0.56, 0.18, 0.01, 0.16, 0.00, 0.00, 0.01, 0.00,
       0.07, 0.00, 0.10, 0.67, 0.04, 0.03, 0.00, 0.00, 0.05, 0.04,
       0.16, 0.03, 0.07, 0.24, 0.36, 0.01, 0.00, 0.00, 0.08, 0.05,
       0.02, 0.00, 0.11, 0.03, 0.02, 0.82, 0.00, 0.00, 0.00, 0.00,
       0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.99, 0.01, 0.00, 0.00,
       0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.06, 0.94, 0.00, 0.00,
       0.03, 0.00, 0.01, 0.05, 0.03, 0.00, 0.00, 0.00, 0.81, 0.05,
       0.07, 0.00, 0.04, 0.11, 0.02, 0.01, 0.00, 0.00, 0.13, 0.60;
  return g;
}

inline std::vector<Eigen::MatrixXd> group_grids() {
  std::vector<Eigen::MatrixXd> grids(4, Eigen::MatrixXd(10, 10));
  grids[0] << 0.44, 0.04, 0.04, 0.16, 0.23, 0.01, 0.00, 0.00, 0.03, 0.05,
              0.05, 0.80, 0.00, 0.02, 0.09, 0.00, 0.00, 0.00, 0.00, 0.04,
              0.10, 0.00, 0.41, 0.07, 0.04, 0.22, 0.10, 0.00, 0.04, 0.01,
              0.15, 0.01, 0.07, 0.41, 0.13, 0.03, 0.02, 0.00, 0.15, 0.05,
              0.22, 0.06, 0.06, 0.13, 0.46, 0.01, 0.00, 0.00, 0.03, 0.03,
              0.02, 0.00, 0.15, 0.01, 0.00, 0.48, 0.31, 0.00, 0.01, 0.01,
              0.01, 0.00, 0.08, 0.01, 0.00, 0.27, 0.59, 0.00, 0.02, 0.01,
              0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.99, 0.00, 0.00,
              0.05, 0.00, 0.06, 0.16, 0.04, 0.03, 0.03, 0.00, 0.50, 0.13,
              0.06, 0.02, 0.01, 0.06, 0.05, 0.00, 0.01, 0.00, 0.11, 0.67;
  grids[1] << 0.24, 0.08, 0.08, 0.15, 0.19, 0.01, 0.00, 0.00, 0.10, 0.15,
              0.10, 0.61, 0.01, 0.06, 0.10, 0.00, 0.00, 0.00, 0.05, 0.06,
              0.14, 0.00, 0.38, 0.15, 0.08, 0.17, 0.00, 0.00, 0.03, 0.06,
              0.13, 0.01, 0.15, 0.30, 0.12, 0.05, 0.00, 0.00, 0.07, 0.17,
              0.17, 0.06, 0.08, 0.14, 0.26, 0.01, 0.00, 0.00, 0.13, 0.15,
              0.02, 0.00, 0.19, 0.02, 0.01, 0.75, 0.00, 0.00, 0.01, 0.01,
              0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.85, 0.14, 0.00, 0.00,
              0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.14, 0.86, 0.00, 0.00,
              0.07, 0.02, 0.04, 0.08, 0.10, 0.01, 0.01, 0.00, 0.51, 0.15,
              0.13, 0.04, 0.06, 0.17, 0.15, 0.01, 0.00, 0.00, 0.12, 0.32;
  grids[2] << 0.46, 0.04, 0.03, 0.15, 0.23, 0.01, 0.00, 0.00, 0.03, 0.06,
              0.04, 0.81, 0.00, 0.01, 0.08, 0.00, 0.00, 0.01, 0.00, 0.04,
              0.08, 0.00, 0.44, 0.06, 0.04, 0.24, 0.10, 0.00, 0.04, 0.01,
              0.14, 0.01, 0.07, 0.42, 0.13, 0.02, 0.02, 0.00, 0.16, 0.04,
              0.21, 0.05, 0.05, 0.12, 0.49, 0.01, 0.00, 0.00, 0.03, 0.03,
              0.01, 0.00, 0.13, 0.01, 0.00, 0.51, 0.31, 0.00, 0.01, 0.00,
              0.01, 0.00, 0.08, 0.01, 0.00, 0.27, 0.59, 0.00, 0.02, 0.01,
              0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.99, 0.00, 0.00,
              0.04, 0.00, 0.06, 0.14, 0.03, 0.03, 0.04, 0.00, 0.56, 0.11,
              0.06, 0.02, 0.01, 0.06, 0.05, 0.00, 0.01, 0.00, 0.12, 0.68;
  grids[3] << 0.24, 0.07, 0.08, 0.14, 0.19, 0.01, 0.00, 0.00, 0.10, 0.16,
              0.09, 0.64, 0.01, 0.04, 0.10, 0.00, 0.00, 0.00, 0.05, 0.06,
              0.12, 0.00, 0.41, 0.13, 0.07, 0.17, 0.00, 0.00, 0.03, 0.06,
              0.12, 0.01, 0.15, 0.30, 0.11, 0.06, 0.00, 0.00, 0.06, 0.17,
              0.16, 0.06, 0.07, 0.14, 0.26, 0.01, 0.00, 0.00, 0.13, 0.16,
              0.01, 0.00, 0.14, 0.01, 0.00, 0.82, 0.00, 0.00, 0.00, 0.01,
              0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.88, 0.12, 0.00, 0.00,
              0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.19, 0.81, 0.00, 0.00,
              0.06, 0.02, 0.04, 0.08, 0.10, 0.01, 0.01, 0.01, 0.53, 0.15,
              0.12, 0.04, 0.06, 0.17, 0.14, 0.01, 0.00, 0.00, 0.12, 0.35;
  return grids;
}

// Matrices taken verbatim (row sums off by up to 0.02); the margin and
// epsilon fixtures depend on the printed values.
inline mvb::TransitionMatrix worst_classifier_verbatim() {
  return mvb::build_transition_matrix(worst_classifier_grid(), false, 0.02);
}

inline mvb::TransitionMatrix worst_classifier_renormalized() {
  return mvb::build_transition_matrix(worst_classifier_grid(), true);
}

inline mvb::VoterPopulation four_group_population(bool renormalize = false) {
  std::vector<std::pair<double, mvb::TransitionMatrix>> specs;
  for (const auto& grid : group_grids()) {
    specs.emplace_back(0.25,
                       mvb::build_transition_matrix(grid, renormalize, 0.02));
  }
  return mvb::build_population(std::move(specs));
}

// K=4 with rows 1 and 3 violating diagonal dominance (limit error 0.5).
inline Eigen::MatrixXd half_violating_grid() {
  Eigen::MatrixXd g(4, 4);
  g << 0.20, 0.50, 0.20, 0.10,
       0.10, 0.60, 0.20, 0.10,
       0.10, 0.20, 0.30, 0.40,
       0.10, 0.10, 0.20, 0.60;
  return g;
}

// Every diagonal strictly below some off-diagonal entry (limit error 1).
inline Eigen::MatrixXd fully_violating_grid() {
  Eigen::MatrixXd g(4, 4);
  g << 0.10, 0.50, 0.20, 0.20,
       0.50, 0.10, 0.20, 0.20,
       0.20, 0.20, 0.10, 0.50,
       0.20, 0.20, 0.50, 0.10;
  return g;
}

// K=3 with class 1 confusing towards class 2 (negative margin on (2|1)).
inline Eigen::MatrixXd adversarial_grid() {
  Eigen::MatrixXd g(3, 3);
  g << 0.30, 0.50, 0.20,
       0.20, 0.60, 0.20,
       0.20, 0.20, 0.60;
  return g;
}

}  // namespace fixtures
