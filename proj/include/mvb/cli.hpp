#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mvb {

// Command-line front end. Takes the arguments after the program name in
// natural order; returns the process exit status (0 success, 2 usage/input
// error, 1 runtime failure).
int run_cli(const std::vector<std::string>& args);

// Parses an M sweep: "start:stop:step", a comma list, or a single value.
// The result must be nonempty, strictly increasing, and >= 1 throughout.
std::vector<int> parse_m_values(const std::string& spec);

// Row-stochastic grid with a strictly dominant diagonal by construction:
// each row is drawn from the uniform simplex and its largest entry is
// swapped onto the diagonal. Deterministic under the seed.
Eigen::MatrixXd random_dominant_grid(int class_count, std::uint64_t seed);

}  // namespace mvb
