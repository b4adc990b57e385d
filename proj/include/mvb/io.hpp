#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "mvb/population.hpp"
#include "mvb/transition_matrix.hpp"

namespace mvb {

// Matrix file: K lines of K comma-separated probabilities, row = true class;
// blank lines and lines starting with '#' are ignored.
Eigen::MatrixXd load_matrix_grid(const std::string& path);
TransitionMatrix load_matrix_file(const std::string& path,
                                  bool renormalize = false,
                                  double tolerance = 1e-9);
void save_matrix_file(const std::string& path, const Eigen::MatrixXd& entries);

// Population file: one group per entry, either
//   <proportion>, <matrix-file-path>
// or
//   <proportion>, inline
// followed immediately by the K matrix rows. Paths resolve relative to the
// population file. '#' comments and blank lines are ignored.
VoterPopulation load_population_file(const std::string& path,
                                     bool renormalize = false,
                                     double tolerance = 1e-9);

// Decimal formatting used in every emitted file: 12 significant digits.
std::string format_number(double value);

// One row of the flat CSV schema shared by all subcommands:
//   method,M,raw_bound,bound,mc_estimate,ci_low,ci_high,trials,seed
// Unused fields stay empty.
struct CsvRow {
  std::string method;
  std::optional<std::int64_t> m;
  std::optional<double> raw_bound;
  std::optional<double> bound;
  std::optional<double> mc_estimate;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
};

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void header();
  void row(const CsvRow& row);

 private:
  std::ostream& out_;
};

}  // namespace mvb
