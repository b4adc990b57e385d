#include "mvb/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "mvb/errors.hpp"

namespace mvb {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool is_content_line(const std::string& line) {
  const std::string t = trim(line);
  return !t.empty() && t[0] != '#';
}

std::vector<std::string> content_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kInvalidArgument, "cannot open file: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (is_content_line(line)) lines.push_back(trim(line));
  }
  return lines;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

double parse_double(const std::string& token, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot parse number '" + token + "' in " + context);
  }
}

Eigen::MatrixXd rows_to_grid(const std::vector<std::vector<double>>& rows,
                             const std::string& context) {
  if (rows.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no matrix rows in " + context);
  }
  const std::size_t k = rows.front().size();
  Eigen::MatrixXd grid(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k) {
      throw Error(ErrorKind::kNonSquare,
                  "matrix row " + std::to_string(i + 1) + " in " + context +
                      " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(k));
    }
    for (std::size_t j = 0; j < k; ++j) {
      grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return grid;
}

std::vector<double> parse_row(const std::string& line,
                              const std::string& context) {
  std::vector<double> row;
  for (const auto& field : split_commas(line)) {
    row.push_back(parse_double(field, context));
  }
  return row;
}

}  // namespace

Eigen::MatrixXd load_matrix_grid(const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& line : content_lines(path)) {
    rows.push_back(parse_row(line, path));
  }
  return rows_to_grid(rows, path);
}

TransitionMatrix load_matrix_file(const std::string& path, bool renormalize,
                                  double tolerance) {
  return build_transition_matrix(load_matrix_grid(path), renormalize,
                                 tolerance);
}

void save_matrix_file(const std::string& path, const Eigen::MatrixXd& entries) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kInvalidArgument, "cannot write file: " + path);
  }
  char buf[40];
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", entries(i, j));
      out << buf;
      if (j + 1 < entries.cols()) out << ',';
    }
    out << '\n';
  }
}

VoterPopulation load_population_file(const std::string& path, bool renormalize,
                                     double tolerance) {
  const auto lines = content_lines(path);
  const auto base_dir = std::filesystem::path(path).parent_path();
  std::vector<std::pair<double, TransitionMatrix>> specs;
  std::size_t i = 0;
  while (i < lines.size()) {
    const auto fields = split_commas(lines[i]);
    if (fields.size() != 2) {
      throw Error(ErrorKind::kInvalidArgument,
                  "population line '" + lines[i] + "' in " + path +
                      " must be '<proportion>,<matrix-path>' or "
                      "'<proportion>,inline'");
    }
    const double proportion = parse_double(fields[0], path);
    ++i;
    if (fields[1] == "inline") {
      if (i >= lines.size()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "inline group in " + path + " has no matrix rows");
      }
      std::vector<std::vector<double>> rows;
      const std::size_t k = split_commas(lines[i]).size();
      for (std::size_t r = 0; r < k; ++r, ++i) {
        if (i >= lines.size()) {
          throw Error(ErrorKind::kInvalidArgument,
                      "inline matrix in " + path + " is truncated (needs " +
                          std::to_string(k) + " rows)");
        }
        rows.push_back(parse_row(lines[i], path));
      }
      specs.emplace_back(proportion,
                         build_transition_matrix(rows_to_grid(rows, path),
                                                 renormalize, tolerance));
    } else {
      const auto matrix_path =
          std::filesystem::path(fields[1]).is_absolute()
              ? std::filesystem::path(fields[1])
              : base_dir / fields[1];
      specs.emplace_back(proportion, load_matrix_file(matrix_path.string(),
                                                      renormalize, tolerance));
    }
  }
  return build_population(std::move(specs));
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::header() {
  out_ << "method,M,raw_bound,bound,mc_estimate,ci_low,ci_high,trials,seed\n";
}

void CsvWriter::row(const CsvRow& row) {
  out_ << row.method << ',';
  if (row.m) out_ << *row.m;
  out_ << ',';
  if (row.raw_bound) out_ << format_number(*row.raw_bound);
  out_ << ',';
  if (row.bound) out_ << format_number(*row.bound);
  out_ << ',';
  if (row.mc_estimate) out_ << format_number(*row.mc_estimate);
  out_ << ',';
  if (row.ci_low) out_ << format_number(*row.ci_low);
  out_ << ',';
  if (row.ci_high) out_ << format_number(*row.ci_high);
  out_ << ',';
  if (row.trials) out_ << *row.trials;
  out_ << ',';
  if (row.seed) out_ << *row.seed;
  out_ << '\n';
}

}  // namespace mvb
