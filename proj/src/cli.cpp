#include "mvb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mvb/bounds.hpp"
#include "mvb/errors.hpp"
#include "mvb/io.hpp"
#include "mvb/planner.hpp"
#include "mvb/population.hpp"
#include "mvb/rng.hpp"
#include "mvb/simulate.hpp"
#include "mvb/truth_discovery.hpp"

namespace mvb {

namespace {

struct InputOpts {
  std::string matrix_path;
  std::string population_path;
  std::string dawid_skene;
  bool renormalize = false;
  double tolerance = 1e-9;
};

void add_input_options(CLI::App* cmd, InputOpts& opts) {
  auto* m = cmd->add_option("--matrix", opts.matrix_path,
                            "transition matrix file (single voter type)");
  auto* p = cmd->add_option("--population", opts.population_path,
                            "population file (list of groups)");
  auto* d = cmd->add_option("--dawid-skene", opts.dawid_skene,
                            "homogeneous voter model as K,gamma");
  m->excludes(p)->excludes(d);
  p->excludes(d);
  cmd->add_flag("--renormalize", opts.renormalize,
                "rescale rows of published matrices whose sums are off by "
                "rounding (up to 0.02)");
  cmd->add_option("--tolerance", opts.tolerance,
                  "row-sum tolerance when not renormalizing");
}

TransitionMatrix parse_dawid_skene(const std::string& spec) {
  const auto pos = spec.find(',');
  if (pos == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument,
                "--dawid-skene expects K,gamma (e.g. 10,0.3)");
  }
  try {
    const int k = std::stoi(spec.substr(0, pos));
    const double gamma = std::stod(spec.substr(pos + 1));
    return dawid_skene_matrix(k, gamma);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot parse --dawid-skene value '" + spec + "'");
  }
}

VoterPopulation resolve_population(const InputOpts& opts) {
  if (!opts.population_path.empty()) {
    return load_population_file(opts.population_path, opts.renormalize,
                                opts.tolerance);
  }
  if (!opts.matrix_path.empty()) {
    return single_group_population(
        load_matrix_file(opts.matrix_path, opts.renormalize, opts.tolerance));
  }
  if (!opts.dawid_skene.empty()) {
    return single_group_population(parse_dawid_skene(opts.dawid_skene));
  }
  throw Error(ErrorKind::kInvalidArgument,
              "one of --matrix, --population, --dawid-skene is required");
}

TransitionMatrix resolve_matrix(const InputOpts& opts) {
  VoterPopulation pop = resolve_population(opts);
  if (pop.group_count() != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "this subcommand needs a single voter type; the population "
                "has " + std::to_string(pop.group_count()) + " groups");
  }
  return pop.group(0).matrix;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string joined = "mvbound";
  for (const auto& a : args) {
    joined += ' ';
    joined += a;
  }
  return joined;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kInvalidArgument, "cannot write file: " + path);
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

std::vector<int> parse_m_values(const std::string& spec) {
  std::vector<int> values;
  const auto bad = [&](const std::string& why) {
    throw Error(ErrorKind::kInvalidArgument,
                "bad --m value '" + spec + "': " + why);
  };
  try {
    if (spec.find(':') != std::string::npos) {
      std::vector<std::string> parts = split_list(spec);
      if (parts.size() != 1) bad("ranges use start:stop:step");
      std::stringstream ss(spec);
      std::string tok;
      std::vector<long> nums;
      while (std::getline(ss, tok, ':')) nums.push_back(std::stol(tok));
      if (nums.size() != 3) bad("ranges use start:stop:step");
      const long start = nums[0], stop = nums[1], step = nums[2];
      if (step < 1) bad("step must be >= 1");
      for (long m = start; m <= stop; m += step) {
        values.push_back(static_cast<int>(m));
      }
    } else {
      for (const auto& tok : split_list(spec)) {
        values.push_back(static_cast<int>(std::stol(tok)));
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad("not a number");
  }
  if (values.empty()) bad("empty sweep");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) bad("all M must be >= 1");
    if (i > 0 && values[i] <= values[i - 1]) bad("M must strictly increase");
  }
  return values;
}

Eigen::MatrixXd random_dominant_grid(int class_count, std::uint64_t seed) {
  if (class_count < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "class count must be at least 2, got " +
                    std::to_string(class_count));
  }
  RandomStream stream(seed);
  Eigen::MatrixXd grid(class_count, class_count);
  for (int k = 0; k < class_count; ++k) {
    double sum = 0.0;
    for (int l = 0; l < class_count; ++l) {
      // -ln(1-u) draws are Exp(1); normalized they cover the simplex uniformly
      const double e = -std::log1p(-stream.next_double());
      grid(k, l) = e;
      sum += e;
    }
    grid.row(k) /= sum;
    int argmax = 0;
    for (int l = 1; l < class_count; ++l) {
      if (grid(k, l) > grid(k, argmax)) argmax = l;
    }
    std::swap(grid(k, k), grid(k, argmax));
  }
  return grid;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"bounds, simulation, and planning for plurality voting error rates"};
  app.require_subcommand(1);
  const std::string invocation = join_args(args);

  // ---- bound-iid ----
  auto* bound_iid = app.add_subcommand(
      "bound-iid", "error-rate upper bounds for one voter type");
  InputOpts bi_in;
  add_input_options(bound_iid, bi_in);
  std::string bi_m, bi_methods = "thm1";
  std::string bi_out;
  bound_iid->add_option("--m", bi_m, "voter counts (start:stop:step or list)")
      ->required();
  bound_iid->add_option("--methods", bi_methods, "subset of thm1,chernoff-union");
  bound_iid->add_option("--out", bi_out, "output CSV path")->required();

  // ---- bound-noniid ----
  auto* bound_noniid = app.add_subcommand(
      "bound-noniid", "error-rate upper bounds for mixed voter groups");
  InputOpts bn_in;
  add_input_options(bound_noniid, bn_in);
  std::string bn_m, bn_methods = "thm4";
  std::string bn_out;
  bound_noniid->add_option("--m", bn_m, "voter counts")->required();
  bound_noniid->add_option("--methods", bn_methods, "subset of thm4,thm6-slope");
  bound_noniid->add_option("--out", bn_out, "output CSV path")->required();

  // ---- simulate ----
  auto* simulate = app.add_subcommand(
      "simulate", "seeded Monte Carlo estimate of the voting error rate");
  InputOpts sim_in;
  add_input_options(simulate, sim_in);
  std::string sim_m, sim_out, sim_ties = "random";
  std::int64_t sim_trials = 100000;
  std::uint64_t sim_seed = 1;
  int sim_threads = 1;
  bool sim_strict = false;
  simulate->add_option("--m", sim_m, "voter counts")->required();
  simulate->add_option("--trials", sim_trials, "trials per voter count");
  simulate->add_option("--seed", sim_seed, "root seed");
  simulate->add_option("--ties", sim_ties, "tie policy: random|worst|best");
  simulate->add_option("--threads", sim_threads, "worker threads");
  simulate->add_flag("--strict-groups", sim_strict,
                     "fail when a group receives no voters");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  // ---- exact ----
  auto* exact = app.add_subcommand(
      "exact", "exact error rate by composition enumeration");
  InputOpts ex_in;
  add_input_options(exact, ex_in);
  std::string ex_m, ex_out, ex_ties = "random";
  double ex_limit = 1e7;
  exact->add_option("--m", ex_m, "voter counts")->required();
  exact->add_option("--ties", ex_ties, "tie policy: random|worst|best");
  exact->add_option("--state-space-limit", ex_limit,
                    "largest admissible composition space");
  exact->add_option("--out", ex_out, "output CSV path")->required();

  // ---- slope ----
  auto* slope = app.add_subcommand(
      "slope", "asymptotic decay slope of the i.i.d. bound");
  InputOpts sl_in;
  add_input_options(slope, sl_in);
  std::string sl_out;
  slope->add_option("--out", sl_out, "output CSV path")->required();

  // ---- delta ----
  auto* delta = app.add_subcommand(
      "delta", "vote margins and the asymptotic reliability verdict");
  InputOpts dl_in;
  add_input_options(delta, dl_in);
  std::string dl_out;
  delta->add_option("--out", dl_out, "output CSV path")->required();

  // ---- plan ----
  auto* plan = app.add_subcommand(
      "plan", "minimum voters reaching a target error rate");
  InputOpts pl_in;
  add_input_options(plan, pl_in);
  std::string pl_out, pl_method = "auto", pl_ties = "random";
  double pl_target = 0.0;
  int pl_m_max = 500, pl_step = 2, pl_threads = 1;
  std::int64_t pl_trials = 100000;
  std::uint64_t pl_seed = 1;
  plan->add_option("--target", pl_target, "target error rate in (0,1)")
      ->required();
  plan->add_option("--method", pl_method,
                   "thm1|thm4|chernoff-union|simulation (default: by input)");
  plan->add_option("--m-max", pl_m_max, "scan ceiling");
  plan->add_option("--trials", pl_trials, "trials per scan point (simulation)");
  plan->add_option("--seed", pl_seed, "root seed (simulation)");
  plan->add_option("--step", pl_step, "scan step (simulation)");
  plan->add_option("--ties", pl_ties, "tie policy (simulation)");
  plan->add_option("--threads", pl_threads, "worker threads (simulation)");
  plan->add_option("--out", pl_out, "output CSV path")->required();

  // ---- td-compare ----
  auto* td = app.add_subcommand(
      "td-compare", "truth-discovery vs plain voting on shared vote streams");
  InputOpts td_in;
  add_input_options(td, td_in);
  std::string td_out, td_ties = "random";
  int td_m = 0, td_rounds = 50, td_threads = 1;
  std::int64_t td_trials = 10000;
  std::uint64_t td_seed = 1;
  td->add_option("--m", td_m, "voter count")->required();
  td->add_option("--rounds", td_rounds, "fusion rounds per trial");
  td->add_option("--trials", td_trials, "independent histories");
  td->add_option("--seed", td_seed, "root seed");
  td->add_option("--ties", td_ties, "tie policy: random|worst|best");
  td->add_option("--threads", td_threads, "worker threads");
  td->add_option("--out", td_out, "output CSV path")->required();

  // ---- gen-matrix ----
  auto* gen = app.add_subcommand("gen-matrix", "write a voter model to a file");
  std::string gen_kind, gen_out;
  int gen_k = 10;
  double gen_gamma = 0.5;
  std::uint64_t gen_seed = 1;
  gen->add_option("--kind", gen_kind, "dawid-skene|random-dominant")
      ->required();
  gen->add_option("--classes", gen_k, "class count K");
  gen->add_option("--gamma", gen_gamma, "accuracy parameter (dawid-skene)");
  gen->add_option("--seed", gen_seed, "seed (random-dominant)");
  gen->add_option("--out", gen_out, "output matrix file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(bound_iid)) {
      const TransitionMatrix matrix = resolve_matrix(bi_in);
      const auto ms = parse_m_values(bi_m);
      const auto methods = split_list(bi_methods);
      auto out = open_output(bi_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      csv.header();
      for (const int m : ms) {
        for (const auto& method : methods) {
          BoundReport report;
          if (method == "thm1") {
            report = iid_upper_bound(matrix, m);
          } else if (method == "chernoff-union") {
            report = iid_chernoff_union_bound(matrix, m);
          } else {
            throw Error(ErrorKind::kInvalidArgument,
                        "bound-iid method must be thm1 or chernoff-union, got '" +
                            method + "'");
          }
          CsvRow row;
          row.method = bound_method_name(report.method);
          row.m = m;
          row.raw_bound = report.raw;
          row.bound = report.clamped;
          csv.row(row);
        }
      }
    } else if (app.got_subcommand(bound_noniid)) {
      const VoterPopulation pop = resolve_population(bn_in);
      const auto ms = parse_m_values(bn_m);
      const auto methods = split_list(bn_methods);
      auto out = open_output(bn_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      csv.header();
      bool eps_comment_done = false;
      for (const int m : ms) {
        for (const auto& method : methods) {
          BoundReport report;
          if (method == "thm4") {
            report = noniid_upper_bound(pop, m);
          } else if (method == "thm6-slope") {
            report = noniid_slope_bound(pop, m);
            if (!eps_comment_done) {
              const auto& arg = *report.epsilon_argmin;
              csv.comment("epsilon_star=" + format_number(*report.epsilon_star) +
                          " argmin k=" + std::to_string(arg[0] + 1) +
                          " l=" + std::to_string(arg[1] + 1) +
                          " t=" + std::to_string(arg[2] + 1) + " (1-based)");
              eps_comment_done = true;
            }
          } else {
            throw Error(ErrorKind::kInvalidArgument,
                        "bound-noniid method must be thm4 or thm6-slope, got '" +
                            method + "'");
          }
          CsvRow row;
          row.method = bound_method_name(report.method);
          row.m = m;
          row.raw_bound = report.raw;
          row.bound = report.clamped;
          csv.row(row);
        }
      }
    } else if (app.got_subcommand(simulate)) {
      const VoterPopulation pop = resolve_population(sim_in);
      const auto ms = parse_m_values(sim_m);
      const TiePolicy policy = parse_tie_policy(sim_ties);
      auto out = open_output(sim_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      csv.comment("seed: " + std::to_string(sim_seed));
      csv.header();
      for (const int m : ms) {
        const SimulationEstimate est = simulate_error_rate(
            pop, m, sim_trials, policy, sim_seed, sim_threads, sim_strict);
        CsvRow row;
        row.method = "mc";
        row.m = m;
        row.mc_estimate = est.p_hat;
        row.ci_low = est.ci_low;
        row.ci_high = est.ci_high;
        row.trials = est.trials;
        row.seed = est.seed;
        csv.row(row);
      }
    } else if (app.got_subcommand(exact)) {
      const VoterPopulation pop = resolve_population(ex_in);
      const auto ms = parse_m_values(ex_m);
      const TiePolicy policy = parse_tie_policy(ex_ties);
      auto out = open_output(ex_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      csv.header();
      for (const int m : ms) {
        CsvRow row;
        row.method = "exact";
        row.m = m;
        row.mc_estimate = exact_error_rate(pop, m, policy, ex_limit);
        csv.row(row);
      }
    } else if (app.got_subcommand(slope)) {
      const TransitionMatrix matrix = resolve_matrix(sl_in);
      const SlopeResult result = iid_slope(matrix);
      auto out = open_output(sl_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      csv.comment("k_star=" + std::to_string(result.k_star + 1) +
                  " l_star=" + std::to_string(result.l_star + 1) + " (1-based)");
      csv.comment(result.note);
      csv.header();
      CsvRow row;
      row.method = "thm3-slope";
      row.raw_bound = result.slope;
      csv.row(row);
    } else if (app.got_subcommand(delta)) {
      const VoterPopulation pop = resolve_population(dl_in);
      const ReliabilityReport report = reliability_report(pop);
      auto out = open_output(dl_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      const int k_count = pop.class_count();
      double min_value = std::numeric_limits<double>::infinity();
      int min_k = 0, min_l = 1;
      for (int k = 0; k < k_count; ++k) {
        for (int l = 0; l < k_count; ++l) {
          if (l == k) continue;
          csv.comment("delta k=" + std::to_string(k + 1) + " l=" +
                      std::to_string(l + 1) + " value=" +
                      format_number(report.delta_table(k, l)));
          if (report.delta_table(k, l) < min_value) {
            min_value = report.delta_table(k, l);
            min_k = k;
            min_l = l;
          }
        }
      }
      csv.comment("min_delta k=" + std::to_string(min_k + 1) + " l=" +
                  std::to_string(min_l + 1) + " value=" +
                  format_number(min_value));
      csv.comment("reliable_classes=" +
                  std::to_string(report.reliable_set.size()) + "/" +
                  std::to_string(k_count) + " marginal_classes=" +
                  std::to_string(report.marginal_set.size()) +
                  " limit=" + format_number(report.limit));
      csv.header();
      CsvRow row;
      row.method = "delta";
      row.raw_bound = min_value;
      csv.row(row);
    } else if (app.got_subcommand(plan)) {
      const VoterPopulation pop = resolve_population(pl_in);
      if (pl_method == "auto") {
        pl_method = pop.group_count() == 1 ? "thm1" : "thm4";
      }
      const PlanMethod method = parse_plan_method(pl_method);
      PlanResult result;
      if (method == PlanMethod::kSimulation) {
        result = min_voters_simulated(pop, pl_target, pl_trials, pl_m_max,
                                      pl_seed, pl_step,
                                      parse_tie_policy(pl_ties), pl_threads);
      } else {
        result = min_voters_bound(pop, pl_target, pl_m_max, method);
      }
      auto out = open_output(pl_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      if (method == PlanMethod::kSimulation) {
        csv.comment("seed: " + std::to_string(pl_seed));
      }
      csv.comment("target: " + format_number(pl_target));
      csv.header();
      if (result.m_min) {
        CsvRow row;
        row.method = plan_method_name(result.method);
        row.m = *result.m_min;
        if (result.bound_evidence) {
          row.raw_bound = result.bound_evidence->raw;
          row.bound = result.bound_evidence->clamped;
        }
        if (result.simulation_evidence) {
          row.mc_estimate = result.simulation_evidence->p_hat;
          row.ci_low = result.simulation_evidence->ci_low;
          row.ci_high = result.simulation_evidence->ci_high;
          row.trials = result.simulation_evidence->trials;
          row.seed = result.simulation_evidence->seed;
        }
        csv.row(row);
        std::cout << "m_min=" << *result.m_min << "\n";
      } else {
        csv.comment("not_achievable: " + result.not_achievable_reason);
        std::cout << "not achievable: " << result.not_achievable_reason << "\n";
      }
    } else if (app.got_subcommand(td)) {
      const VoterPopulation pop = resolve_population(td_in);
      const TiePolicy policy = parse_tie_policy(td_ties);
      const TdTrajectory trajectory =
          run_td_experiment(pop, td_m, td_rounds, td_trials, td_seed, policy,
                            1.0, 0.5, td_threads);
      auto out = open_output(td_out);
      CsvWriter csv(out);
      csv.comment("invocation: " + invocation);
      csv.comment("seed: " + std::to_string(td_seed));
      csv.comment("voters: " + std::to_string(td_m) +
                  "; the M column carries the round index");
      csv.header();
      for (std::size_t r = 0; r < trajectory.rounds.size(); ++r) {
        const auto& round = trajectory.rounds[r];
        for (const auto* arm : {&round.td, &round.mvf}) {
          CsvRow row;
          row.method = arm == &round.td ? "td" : "mvf";
          row.m = static_cast<std::int64_t>(r + 1);
          row.mc_estimate = arm->p_hat;
          row.ci_low = arm->ci_low;
          row.ci_high = arm->ci_high;
          row.trials = round.trials;
          row.seed = td_seed;
          csv.row(row);
        }
      }
    } else if (app.got_subcommand(gen)) {
      Eigen::MatrixXd grid;
      if (gen_kind == "dawid-skene") {
        grid = dawid_skene_matrix(gen_k, gen_gamma).entries();
      } else if (gen_kind == "random-dominant") {
        grid = random_dominant_grid(gen_k, gen_seed);
      } else {
        throw Error(ErrorKind::kInvalidArgument,
                    "--kind must be dawid-skene or random-dominant, got '" +
                        gen_kind + "'");
      }
      save_matrix_file(gen_out, grid);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_runtime_failure() ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mvb
