// Command-line front end for the robust-contracts toolkit.
//
// Exit codes: 0 success (warnings allowed), 1 validation or usage error,
// 2 internal error (e.g. every robust subproblem infeasible).
#include "rcd/baseline.hpp"
#include "rcd/generators.hpp"
#include "rcd/io.hpp"
#include "rcd/learning.hpp"
#include "rcd/oracle.hpp"
#include "rcd/responses.hpp"
#include "rcd/robust.hpp"
#include "rcd/typed.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace rcd;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load_instance(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  return parse_instance(in);
}

TypedInstance load_typed(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream probe(text);
  std::istringstream in(text);
  if (is_typed_file(probe)) return parse_typed_instance(in);
  return TypedInstance::single(parse_instance(in));  // single-type lift
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw CLI::ValidationError("--delta", "must lie strictly in (0, 1)");
}

std::string action_name(const Instance& inst, Index a) {
  if (a >= 0 && a < static_cast<Index>(inst.action_labels.size()))
    return inst.action_labels[a];
  return "action " + std::to_string(a);
}

int print_report(const ValidationReport& rep) {
  for (const auto& e : rep.errors) std::cout << "error: " << e << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  if (rep.ok()) {
    std::cout << "ok" << (rep.warnings.empty() ? "" : " (with warnings)") << "\n";
    return 0;
  }
  return 1;
}

int cmd_validate(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream probe(text);
  std::istringstream in(text);
  if (is_typed_file(probe)) return print_report(validate_typed(parse_typed_instance(in)));
  return print_report(validate_instance(parse_instance(in)));
}

int cmd_solve(const std::string& path, double delta, int threads,
              const std::string& emit_path) {
  require_delta(delta);
  const Instance inst = load_instance(path);
  const ValidationReport rep = validate_instance(inst);
  if (!rep.ok()) return print_report(rep);

  const RobustSolution sol = solve_robust(inst, delta, {.threads = threads});
  std::cout << "psi " << format_double(sol.psi) << "\n";
  std::cout << "contract";
  for (Index w = 0; w < sol.contract.size(); ++w)
    std::cout << " " << format_double(sol.contract[w]);
  std::cout << "\n";
  std::cout << "best_response " << action_name(inst, sol.a_star) << "\n";
  std::cout << "worst_delta_response " << action_name(inst, sol.a_delta) << "\n";
  std::cout << "welfare_slot " << sol.j << "\n";
  std::cout << "lp_value " << format_double(sol.lp_value) << "\n";
  std::cout << "subproblems solved " << sol.subproblems_solved << " infeasible "
            << sol.subproblems_infeasible << "\n";
  if (!emit_path.empty()) {
    std::ofstream out(emit_path);
    if (!out) throw std::runtime_error("cannot write '" + emit_path + "'");
    write_solution_json(out, sol, delta);
  }
  return 0;
}

struct DeltaGrid {
  double start = 0.0, stop = 0.0, step = 0.0;
};

DeltaGrid parse_delta_grid(const std::string& spec) {
  DeltaGrid grid;
  char colon1 = 0, colon2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> grid.start >> colon1 >> grid.stop >> colon2 >> grid.step) || colon1 != ':' ||
      colon2 != ':' || !(ss >> std::ws).eof())
    throw CLI::ValidationError("--delta-grid", "expected start:stop:step");
  if (!(grid.step > 0.0) || grid.stop < grid.start)
    throw CLI::ValidationError("--delta-grid", "need step > 0 and stop >= start");
  return grid;
}

int cmd_bounds(const std::string& path, const std::string& grid_spec, int threads,
               const std::string& out_path) {
  const DeltaGrid grid = parse_delta_grid(grid_spec);
  const Instance inst = load_instance(path);
  const ValidationReport rep = validate_instance(inst);
  if (!rep.ok()) return print_report(rep);

  const double opt = opt_nonrobust(inst).opt;
  const double sw = social_welfare(inst);

  std::ostringstream csv;
  csv << "delta,opt_delta,lb,ub\n";
  for (double delta = grid.start; delta <= grid.stop + 1e-12; delta += grid.step) {
    require_delta(delta);
    const BoundsReport b = bounds_from_values(opt, sw, delta);
    const RobustSolution sol = solve_robust(inst, delta, {.threads = threads});
    csv << format_double(delta) << "," << format_double(sol.psi) << ","
        << format_double(b.lb) << "," << format_double(b.ub) << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << csv.str();
  }
  return 0;
}

int cmd_gen(const std::string& family, double delta, long n, long m, std::uint64_t seed,
            bool with_opt_out, const std::string& out_path) {
  Instance inst;
  if (family == "tight-lb") {
    require_delta(delta);
    inst = gen_tight_lb(delta, static_cast<Index>(n));
  } else if (family == "tight-ub") {
    require_delta(delta);
    inst = gen_tight_ub(delta);
  } else if (family == "random") {
    inst = gen_random(static_cast<Index>(n), static_cast<Index>(m), seed, with_opt_out);
  } else {
    throw CLI::ValidationError("family", "must be tight-lb, tight-ub or random");
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  write_instance(out, inst);
  std::cout << "wrote " << out_path << " (" << inst.num_actions() << " actions, "
            << inst.num_outcomes() << " outcomes)\n";
  return 0;
}

int cmd_oracle(const std::string& path, double delta, double step, double ubound) {
  require_delta(delta);
  const Instance inst = load_instance(path);
  const ValidationReport rep = validate_instance(inst);
  if (!rep.ok()) return print_report(rep);
  const GridResult res = grid_psi_max(inst, delta, GridSpec{step, ubound});
  std::cout << "grid_psi_max " << format_double(res.value) << "\n";
  std::cout << "contract";
  for (Index w = 0; w < res.contract.size(); ++w)
    std::cout << " " << format_double(res.contract[w]);
  std::cout << "\n";
  std::cout << "step " << format_double(step) << " upper " << format_double(ubound) << "\n";
  return 0;
}

int cmd_learn(const std::string& path, long T, double delta, std::uint64_t seed, double epsilon,
              double baseline_step, const std::string& baseline_mode,
              const std::string& out_path) {
  require_delta(delta);
  if (T < 1) throw CLI::ValidationError("--T", "must be positive");
  const TypedInstance tinst = load_typed(path);
  const ValidationReport rep = validate_typed(tinst);
  if (!rep.ok()) return print_report(rep);

  LearnConfig cfg;
  cfg.horizon = T;
  cfg.delta = delta;
  cfg.seed = seed;
  cfg.epsilon = epsilon;
  cfg.baseline_step = baseline_step;
  if (baseline_mode == "robust")
    cfg.baseline = BaselineMode::Robust;
  else if (baseline_mode == "nonrobust")
    cfg.baseline = BaselineMode::NonRobust;
  else if (baseline_mode == "both")
    cfg.baseline = BaselineMode::Both;
  else
    throw CLI::ValidationError("--baseline", "must be robust, nonrobust or both");

  const LearnRun run = run_ucb1(tinst, cfg);

  std::ostringstream csv;
  csv << "# seed=" << run.seed << " T=" << run.horizon << " epsilon="
      << format_double(run.epsilon) << " delta=" << format_double(run.delta)
      << " grid=" << run.arms.size() << " baseline_step="
      << format_double(run.baselines.grid_step) << " opt_robust="
      << format_double(run.baselines.opt_robust) << " opt_nonrobust="
      << format_double(run.baselines.opt_nonrobust) << "\n";
  csv << "round,arm,expected_utility,cum_regret_robust,cum_regret_nonrobust\n";
  for (std::size_t t = 0; t < run.rounds.size(); ++t) {
    csv << (t + 1) << "," << run.rounds[t].arm << ","
        << format_double(run.expected_utility[t]) << ",";
    if (!run.cum_regret_robust.empty()) csv << format_double(run.cum_regret_robust[t]);
    csv << ",";
    if (!run.cum_regret_nonrobust.empty()) csv << format_double(run.cum_regret_nonrobust[t]);
    csv << "\n";
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << csv.str();

  std::cout << "arms " << run.arms.size() << " epsilon " << format_double(run.epsilon) << "\n";
  if (!run.cum_regret_robust.empty())
    std::cout << "final_regret_robust " << format_double(run.cum_regret_robust.back()) << "\n";
  if (!run.cum_regret_nonrobust.empty())
    std::cout << "final_regret_nonrobust " << format_double(run.cum_regret_nonrobust.back())
              << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust contract design toolkit"};
  app.require_subcommand(1);

  std::string path, out_path, emit_path, family, grid_spec, baseline_mode = "both";
  double delta = 0.0, step = 0.01, ubound = 1.0, epsilon = 0.0, baseline_step = 0.01;
  long T = 0, n = 0, m = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  bool with_opt_out = false;

  auto* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("path", path)->required();

  auto* solve = app.add_subcommand("solve", "compute an optimal delta-robust contract");
  solve->add_option("path", path)->required();
  solve->add_option("--delta", delta, "robustness level in (0,1)")->required();
  solve->add_option("--threads", threads, "worker threads for the subproblem sweep");
  solve->add_option("--emit", emit_path, "write a machine-readable result file");

  auto* bounds_cmd = app.add_subcommand("bounds", "sweep delta and tabulate value and bounds");
  bounds_cmd->add_option("path", path)->required();
  bounds_cmd->add_option("--delta-grid", grid_spec, "start:stop:step")->required();
  bounds_cmd->add_option("--threads", threads);
  bounds_cmd->add_option("-o,--output", out_path, "CSV destination (stdout if omitted)");

  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("family", family, "tight-lb, tight-ub or random")->required();
  gen->add_option("--delta", delta);
  gen->add_option("--n", n, "family parameter / action count");
  gen->add_option("--m", m, "outcome count (random family)");
  gen->add_option("--seed", seed);
  gen->add_flag("--with-opt-out", with_opt_out, "force an exact opt-out action");
  gen->add_option("-o,--output", out_path)->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force grid maximization of Psi");
  oracle->add_option("path", path)->required();
  oracle->add_option("--delta", delta)->required();
  oracle->add_option("--step", step, "grid step");
  oracle->add_option("--ubound", ubound, "per-coordinate box upper bound");

  auto* learn = app.add_subcommand("learn", "simulate UCB1 over the payment lattice");
  learn->add_option("path", path, "typed (or plain) instance file")->required();
  learn->add_option("--T", T, "horizon")->required();
  learn->add_option("--delta", delta)->required();
  learn->add_option("--seed", seed);
  learn->add_option("--epsilon", epsilon, "lattice step (default T^(-1/(m+1)))");
  learn->add_option("--baseline-step", baseline_step, "oracle grid step for the benchmarks");
  learn->add_option("--baseline", baseline_mode, "robust, nonrobust or both");
  learn->add_option("-o,--output", out_path, "per-round CSV destination")->required();

  try {
    app.parse(argc, argv);
    if (validate->parsed()) return cmd_validate(path);
    if (solve->parsed()) return cmd_solve(path, delta, threads, emit_path);
    if (bounds_cmd->parsed()) return cmd_bounds(path, grid_spec, threads, out_path);
    if (gen->parsed()) return cmd_gen(family, delta, n, m, seed, with_opt_out, out_path);
    if (oracle->parsed()) return cmd_oracle(path, delta, step, ubound);
    if (learn->parsed())
      return cmd_learn(path, T, delta, seed, epsilon, baseline_step, baseline_mode, out_path);
    return 1;
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 1;
  } catch (const rcd::internal_error& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
