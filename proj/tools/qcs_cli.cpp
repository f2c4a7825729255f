// qcs: generate, solve, sweep and summarize quantized CS experiments.
//
// Exit status: 0 success, 1 configuration or input error, 2 the run finished
// but some solver runs failed (recorded as nan rows).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcs/experiment.hpp"
#include "qcs/problem_gen.hpp"
#include "qcs/qvmp.hpp"
#include "qcs/serialize.hpp"

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number_flag(const std::string& s) {
  try {
    return qcs::parse_double(s);
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + s + "'");
  }
}

void add_solver_flags(CLI::App* app, qcs::SolverConfig& s) {
  app->add_option("--eps", s.prior.eps, "Gamma shape of the alpha prior");
  app->add_option("--c", s.prior.c, "Gamma shape of eta");
  app->add_option("--d", s.prior.d, "Gamma rate of eta");
  app->add_option("--pruning-threshold", s.pruning_threshold);
  app->add_option("--tol", s.tol);
  app->add_option("--max-iters", s.max_iters);
  app->add_option("--onebit-variance-scale", s.onebit_variance_scale);
}

int cmd_gen(const qcs::GenSpec& spec, const std::string& out) {
  const qcs::Problem p = qcs::gen_problem(spec);
  qcs::save_problem(p, out);
  std::cout << "wrote " << out << " (M=" << p.num_measurements() << ", N=" << p.signal_length()
            << ", hash=" << qcs::problem_hash(p) << ")\n";
  return 0;
}

int cmd_solve(const std::string& problem_path, qcs::SolverConfig cfg, const std::string& mode,
              const std::string& trace_path, const std::string& estimate_path) {
  const qcs::Problem p = qcs::load_problem(problem_path);
  cfg.mode = qcs::solver_mode_from_string(mode);
  cfg.record_trace = !trace_path.empty();
  cfg.validate();
  const qcs::RecoveryResult res = qcs::run_qvmp(p, cfg);

  if (!trace_path.empty()) {
    std::ofstream t(trace_path);
    if (!t) throw std::runtime_error("cannot open " + trace_path);
    for (const auto& r : res.trace) {
      nlohmann::json j{{"iteration", r.iteration},       {"active_count", r.active_count},
                       {"alpha_change", r.alpha_change}, {"objective", r.objective},
                       {"e_norm", r.e_norm},             {"e_violation", r.e_violation}};
      t << j.dump() << '\n';
    }
  }
  if (!estimate_path.empty()) {
    std::ofstream e(estimate_path);
    if (!e) throw std::runtime_error("cannot open " + estimate_path);
    for (Eigen::Index n = 0; n < res.x_hat.size(); ++n) e << qcs::format_double(res.x_hat[n]) << '\n';
  }

  nlohmann::json summary{{"status", qcs::to_string(res.status)},
                         {"iterations", res.iterations},
                         {"converged", res.converged},
                         {"final_alpha_change", res.final_alpha_change},
                         {"support_size", qcs::support_size(res.x_hat)},
                         {"wall_time_s", res.wall_time}};
  if (p.truth) summary["rsnr_db"] = qcs::format_double(qcs::rsnr(*p.truth, res.x_hat));
  if (res.failed_iteration >= 0) summary["failed_iteration"] = res.failed_iteration;
  std::cout << summary.dump(2) << '\n';
  return res.status == qcs::SolverStatus::ill_conditioned ? 2 : 0;
}

int cmd_summarize(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot open " + input);
  const auto records = qcs::read_sweep_csv(in);
  std::vector<std::string> warnings;
  const auto rows = qcs::summarize(records, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (output.empty() || output == "-") {
    qcs::write_summary_csv(rows, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open " + output);
    qcs::write_summary_csv(rows, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery from quantized measurements"};
  app.require_subcommand(1);

  // gen
  qcs::GenSpec gen;
  std::string gen_kind = "uniform", gen_snr = "30", gen_out = "problem.qcsp";
  auto* g = app.add_subcommand("gen", "Generate a seeded synthetic problem");
  g->add_option("--N", gen.N);
  g->add_option("--K", gen.K);
  g->add_option("--M", gen.M);
  g->add_option("--snr", gen_snr, "SNR in dB, or inf");
  g->add_option("--quantizer", gen_kind, "uniform, saturated or onebit");
  g->add_option("--B", gen.bit_depth);
  g->add_option("--seed", gen.rng_seed);
  g->add_option("-o,--out", gen_out);

  // solve
  qcs::SolverConfig solve_cfg;
  std::string solve_problem, solve_mode = "multibit", solve_trace, solve_estimate;
  auto* s = app.add_subcommand("solve", "Run one solver mode on a stored problem");
  s->add_option("problem", solve_problem)->required();
  s->add_option("--mode", solve_mode, "multibit, onebit, coupled or oracle");
  s->add_option("--trace", solve_trace, "write per-iteration records as JSON lines");
  s->add_option("--estimate", solve_estimate, "write x_hat, one value per line");
  add_solver_flags(s, solve_cfg);

  // sweep: defaults < config file < flags
  auto* w = app.add_subcommand("sweep", "Run a full bit-budget grid");
  std::string sweep_config_path;
  bool paper_scale = false;
  std::optional<int> f_N, f_K, f_B, f_trials, f_threads, f_max_iters;
  std::optional<std::string> f_snr, f_quantizer, f_output;
  std::optional<std::uint64_t> f_seed;
  std::optional<std::vector<int>> f_budgets;
  std::optional<std::vector<std::string>> f_modes;
  std::optional<double> f_eps, f_c, f_d, f_prune, f_tol, f_scale;
  w->add_option("--config", sweep_config_path, "JSON config file");
  w->add_flag("--paper-scale", paper_scale, "N=500 and 200 trials");
  w->add_option("--N", f_N);
  w->add_option("--K", f_K);
  w->add_option("--snr", f_snr);
  w->add_option("--quantizer", f_quantizer);
  w->add_option("--B", f_B);
  w->add_option("--budgets", f_budgets)->delimiter(',');
  w->add_option("--modes", f_modes)->delimiter(',');
  w->add_option("--trials", f_trials);
  w->add_option("--seed", f_seed);
  w->add_option("-o,--output", f_output);
  w->add_option("--threads", f_threads);
  w->add_option("--eps", f_eps);
  w->add_option("--c", f_c);
  w->add_option("--d", f_d);
  w->add_option("--pruning-threshold", f_prune);
  w->add_option("--tol", f_tol);
  w->add_option("--max-iters", f_max_iters);
  w->add_option("--onebit-variance-scale", f_scale);

  // summarize
  std::string sum_in, sum_out;
  auto* m = app.add_subcommand("summarize", "Aggregate a sweep CSV per (mode, budget)");
  m->add_option("input", sum_in)->required();
  m->add_option("-o,--output", sum_out, "summary CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (g->parsed()) {
      gen.snr_db = parse_number_flag(gen_snr);
      try {
        gen.quantizer_kind = qcs::quantizer_kind_from_string(gen_kind);
        gen.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      return cmd_gen(gen, gen_out);
    }
    if (s->parsed()) {
      try {
        qcs::solver_mode_from_string(solve_mode);
        solve_cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      return cmd_solve(solve_problem, solve_cfg, solve_mode, solve_trace, solve_estimate);
    }
    if (w->parsed()) {
      qcs::SweepConfig cfg;
      try {
        if (paper_scale) cfg.use_paper_scale();
        if (!sweep_config_path.empty()) {
          std::ifstream in(sweep_config_path);
          if (!in) throw ConfigError("cannot open " + sweep_config_path);
          cfg = qcs::sweep_config_from_json(nlohmann::json::parse(in), cfg);
        }
        if (f_N) cfg.N = *f_N;
        if (f_K) cfg.K = *f_K;
        if (f_snr) cfg.snr_db = parse_number_flag(*f_snr);
        if (f_quantizer) cfg.quantizer_kind = qcs::quantizer_kind_from_string(*f_quantizer);
        if (f_B) cfg.bit_depth = *f_B;
        if (f_budgets) cfg.bit_budgets = *f_budgets;
        if (f_modes) {
          cfg.modes.clear();
          for (const auto& name : *f_modes) cfg.modes.push_back(qcs::sweep_mode_from_string(name));
        }
        if (f_trials) cfg.trials = *f_trials;
        if (f_seed) cfg.base_seed = *f_seed;
        if (f_output) cfg.output = *f_output;
        if (f_threads) cfg.threads = *f_threads;
        if (f_eps) cfg.solver.prior.eps = *f_eps;
        if (f_c) cfg.solver.prior.c = *f_c;
        if (f_d) cfg.solver.prior.d = *f_d;
        if (f_prune) cfg.solver.pruning_threshold = *f_prune;
        if (f_tol) cfg.solver.tol = *f_tol;
        if (f_max_iters) cfg.solver.max_iters = *f_max_iters;
        if (f_scale) cfg.solver.onebit_variance_scale = *f_scale;
        cfg.validate();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      qcs::SweepOutcome outcome;
      if (cfg.output == "-") {
        outcome = qcs::run_sweep_csv(cfg, std::cout);
      } else {
        std::ofstream out(cfg.output);
        if (!out) throw ConfigError("cannot open " + cfg.output);
        outcome = qcs::run_sweep_csv(cfg, out);
      }
      std::cerr << outcome.records << " records, " << outcome.failures << " failed\n";
      return outcome.failures > 0 ? 2 : 0;
    }
    if (m->parsed()) return cmd_summarize(sum_in, sum_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
