#include "qcs/experiment.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "qcs/rng.hpp"
#include "qcs/serialize.hpp"

namespace qcs {

std::string to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::qvmp: return "qvmp";
    case SweepMode::coupled: return "coupled";
    case SweepMode::oracle: return "oracle";
  }
  return "unknown";
}

SweepMode sweep_mode_from_string(const std::string& name) {
  if (name == "qvmp") return SweepMode::qvmp;
  if (name == "coupled") return SweepMode::coupled;
  if (name == "oracle") return SweepMode::oracle;
  throw std::invalid_argument("unknown sweep mode '" + name + "' (expected qvmp, coupled or oracle)");
}

SolverMode solver_mode_for(SweepMode mode, QuantizerKind kind) {
  switch (mode) {
    case SweepMode::qvmp: return kind == QuantizerKind::one_bit ? SolverMode::one_bit : SolverMode::multi_bit;
    case SweepMode::coupled: return SolverMode::coupled_baseline;
    case SweepMode::oracle: return SolverMode::oracle;
  }
  throw std::logic_error("unknown sweep mode");
}

void SweepConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("SweepConfig: " + what); };
  if (trials < 1) fail("trials must be >= 1");
  if (bit_budgets.empty()) fail("no bit budgets");
  if (modes.empty()) fail("no modes");
  if (threads < 0) fail("threads must be >= 0");
  for (SweepMode m : modes) {
    if (m == SweepMode::coupled && quantizer_kind == QuantizerKind::one_bit) {
      fail("the coupled baseline needs a multi-bit quantizer");
    }
  }
  for (int budget : bit_budgets) {
    if (bit_depth < 1 || budget % bit_depth != 0) {
      fail("bit budget " + std::to_string(budget) + " is not divisible by B=" + std::to_string(bit_depth));
    }
    gen_spec(budget, 0).validate();
  }
  solver.validate();
}

void SweepConfig::use_paper_scale() {
  N = 500;
  trials = 200;
}

GenSpec SweepConfig::gen_spec(int budget, int trial) const {
  GenSpec g;
  g.N = N;
  g.K = K;
  g.M = bit_depth > 0 ? budget / bit_depth : 0;
  g.snr_db = snr_db;
  g.quantizer_kind = quantizer_kind;
  g.bit_depth = bit_depth;
  g.rng_seed = seed_for(budget, trial);
  return g;
}

std::uint64_t SweepConfig::seed_for(int budget, int trial) const {
  return trial_seed(base_seed, static_cast<std::uint64_t>(budget), static_cast<std::uint64_t>(trial));
}

namespace {

double number_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_double(v.get<std::string>());
  return v.get<double>();
}

nlohmann::json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "N") c.N = v.get<int>();
    else if (key == "K") c.K = v.get<int>();
    else if (key == "snr_db") c.snr_db = number_from_json(v);
    else if (key == "quantizer") c.quantizer_kind = quantizer_kind_from_string(v.get<std::string>());
    else if (key == "B") c.bit_depth = v.get<int>();
    else if (key == "bit_budgets") c.bit_budgets = v.get<std::vector<int>>();
    else if (key == "modes") {
      c.modes.clear();
      for (const auto& m : v) c.modes.push_back(sweep_mode_from_string(m.get<std::string>()));
    } else if (key == "trials") c.trials = v.get<int>();
    else if (key == "base_seed") c.base_seed = v.get<std::uint64_t>();
    else if (key == "output") c.output = v.get<std::string>();
    else if (key == "threads") c.threads = v.get<int>();
    else if (key == "eps") c.solver.prior.eps = number_from_json(v);
    else if (key == "c") c.solver.prior.c = number_from_json(v);
    else if (key == "d") c.solver.prior.d = number_from_json(v);
    else if (key == "pruning_threshold") c.solver.pruning_threshold = number_from_json(v);
    else if (key == "tol") c.solver.tol = number_from_json(v);
    else if (key == "max_iters") c.solver.max_iters = v.get<int>();
    else if (key == "onebit_variance_scale") c.solver.onebit_variance_scale = number_from_json(v);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return c;
}

nlohmann::json sweep_config_to_json(const SweepConfig& c) {
  nlohmann::json j;
  j["N"] = c.N;
  j["K"] = c.K;
  j["snr_db"] = number_to_json(c.snr_db);
  j["quantizer"] = to_string(c.quantizer_kind);
  j["B"] = c.bit_depth;
  j["bit_budgets"] = c.bit_budgets;
  auto& modes = j["modes"] = nlohmann::json::array();
  for (SweepMode m : c.modes) modes.push_back(to_string(m));
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["eps"] = c.solver.prior.eps;
  j["c"] = c.solver.prior.c;
  j["d"] = c.solver.prior.d;
  j["pruning_threshold"] = c.solver.pruning_threshold;
  j["tol"] = c.solver.tol;
  j["max_iters"] = c.solver.max_iters;
  j["onebit_variance_scale"] = c.solver.onebit_variance_scale;
  return j;
}

bool ExperimentRecord::failed() const { return std::isnan(rsnr_db); }

std::string csv_row(const ExperimentRecord& r) {
  std::ostringstream s;
  s << kSweepSchema << ',' << r.mode << ',' << r.bit_budget << ',' << r.M << ',' << r.B << ','
    << format_double(r.snr_db) << ',' << r.seed << ',' << r.problem_hash << ',' << format_double(r.rsnr_db) << ','
    << r.support_size << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.wall_time_s);
  return s.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

long long parse_int(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

}  // namespace

ExperimentRecord parse_csv_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 13) {
    throw std::invalid_argument("sweep row has " + std::to_string(f.size()) + " fields, expected 13");
  }
  if (f[0] != kSweepSchema) throw std::invalid_argument("unsupported schema '" + f[0] + "'");
  ExperimentRecord r;
  r.mode = f[1];
  r.bit_budget = static_cast<int>(parse_int(f[2]));
  r.M = static_cast<int>(parse_int(f[3]));
  r.B = static_cast<int>(parse_int(f[4]));
  r.snr_db = parse_double(f[5]);
  std::size_t used = 0;
  r.seed = std::stoull(f[6], &used);
  if (used != f[6].size()) throw std::invalid_argument("bad seed '" + f[6] + "'");
  r.problem_hash = f[7];
  r.rsnr_db = parse_double(f[8]);
  r.support_size = static_cast<int>(parse_int(f[9]));
  r.iterations = static_cast<int>(parse_int(f[10]));
  r.converged = parse_int(f[11]) != 0;
  r.wall_time_s = parse_double(f[12]);
  return r;
}

ExperimentRecord run_trial(const Problem& problem, const std::string& hash, const GenSpec& spec,
                           int bit_budget, SweepMode mode, const SolverConfig& solver) {
  ExperimentRecord r;
  r.mode = to_string(mode);
  r.bit_budget = bit_budget;
  r.M = spec.M;
  r.B = spec.bit_depth;
  r.snr_db = spec.snr_db;
  r.seed = spec.rng_seed;
  r.problem_hash = hash;
  SolverConfig cfg = solver;
  cfg.mode = solver_mode_for(mode, spec.quantizer_kind);
  cfg.rng_seed = spec.rng_seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const RecoveryResult res = run_qvmp(problem, cfg);
    r.iterations = res.iterations;
    r.converged = res.converged;
    if (res.status == SolverStatus::ill_conditioned) {
      r.rsnr_db = std::nan("");
    } else {
      r.rsnr_db = rsnr(*problem.truth, res.x_hat);
      r.support_size = support_size(res.x_hat, 0.0);
    }
  } catch (const std::exception&) {
    r.rsnr_db = std::nan("");
    r.converged = false;
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SweepOutcome run_sweep(const SweepConfig& config, const std::function<void(const ExperimentRecord&)>& sink) {
  config.validate();
  SweepOutcome outcome;
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
  for (int budget : config.bit_budgets) {
    // Trials run concurrently; the ordered block hands rows to the sink in
    // trial order so the output does not depend on scheduling.
#pragma omp parallel for ordered schedule(dynamic, 1) num_threads(threads)
    for (int t = 0; t < config.trials; ++t) {
      const GenSpec spec = config.gen_spec(budget, t);
      std::vector<ExperimentRecord> rows;
      rows.reserve(config.modes.size());
      const Problem problem = gen_problem(spec);
      const std::string hash = problem_hash(problem);
      for (SweepMode mode : config.modes) rows.push_back(run_trial(problem, hash, spec, budget, mode, config.solver));
#pragma omp ordered
      {
        for (const auto& r : rows) {
          sink(r);
          ++outcome.records;
          if (r.failed()) ++outcome.failures;
        }
      }
    }
  }
  return outcome;
}

SweepOutcome run_sweep_csv(const SweepConfig& config, std::ostream& out) {
  config.validate();
  out << kSweepHeader << '\n' << std::flush;
  return run_sweep(config, [&out](const ExperimentRecord& r) { out << csv_row(r) << '\n' << std::flush; });
}

std::vector<ExperimentRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepHeader) throw std::invalid_argument("sweep CSV header does not match " + std::string(kSweepSchema));
  std::vector<ExperimentRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      records.push_back(parse_csv_row(line));
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n > 0 ? sum / n : std::nan(""); }
  double se() const {
    if (n < 2) return n == 1 ? 0.0 : std::nan("");
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records, std::vector<std::string>* warnings) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::vector<std::pair<std::string, int>> order;
  std::map<std::pair<std::string, int>, std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.mode, r.bit_budget);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const auto& members = groups[key];
    SummaryRow row;
    row.mode = key.first;
    row.bit_budget = key.second;
    row.M = members.front()->M;
    row.B = members.front()->B;
    row.trials = static_cast<int>(members.size());
    Moments rs, sup, it, tm;
    int converged = 0;
    for (const auto* r : members) {
      if (r->failed()) {
        ++row.failures;
        continue;
      }
      if (std::isinf(r->rsnr_db) && r->rsnr_db > 0) ++row.exact_recoveries;
      else rs.add(r->rsnr_db);
      sup.add(r->support_size);
      it.add(r->iterations);
      tm.add(r->wall_time_s);
      converged += r->converged ? 1 : 0;
    }
    if (sup.n == 0) {
      if (warnings) {
        warnings->push_back("group (" + row.mode + ", " + std::to_string(row.bit_budget) +
                            ") has no usable records; omitted");
      }
      continue;
    }
    row.rsnr_mean_db = rs.mean();
    row.rsnr_se_db = rs.se();
    row.support_mean = sup.mean();
    row.support_se = sup.se();
    row.iterations_mean = it.mean();
    row.converged_fraction = static_cast<double>(converged) / sup.n;
    row.time_mean_s = tm.mean();
    row.time_se_s = tm.se();
    rows.push_back(row);
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << kSummarySchema << ',' << r.mode << ',' << r.bit_budget << ',' << r.M << ',' << r.B << ',' << r.trials << ','
        << format_double(r.rsnr_mean_db) << ',' << format_double(r.rsnr_se_db) << ',' << r.exact_recoveries << ','
        << r.failures << ',' << format_double(r.support_mean) << ',' << format_double(r.support_se) << ','
        << format_double(r.iterations_mean) << ',' << format_double(r.converged_fraction) << ','
        << format_double(r.time_mean_s) << ',' << format_double(r.time_se_s) << '\n';
  }
}

}  // namespace qcs
