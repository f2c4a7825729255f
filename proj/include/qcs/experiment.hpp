#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcs/model.hpp"
#include "qcs/problem_gen.hpp"
#include "qcs/qvmp.hpp"

namespace qcs {

inline constexpr const char* kSweepSchema = "qcs.sweep.v1";
inline constexpr const char* kSummarySchema = "qcs.summary.v1";

/// Column order of sweep CSVs; never reorder, bump kSweepSchema instead.
inline constexpr const char* kSweepHeader =
    "schema,mode,bit_budget,M,B,snr_db,seed,problem_hash,rsnr_db,support_size,iterations,converged,wall_time_s";
inline constexpr const char* kSummaryHeader =
    "schema,mode,bit_budget,M,B,trials,rsnr_mean_db,rsnr_se_db,exact_recoveries,failures,support_mean,"
    "support_se,iterations_mean,converged_fraction,time_mean_s,time_se_s";

/// Solver variants a sweep can run on each trial problem. qvmp resolves to
/// the multi-bit or one-bit mode from the quantizer.
enum class SweepMode { qvmp, coupled, oracle };

std::string to_string(SweepMode mode);
SweepMode sweep_mode_from_string(const std::string& name);
SolverMode solver_mode_for(SweepMode mode, QuantizerKind kind);

struct SweepConfig {
  int N = 200;
  int K = 10;
  double snr_db = 30.0;
  QuantizerKind quantizer_kind = QuantizerKind::uniform_unsaturated;
  int bit_depth = 4;
  std::vector<int> bit_budgets{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  std::vector<SweepMode> modes{SweepMode::qvmp, SweepMode::coupled, SweepMode::oracle};
  int trials = 50;
  std::uint64_t base_seed = 1;
  std::string output = "sweep.csv";
  /// mode is ignored; it is set per row from `modes`.
  SolverConfig solver;
  /// Worker threads over trials; 0 keeps the OpenMP default.
  int threads = 0;

  /// Throws std::invalid_argument; budgets must be divisible by B and give K < M.
  void validate() const;
  /// Switches to N = 500 and 200 trials.
  void use_paper_scale();

  GenSpec gen_spec(int budget, int trial) const;
  std::uint64_t seed_for(int budget, int trial) const;
};

/// Reads the keys written by sweep_config_to_json; unknown keys are rejected.
SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig base = {});
nlohmann::json sweep_config_to_json(const SweepConfig& c);

struct ExperimentRecord {
  std::string mode;
  int bit_budget = 0;
  int M = 0;
  int B = 0;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  std::string problem_hash;
  double rsnr_db = 0.0;  // nan when the solver failed
  int support_size = 0;
  int iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;

  bool failed() const;
};

std::string csv_row(const ExperimentRecord& r);
ExperimentRecord parse_csv_row(const std::string& line);

/// Runs `mode` on `problem` and scores it against the stored truth.
ExperimentRecord run_trial(const Problem& problem, const std::string& hash, const GenSpec& spec,
                           int bit_budget, SweepMode mode, const SolverConfig& solver);

struct SweepOutcome {
  std::size_t records = 0;
  std::size_t failures = 0;
};

/// Records arrive at `sink` in (budget, trial, mode) order regardless of the
/// thread count; each trial's problem is generated once and shared by all modes.
SweepOutcome run_sweep(const SweepConfig& config, const std::function<void(const ExperimentRecord&)>& sink);

/// Writes the header and then one flushed line per record.
SweepOutcome run_sweep_csv(const SweepConfig& config, std::ostream& out);

std::vector<ExperimentRecord> read_sweep_csv(std::istream& in);

struct SummaryRow {
  std::string mode;
  int bit_budget = 0;
  int M = 0;
  int B = 0;
  int trials = 0;
  double rsnr_mean_db = 0.0;
  double rsnr_se_db = 0.0;
  int exact_recoveries = 0;  // +inf RSNR, excluded from the mean
  int failures = 0;          // nan RSNR, excluded from every mean
  double support_mean = 0.0;
  double support_se = 0.0;
  double iterations_mean = 0.0;
  double converged_fraction = 0.0;
  double time_mean_s = 0.0;
  double time_se_s = 0.0;
};

/// Groups by (mode, budget) in order of first appearance. Groups with no
/// usable record are dropped and reported through `warnings`.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records,
                                  std::vector<std::string>* warnings = nullptr);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace qcs
