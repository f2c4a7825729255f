#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcs/quantizer.hpp"

namespace qcs {

/// Quantized observation model z = Q(A x + n) together with what the decoder
/// is allowed to know: A, the codes z, the error domain and sigma^2.
/// `truth` and `measurements` (the unquantized y) only feed metrics and the
/// oracle mode.
struct Problem {
  Eigen::MatrixXd A;
  Eigen::VectorXd z;
  std::vector<int> bins;
  std::vector<int> signs;  // one-bit only
  double sigma2 = 0.0;
  QuantizerSpec quantizer;
  ErrorDomain domain;
  std::optional<Eigen::VectorXd> truth;
  std::optional<Eigen::VectorXd> measurements;

  Eigen::Index num_measurements() const { return A.rows(); }
  Eigen::Index signal_length() const { return A.cols(); }
  bool one_bit() const { return quantizer.kind == QuantizerKind::one_bit; }

  /// Throws std::invalid_argument with an index-level diagnostic.
  void validate() const;
};

/// Quantizes y with q and assembles the matching Problem.
Problem make_problem(Eigen::MatrixXd A, const QuantizerSpec& q, const Eigen::VectorXd& y,
                     double sigma2, std::optional<Eigen::VectorXd> truth = std::nullopt);

/// Rebuilds a Problem from observed bin indices alone (decoder side).
Problem make_problem_from_bins(Eigen::MatrixXd A, const QuantizerSpec& q, std::vector<int> bins,
                               double sigma2);

/// Gaussian-Gamma-Gamma hyperparameters.
struct PriorConfig {
  double eps = 0.0;
  double c = 1.0;
  double d = 0.0;

  void validate() const;
};

enum class SolverMode { multi_bit, one_bit, coupled_baseline, oracle };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

struct SolverConfig {
  SolverMode mode = SolverMode::multi_bit;
  PriorConfig prior;
  double pruning_threshold = 1e4;
  double tol = 1e-5;
  int max_iters = 2000;
  double onebit_variance_scale = 1e-3;
  std::uint64_t rng_seed = 0;
  bool record_trace = false;
  bool parallel_kernels = true;

  void validate() const;
};

/// Variational moments over the active columns.
struct PosteriorState {
  Eigen::VectorXd mu;
  Eigen::MatrixXd Sigma;
  Eigen::VectorXd inv_alpha;  // <alpha_n^-1>
  Eigen::VectorXd alpha;      // <alpha_n>
  double eta = 1.0;
  Eigen::VectorXd e_mean;
  std::vector<int> active;    // increasing indices into 0..N-1
};

}  // namespace qcs
