#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcs/kernels.hpp"
#include "qcs/model.hpp"

namespace qcs {

enum class SolverStatus { converged, max_iterations, all_pruned, ill_conditioned };

std::string to_string(SolverStatus status);

/// Thrown when the Cholesky factor of the precision (or of C in the Woodbury
/// route) cannot be formed.
class IllConditioned : public std::runtime_error {
 public:
  IllConditioned(int iteration, const std::string& what);
  int iteration() const { return iteration_; }
  const std::string& reason() const { return reason_; }

 private:
  int iteration_;
  std::string reason_;
};

struct IterationRecord {
  int iteration = 0;
  int active_count = 0;
  double alpha_change = 0.0;
  /// 0.5 * sum <alpha_n^-1> mu_n^2 + ||obs - e - A mu||^2 / (2 sigma^2)
  double objective = 0.0;
  double e_norm = 0.0;
  /// Largest violation of the error-domain constraints by <e> (0 when feasible).
  double e_violation = 0.0;
};

struct RecoveryResult {
  Eigen::VectorXd x_hat;
  int iterations = 0;
  bool converged = false;
  SolverStatus status = SolverStatus::max_iterations;
  double final_alpha_change = 0.0;
  int failed_iteration = -1;
  std::vector<int> active_count_trace;
  std::vector<IterationRecord> trace;  // filled when SolverConfig::record_trace
  double wall_time = 0.0;              // seconds
};

namespace qvmp {

/// Floor substituted for sigma^2 = 0: 1e-12 * mean(diag(A^T A)).
inline constexpr double kNoiseFloorFactor = 1e-12;
/// Lower clamp on <x_n^2> before the GIG moments.
inline constexpr double kSecondMomentFloor = 1e-30;
/// Lower clamp on |A_n^T z| in the initialization.
inline constexpr double kInitCorrelationFloor = 1e-12;

/// Likelihood variance the solver actually uses for `problem` in `config.mode`.
double effective_noise_variance(const Problem& problem, const SolverConfig& config);

/// (sigma^-2 G + diag(inv_alpha))^-1 with G = A^T A of the active columns.
Eigen::MatrixXd sigma_direct(const kernels::MatrixRef& gram, const kernels::VectorRef& inv_alpha,
                             double sigma2);

/// Same matrix through the M x M system C = sigma^2 I + A diag(1/inv_alpha) A^T.
Eigen::MatrixXd sigma_woodbury(const kernels::MatrixRef& A, const kernels::VectorRef& inv_alpha,
                               double sigma2, bool parallel = true);

/// (N eps + c) / (sum alpha + d) over the active coefficients.
double eta_update(const kernels::VectorRef& alpha, const PriorConfig& prior);

}  // namespace qvmp

/// One Q-VMP run over a fixed problem. The individual updates are public so
/// the iteration can be replayed step by step.
class QvmpEngine {
 public:
  QvmpEngine(const Problem& problem, SolverConfig config);

  void update_sigma();
  void update_mu();
  void update_alpha();
  void update_eta();
  void update_e();
  /// Drops coefficients with <alpha_n^-1> above the threshold; returns how many.
  int prune();

  /// Sigma, mu, alpha moments, eta, e, then pruning and the convergence test.
  /// Returns true once the relative change of alpha-tilde falls below tol.
  bool iterate();

  RecoveryResult run();

  const PosteriorState& state() const { return state_; }
  double noise_variance() const { return sigma2_; }
  int iteration() const { return iteration_; }
  double last_alpha_change() const { return last_change_; }
  /// Diagnostics of the latest iteration (objective and e taken before pruning).
  const IterationRecord& last_record() const { return last_record_; }
  /// Current objective surrogate (see IterationRecord::objective).
  double objective() const;
  /// mu scattered to full length N (zeros at pruned indices).
  Eigen::VectorXd estimate() const;

 private:
  void rebuild_active_matrices();
  Eigen::VectorXd residual() const;  // obs - A mu over the active columns
  IterationRecord make_record() const;

  const Problem& problem_;
  SolverConfig config_;
  double sigma2_ = 0.0;
  Eigen::VectorXd observation_;  // z, 0 (one-bit) or y (oracle)
  Eigen::MatrixXd gram_full_;
  Eigen::MatrixXd A_active_;
  Eigen::MatrixXd At_active_;
  PosteriorState state_;
  Eigen::VectorXd alpha_tilde_;  // full length, zeros at pruned indices
  int iteration_ = 0;
  double last_change_ = 0.0;
  IterationRecord last_record_;
};

RecoveryResult run_qvmp(const Problem& problem, const SolverConfig& config);

}  // namespace qcs
