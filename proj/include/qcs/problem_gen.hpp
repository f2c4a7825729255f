#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "qcs/model.hpp"
#include "qcs/quantizer.hpp"

namespace qcs {

struct GenSpec {
  int N = 200;
  int K = 10;
  int M = 100;
  double snr_db = 30.0;  // +inf gives noise-free measurements
  QuantizerKind quantizer_kind = QuantizerKind::uniform_unsaturated;
  int bit_depth = 4;
  std::uint64_t rng_seed = 0;

  /// Requires K < M, K <= N, B >= 1 (B == 1 for one-bit). M > N is allowed.
  void validate() const;
};

/// M^-1 10^(-snr/10); zero for snr = +inf.
double noise_variance(int M, double snr_db);

/// Unquantized draw behind a generated problem.
struct Instance {
  Eigen::VectorXd x;        // K-sparse, unit norm
  Eigen::MatrixXd A;        // i.i.d. N(0, 1/M)
  Eigen::VectorXd y_clean;  // A x
  Eigen::VectorXd y;        // A x + n
  double sigma2 = 0.0;
};

/// Draw order from the seed: support, nonzero values, A row by row, noise.
Instance gen_instance(const GenSpec& spec);

/// Quantizer the protocol uses for this instance: uniform with y_abs_max =
/// ||y||_inf, saturated with meas_variance = 1/M + sigma^2, or one-bit.
QuantizerSpec quantizer_for(const GenSpec& spec, const Instance& inst);

/// gen_instance followed by quantization; truth and y are stored.
Problem gen_problem(const GenSpec& spec);

/// -20 log10 ||x - x_hat||; +inf when equal.
double rsnr(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat);

/// Entries with |x_hat_n| > threshold.
int support_size(const Eigen::VectorXd& x_hat, double threshold = 0.0);

/// Fraction of positions where sgn(y0) != sgn(y), with sgn(0) = +1.
double sign_flip_rate(std::span<const double> y0, std::span<const double> y);

}  // namespace qcs
