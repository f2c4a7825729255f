#pragma once

#include <span>

#include <Eigen/Dense>

#include "qcs/special_math.hpp"

// Data-parallel building blocks of one solver iteration.
//
// Every kernel exists twice: serial:: is the reference, parallel:: spreads
// output elements over OpenMP threads. Each output element is produced by
// exactly one thread with the same in-order accumulation as the reference,
// so both variants are bit-identical for any thread count.
namespace qcs::kernels {

using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

namespace detail {
// Plain left-to-right accumulation; never vectorized into partial sums.
inline double dot(const double* a, const double* b, Eigen::Index n) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

inline double weighted_dot(const double* a, const double* w, const double* b, Eigen::Index n) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) s += a[k] * w[k] * b[k];
  return s;
}
}  // namespace detail

namespace serial {
/// out = X^T X (symmetric).
void gram(const MatrixRef& X, Eigen::MatrixXd& out);
/// out = X^T Y.
void cross_gram(const MatrixRef& X, const MatrixRef& Y, Eigen::MatrixXd& out);
/// out = X^T diag(w) X + shift * I.
void weighted_gram(const MatrixRef& X, const VectorRef& w, double shift, Eigen::MatrixXd& out);
/// out = X^T v.
void matvec_t(const MatrixRef& X, const VectorRef& v, Eigen::VectorXd& out);
/// out[m] = trunc_gauss_mean(centers[m], sigma, bounds[m]).
void trunc_gauss_means(const VectorRef& centers, double sigma, std::span<const Interval> bounds,
                       Eigen::VectorXd& out);
/// Per-coefficient <alpha^-1> and <alpha> from <x_n^2>.
void gig_moments(const VectorRef& x2, double eta, double eps, Eigen::VectorXd& inv_alpha,
                 Eigen::VectorXd& alpha);
}  // namespace serial

namespace parallel {
/// out = X^T X (symmetric).
void gram(const MatrixRef& X, Eigen::MatrixXd& out);
/// out = X^T Y.
void cross_gram(const MatrixRef& X, const MatrixRef& Y, Eigen::MatrixXd& out);
/// out = X^T diag(w) X + shift * I.
void weighted_gram(const MatrixRef& X, const VectorRef& w, double shift, Eigen::MatrixXd& out);
/// out = X^T v.
void matvec_t(const MatrixRef& X, const VectorRef& v, Eigen::VectorXd& out);
/// out[m] = trunc_gauss_mean(centers[m], sigma, bounds[m]).
void trunc_gauss_means(const VectorRef& centers, double sigma, std::span<const Interval> bounds,
                       Eigen::VectorXd& out);
/// Per-coefficient <alpha^-1> and <alpha> from <x_n^2>.
void gig_moments(const VectorRef& x2, double eta, double eps, Eigen::VectorXd& inv_alpha,
                 Eigen::VectorXd& alpha);
/// Threads available to the parallel kernels.
int thread_count();
}  // namespace parallel

}  // namespace qcs::kernels
