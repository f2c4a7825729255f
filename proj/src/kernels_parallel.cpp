#include <omp.h>

#include <exception>
#include <stdexcept>

#include "qcs/kernels.hpp"

namespace qcs::kernels::parallel {

namespace {
const double* column(const MatrixRef& X, Eigen::Index j) { return X.data() + j * X.outerStride(); }

// Below this many scalar multiply-adds a parallel region costs more than it saves.
constexpr Eigen::Index kMinWork = 1 << 15;
}  // namespace

int thread_count() { return omp_get_max_threads(); }

void gram(const MatrixRef& X, Eigen::MatrixXd& out) {
  const Eigen::Index n = X.cols();
  const Eigen::Index k = X.rows();
  out.resize(n, n);
  // Columns of the upper triangle get uneven work; dynamic keeps threads busy.
#pragma omp parallel for schedule(dynamic, 4) if (n * n * k / 2 > kMinWork)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = detail::dot(column(X, i), column(X, j), k);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

void cross_gram(const MatrixRef& X, const MatrixRef& Y, Eigen::MatrixXd& out) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("cross_gram: row mismatch");
  const Eigen::Index k = X.rows();
  const Eigen::Index cols = Y.cols();
  out.resize(X.cols(), cols);
#pragma omp parallel for schedule(static) if (X.cols() * cols * k > kMinWork)
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < X.cols(); ++i) out(i, j) = detail::dot(column(X, i), column(Y, j), k);
  }
}

void weighted_gram(const MatrixRef& X, const VectorRef& w, double shift, Eigen::MatrixXd& out) {
  if (X.rows() != w.size()) throw std::invalid_argument("weighted_gram: weight length mismatch");
  const Eigen::Index n = X.cols();
  const Eigen::Index k = X.rows();
  out.resize(n, n);
#pragma omp parallel for schedule(dynamic, 4) if (n * n * k / 2 > kMinWork)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      double v = detail::weighted_dot(column(X, i), w.data(), column(X, j), k);
      if (i == j) v += shift;
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

void matvec_t(const MatrixRef& X, const VectorRef& v, Eigen::VectorXd& out) {
  if (X.rows() != v.size()) throw std::invalid_argument("matvec_t: length mismatch");
  const Eigen::Index cols = X.cols();
  out.resize(cols);
#pragma omp parallel for schedule(static) if (cols * X.rows() > kMinWork)
  for (Eigen::Index j = 0; j < cols; ++j) out[j] = detail::dot(column(X, j), v.data(), X.rows());
}

void trunc_gauss_means(const VectorRef& centers, double sigma, std::span<const Interval> bounds,
                       Eigen::VectorXd& out) {
  if (static_cast<std::size_t>(centers.size()) != bounds.size()) {
    throw std::invalid_argument("trunc_gauss_means: length mismatch");
  }
  const Eigen::Index M = centers.size();
  out.resize(M);
  // Exceptions must not escape an OpenMP region; keep the first and rethrow.
  std::exception_ptr error;
#pragma omp parallel for schedule(static) if (M > 512)
  for (Eigen::Index m = 0; m < M; ++m) {
    try {
      out[m] = special::trunc_gauss_mean(centers[m], sigma, bounds[static_cast<std::size_t>(m)]);
    } catch (...) {
#pragma omp critical(qcs_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void gig_moments(const VectorRef& x2, double eta, double eps, Eigen::VectorXd& inv_alpha,
                 Eigen::VectorXd& alpha) {
  const Eigen::Index N = x2.size();
  inv_alpha.resize(N);
  alpha.resize(N);
  std::exception_ptr error;
#pragma omp parallel for schedule(static) if (N > 512)
  for (Eigen::Index n = 0; n < N; ++n) {
    try {
      inv_alpha[n] = special::gig_moment(-1, x2[n], eta, eps);
      alpha[n] = special::gig_moment(1, x2[n], eta, eps);
    } catch (...) {
#pragma omp critical(qcs_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace qcs::kernels::parallel
