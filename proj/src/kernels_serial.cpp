#include <stdexcept>

#include "qcs/kernels.hpp"

namespace qcs::kernels::serial {

namespace {
const double* column(const MatrixRef& X, Eigen::Index j) { return X.data() + j * X.outerStride(); }
}  // namespace

void gram(const MatrixRef& X, Eigen::MatrixXd& out) {
  const Eigen::Index n = X.cols();
  const Eigen::Index k = X.rows();
  out.resize(n, n);
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
  out.resize(X.cols(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.cols(); ++i) out(i, j) = detail::dot(column(X, i), column(Y, j), k);
  }
}

void weighted_gram(const MatrixRef& X, const VectorRef& w, double shift, Eigen::MatrixXd& out) {
  if (X.rows() != w.size()) throw std::invalid_argument("weighted_gram: weight length mismatch");
  const Eigen::Index n = X.cols();
  const Eigen::Index k = X.rows();
  out.resize(n, n);
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
  out.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) out[j] = detail::dot(column(X, j), v.data(), X.rows());
}

void trunc_gauss_means(const VectorRef& centers, double sigma, std::span<const Interval> bounds,
                       Eigen::VectorXd& out) {
  if (static_cast<std::size_t>(centers.size()) != bounds.size()) {
    throw std::invalid_argument("trunc_gauss_means: length mismatch");
  }
  out.resize(centers.size());
  for (Eigen::Index m = 0; m < centers.size(); ++m) {
    out[m] = special::trunc_gauss_mean(centers[m], sigma, bounds[static_cast<std::size_t>(m)]);
  }
}

void gig_moments(const VectorRef& x2, double eta, double eps, Eigen::VectorXd& inv_alpha,
                 Eigen::VectorXd& alpha) {
  inv_alpha.resize(x2.size());
  alpha.resize(x2.size());
  for (Eigen::Index n = 0; n < x2.size(); ++n) {
    inv_alpha[n] = special::gig_moment(-1, x2[n], eta, eps);
    alpha[n] = special::gig_moment(1, x2[n], eta, eps);
  }
}

}  // namespace qcs::kernels::serial
