#include <omp.h>

#include <vector>

#include <doctest.h>

#include "qcs/kernels.hpp"
#include "qcs/rng.hpp"

using namespace qcs;
namespace ks = qcs::kernels::serial;
namespace kp = qcs::kernels::parallel;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = rng.normal();
  return X;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, double offset = 0.0) {
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = offset + rng.normal();
  return v;
}

// Large enough that every parallel kernel crosses its work threshold.
constexpr Eigen::Index kRows = 120;
constexpr Eigen::Index kCols = 90;

}  // namespace

TEST_CASE("serial kernels agree with Eigen products") {
  const Eigen::MatrixXd X = random_matrix(kRows, kCols, 1);
  const Eigen::MatrixXd Y = random_matrix(kRows, 17, 2);
  const Eigen::VectorXd w = random_vector(kRows, 3).cwiseAbs();
  const Eigen::VectorXd v = random_vector(kRows, 4);
  Eigen::MatrixXd out;
  ks::gram(X, out);
  CHECK((out - X.transpose() * X).norm() < 1e-10 * out.norm());
  ks::cross_gram(X, Y, out);
  CHECK((out - X.transpose() * Y).norm() < 1e-10 * out.norm());
  ks::weighted_gram(X, w, 0.25, out);
  Eigen::MatrixXd want = X.transpose() * w.asDiagonal() * X;
  want.diagonal().array() += 0.25;
  CHECK((out - want).norm() < 1e-10 * out.norm());
  Eigen::VectorXd r;
  ks::matvec_t(X, v, r);
  CHECK((r - X.transpose() * v).norm() < 1e-10 * r.norm());
}

TEST_CASE("parallel kernels are bit-identical to the serial reference for any thread count") {
  const Eigen::MatrixXd X = random_matrix(kRows, kCols, 5);
  const Eigen::MatrixXd Y = random_matrix(kRows, 60, 6);
  const Eigen::VectorXd w = random_vector(kRows, 7).cwiseAbs();
  const Eigen::VectorXd v = random_vector(kRows, 8);
  const Eigen::VectorXd centers = random_vector(2000, 9);
  std::vector<Interval> bounds(2000);
  Rng rng(10);
  for (auto& b : bounds) {
    const double lo = rng.normal();
    b = {lo, lo + rng.uniform()};
  }
  bounds[3].lower = -kInf;
  bounds[4].upper = kInf;
  const Eigen::VectorXd x2 = random_vector(2000, 11).cwiseAbs2();

  Eigen::MatrixXd g0, c0, w0;
  Eigen::VectorXd m0, t0, ia0, a0, ia0e, a0e;
  ks::gram(X, g0);
  ks::cross_gram(X, Y, c0);
  ks::weighted_gram(X, w, 1e-3, w0);
  ks::matvec_t(X, v, m0);
  ks::trunc_gauss_means(centers, 0.3, bounds, t0);
  ks::gig_moments(x2, 0.8, 0.0, ia0, a0);
  ks::gig_moments(x2, 0.8, 0.3, ia0e, a0e);

  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 4}) {
    CAPTURE(threads);
    omp_set_num_threads(threads);
    Eigen::MatrixXd g, c, wg;
    Eigen::VectorXd m, t, ia, a, iae, ae;
    kp::gram(X, g);
    kp::cross_gram(X, Y, c);
    kp::weighted_gram(X, w, 1e-3, wg);
    kp::matvec_t(X, v, m);
    kp::trunc_gauss_means(centers, 0.3, bounds, t);
    kp::gig_moments(x2, 0.8, 0.0, ia, a);
    kp::gig_moments(x2, 0.8, 0.3, iae, ae);
    CHECK(g == g0);
    CHECK(c == c0);
    CHECK(wg == w0);
    CHECK(m == m0);
    CHECK(t == t0);
    CHECK(ia == ia0);
    CHECK(a == a0);
    CHECK(iae == ia0e);
    CHECK(ae == a0e);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("kernels work on column blocks of a larger matrix") {
  const Eigen::MatrixXd X = random_matrix(kRows, kCols, 12);
  const auto block = X.middleCols(10, 30);
  Eigen::MatrixXd a, b;
  ks::gram(block, a);
  kp::gram(block, b);
  CHECK(a == b);
  CHECK((a - Eigen::MatrixXd(block).transpose() * Eigen::MatrixXd(block)).norm() < 1e-10 * a.norm());
}

TEST_CASE("shape mismatches are rejected") {
  const Eigen::MatrixXd X = random_matrix(5, 3, 13);
  Eigen::MatrixXd out;
  Eigen::VectorXd r;
  CHECK_THROWS_AS(ks::cross_gram(X, random_matrix(4, 2, 1), out), std::invalid_argument);
  CHECK_THROWS_AS(kp::weighted_gram(X, Eigen::VectorXd::Ones(4), 0.0, out), std::invalid_argument);
  CHECK_THROWS_AS(ks::matvec_t(X, Eigen::VectorXd::Ones(4), r), std::invalid_argument);
  std::vector<Interval> bounds(2);
  CHECK_THROWS_AS(kp::trunc_gauss_means(Eigen::VectorXd::Ones(3), 1.0, bounds, r), std::invalid_argument);
}
