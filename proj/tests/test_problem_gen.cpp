#include <cmath>
#include <vector>

#include <doctest.h>

#include "qcs/problem_gen.hpp"
#include "qcs/rng.hpp"
#include "qcs/serialize.hpp"

using namespace qcs;

namespace {
GenSpec base(std::uint64_t seed) {
  GenSpec g;
  g.N = 60;
  g.K = 5;
  g.M = 30;
  g.snr_db = 20.0;
  g.bit_depth = 3;
  g.rng_seed = seed;
  return g;
}
}  // namespace

TEST_CASE("rng is reproducible and splits seeds") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  CHECK(trial_seed(1, 400, 0) != trial_seed(1, 400, 1));
  CHECK(trial_seed(1, 400, 0) != trial_seed(1, 700, 0));
  CHECK(trial_seed(1, 400, 0) != trial_seed(2, 400, 0));
  CHECK(trial_seed(1, 400, 3) == trial_seed(1, 400, 3));
  // Published splitmix64 output for state 0.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  const auto idx = Rng(3).choose(10, 4);
  CHECK(idx.size() == 4);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  CHECK_THROWS_AS(Rng(3).choose(3, 4), std::invalid_argument);
}

TEST_CASE("rng moments") {
  Rng r(9);
  const int n = 200000;
  double s = 0, s2 = 0, u = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    u += r.uniform();
  }
  CHECK(std::abs(s / n) < 4 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1) < 4 * std::sqrt(2.0 / n));
  CHECK(std::abs(u / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("noise variance follows the SNR definition") {
  CHECK(noise_variance(250, 30.0) == doctest::Approx(4.0e-6).epsilon(1e-14));
  CHECK(noise_variance(100, 0.0) == doctest::Approx(0.01));
  CHECK(noise_variance(100, kInf) == 0.0);
}

TEST_CASE("generated signal is K-sparse with unit norm") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_instance(base(seed));
    CHECK(support_size(inst.x) == 5);
    CHECK(inst.x.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(inst.A.rows() == 30);
    CHECK(inst.A.cols() == 60);
  }
}

TEST_CASE("generation is reproducible byte for byte") {
  const Problem a = gen_problem(base(17));
  const Problem b = gen_problem(base(17));
  CHECK(serialize_problem(a) == serialize_problem(b));
  CHECK(serialize_problem(a) != serialize_problem(gen_problem(base(18))));
}

TEST_CASE("quantizer choice follows the protocol") {
  GenSpec g = base(4);
  const Instance inst = gen_instance(g);
  const QuantizerSpec u = quantizer_for(g, inst);
  CHECK(u.thresholds.back() == inst.y.cwiseAbs().maxCoeff());
  g.quantizer_kind = QuantizerKind::saturated;
  const QuantizerSpec s = quantizer_for(g, inst);
  CHECK(s == make_saturated_equiprobable(3, 1.0 / 30 + inst.sigma2));
  g.quantizer_kind = QuantizerKind::one_bit;
  g.bit_depth = 1;
  const Problem p = gen_problem(g);
  CHECK(p.one_bit());
  for (int m = 0; m < 30; ++m) CHECK(p.signs[m] == sign_of((*p.measurements)[m]));
}

TEST_CASE("measurements have unit energy in expectation") {
  GenSpec g = base(0);
  g.snr_db = kInf;
  const int trials = 4000;
  double sum = 0, sum_sq = 0, col = 0;
  for (int t = 0; t < trials; ++t) {
    g.rng_seed = 5000 + t;
    const Instance inst = gen_instance(g);
    const double e = inst.y_clean.squaredNorm();
    sum += e;
    sum_sq += e * e;
    col += inst.A.squaredNorm() / 60;
  }
  const double mean = sum / trials;
  const double sd = std::sqrt((sum_sq / trials - mean * mean) / trials);
  CHECK(std::abs(mean - 1.0) < 3 * sd);
  // Column energy: chi-square with M dof scaled by 1/M, variance 2/M per column.
  CHECK(std::abs(col / trials - 1.0) < 3 * std::sqrt(2.0 / 30 / 60 / trials));
}

TEST_CASE("GenSpec validation") {
  GenSpec g = base(0);
  g.K = 30;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = base(0);
  g.bit_depth = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = base(0);
  g.quantizer_kind = QuantizerKind::one_bit;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.bit_depth = 1;
  g.M = 500;  // more measurements than unknowns is allowed
  g.validate();
  g.snr_db = std::nan("");
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("rsnr, support size and sign flips") {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x[0] = 1.0;
  Eigen::VectorXd xh = x;
  xh[1] = 0.1;
  CHECK(rsnr(x, xh) == doctest::Approx(20.0));
  xh[1] = 1e-3;
  CHECK(rsnr(x, xh) == doctest::Approx(60.0));
  CHECK(rsnr(x, Eigen::VectorXd::Zero(4)) == doctest::Approx(0.0));
  CHECK(rsnr(x, x) == kInf);

  CHECK(support_size(Eigen::VectorXd::Zero(5)) == 0);
  CHECK(support_size(Eigen::Vector2d(1e-9, 0.5), 1e-6) == 1);
  CHECK_THROWS_AS(support_size(x, -1.0), std::invalid_argument);

  const std::vector<double> y0{1.0, -2.0, 0.0, 3.0};
  const std::vector<double> flipped{-1.0, 2.0, -0.5, -3.0};
  CHECK(sign_flip_rate(y0, y0) == 0.0);
  CHECK(sign_flip_rate(y0, flipped) == 1.0);
}
