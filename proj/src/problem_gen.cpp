#include "qcs/problem_gen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcs/rng.hpp"

namespace qcs {

void GenSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("GenSpec: " + what); };
  if (K < 1) fail("K must be >= 1");
  if (!(K < M)) fail("need K < M (K=" + std::to_string(K) + ", M=" + std::to_string(M) + ")");
  if (N < 1) fail("N must be >= 1");
  if (K > N) fail("need K <= N");
  if (bit_depth < 1) fail("bit depth must be >= 1");
  if (quantizer_kind == QuantizerKind::one_bit && bit_depth != 1) fail("one-bit quantizer needs B = 1");
  if (quantizer_kind != QuantizerKind::one_bit && bit_depth > 30) fail("bit depth too large");
  if (std::isnan(snr_db) || snr_db == -kInf) fail("snr_db must be a number or +inf");
}

double noise_variance(int M, double snr_db) {
  if (snr_db == kInf) return 0.0;
  return std::pow(10.0, -snr_db / 10.0) / static_cast<double>(M);
}

Instance gen_instance(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.rng_seed);
  Instance inst;
  inst.x = Eigen::VectorXd::Zero(spec.N);
  for (int n : rng.choose(spec.N, spec.K)) inst.x[n] = rng.normal();
  inst.x /= inst.x.norm();

  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.M));
  inst.A.resize(spec.M, spec.N);
  for (int m = 0; m < spec.M; ++m) {
    for (int n = 0; n < spec.N; ++n) inst.A(m, n) = scale * rng.normal();
  }
  inst.sigma2 = noise_variance(spec.M, spec.snr_db);
  inst.y_clean = inst.A * inst.x;
  inst.y = inst.y_clean;
  if (inst.sigma2 > 0.0) {
    const double sd = std::sqrt(inst.sigma2);
    for (int m = 0; m < spec.M; ++m) inst.y[m] += sd * rng.normal();
  }
  return inst;
}

QuantizerSpec quantizer_for(const GenSpec& spec, const Instance& inst) {
  switch (spec.quantizer_kind) {
    case QuantizerKind::uniform_unsaturated: return make_uniform(spec.bit_depth, inst.y.cwiseAbs().maxCoeff());
    case QuantizerKind::saturated:
      return make_saturated_equiprobable(spec.bit_depth, 1.0 / spec.M + inst.sigma2);
    case QuantizerKind::one_bit: return make_onebit();
  }
  throw std::logic_error("unknown quantizer kind");
}

Problem gen_problem(const GenSpec& spec) {
  Instance inst = gen_instance(spec);
  const QuantizerSpec q = quantizer_for(spec, inst);
  return make_problem(std::move(inst.A), q, inst.y, inst.sigma2, std::move(inst.x));
}

double rsnr(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  if (x.size() != x_hat.size()) throw std::invalid_argument("rsnr: length mismatch");
  const double err = (x - x_hat).norm();
  if (err == 0.0) return kInf;
  return -20.0 * std::log10(err);
}

int support_size(const Eigen::VectorXd& x_hat, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("support_size: threshold must be >= 0");
  int count = 0;
  for (Eigen::Index n = 0; n < x_hat.size(); ++n) count += std::abs(x_hat[n]) > threshold ? 1 : 0;
  return count;
}

double sign_flip_rate(std::span<const double> y0, std::span<const double> y) {
  if (y0.size() != y.size()) throw std::invalid_argument("sign_flip_rate: length mismatch");
  if (y0.empty()) return 0.0;
  std::size_t flips = 0;
  for (std::size_t m = 0; m < y0.size(); ++m) flips += sign_of(y0[m]) != sign_of(y[m]) ? 1 : 0;
  return static_cast<double>(flips) / static_cast<double>(y0.size());
}

}  // namespace qcs
