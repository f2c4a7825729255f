#include "qcs/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qcs {

namespace {
[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument("Problem: " + what);
}
}  // namespace

void Problem::validate() const {
  quantizer.validate();
  const auto M = A.rows();
  const auto N = A.cols();
  if (M == 0 || N == 0) reject("empty sensing matrix");
  if (z.size() != M) reject("z has " + std::to_string(z.size()) + " entries, A has " + std::to_string(M) + " rows");
  if (static_cast<Eigen::Index>(bins.size()) != M) reject("bin vector length does not match A");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) reject("sigma2 must be finite and >= 0");
  if (!A.allFinite()) reject("A has non-finite entries");
  for (Eigen::Index m = 0; m < M; ++m) {
    const int b = bins[m];
    if (b < 0 || b >= static_cast<int>(quantizer.levels())) {
      reject("bin index out of range at measurement " + std::to_string(m));
    }
    if (!one_bit() && z[m] != quantizer.codes[b]) {
      reject("z[" + std::to_string(m) + "] is not the code of its bin");
    }
  }
  if (one_bit()) {
    if (static_cast<Eigen::Index>(signs.size()) != M) reject("one-bit problem needs a sign per measurement");
    for (Eigen::Index m = 0; m < M; ++m) {
      if (signs[m] != 1 && signs[m] != -1) reject("sign at measurement " + std::to_string(m) + " is not +-1");
      if (z[m] != 0.0) reject("one-bit observation must be z = 0");
      if ((bins[m] == 1) != (signs[m] == 1)) reject("sign and bin disagree at measurement " + std::to_string(m));
    }
    if (!std::holds_alternative<SignDomain>(domain)) reject("one-bit problem needs a sign domain");
    if (std::get<SignDomain>(domain).signs != signs) reject("sign domain does not match signs");
  } else {
    const auto* box = std::get_if<BoxDomain>(&domain);
    if (box == nullptr || static_cast<Eigen::Index>(box->intervals.size()) != M) {
      reject("multi-bit problem needs one interval per measurement");
    }
  }
  if (truth && truth->size() != N) reject("truth length does not match A");
  if (measurements && measurements->size() != M) reject("measurement length does not match A");
}

Problem make_problem(Eigen::MatrixXd A, const QuantizerSpec& q, const Eigen::VectorXd& y,
                     double sigma2, std::optional<Eigen::VectorXd> truth) {
  if (y.size() != A.rows()) reject("y length does not match A");
  const Quantized qz = quantize(q, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
  Problem p;
  p.A = std::move(A);
  p.z = Eigen::Map<const Eigen::VectorXd>(qz.codes.data(), static_cast<Eigen::Index>(qz.codes.size()));
  p.bins = qz.bins;
  p.signs = qz.signs;
  p.sigma2 = sigma2;
  p.quantizer = q;
  p.domain = error_domain(q, p.bins);
  p.truth = std::move(truth);
  p.measurements = y;
  p.validate();
  return p;
}

Problem make_problem_from_bins(Eigen::MatrixXd A, const QuantizerSpec& q, std::vector<int> bins,
                               double sigma2) {
  Problem p;
  p.A = std::move(A);
  p.quantizer = q;
  p.sigma2 = sigma2;
  p.domain = error_domain(q, bins);
  p.z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(bins.size()));
  if (p.one_bit()) {
    p.signs = std::get<SignDomain>(p.domain).signs;
  } else {
    for (std::size_t m = 0; m < bins.size(); ++m) p.z[static_cast<Eigen::Index>(m)] = q.codes[bins[m]];
  }
  p.bins = std::move(bins);
  p.validate();
  return p;
}

void PriorConfig::validate() const {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("PriorConfig: eps must lie in [0, 1]");
  if (!(c >= 0.0) || !(d >= 0.0)) throw std::invalid_argument("PriorConfig: c and d must be >= 0");
  if (!(c > 0.0 || eps > 0.0)) throw std::invalid_argument("PriorConfig: need c > 0 or eps > 0 for a proper eta update");
}

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::multi_bit: return "multibit";
    case SolverMode::one_bit: return "onebit";
    case SolverMode::coupled_baseline: return "coupled";
    case SolverMode::oracle: return "oracle";
  }
  return "unknown";
}

SolverMode solver_mode_from_string(const std::string& name) {
  if (name == "multibit") return SolverMode::multi_bit;
  if (name == "onebit") return SolverMode::one_bit;
  if (name == "coupled") return SolverMode::coupled_baseline;
  if (name == "oracle") return SolverMode::oracle;
  throw std::invalid_argument("unknown solver mode '" + name + "'");
}

void SolverConfig::validate() const {
  prior.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(pruning_threshold > 1.0)) throw std::invalid_argument("SolverConfig: pruning_threshold must be > 1");
  if (!(onebit_variance_scale > 0.0)) throw std::invalid_argument("SolverConfig: onebit_variance_scale must be > 0");
}

}  // namespace qcs
