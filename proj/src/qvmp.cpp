#include "qcs/qvmp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qcs/onebit.hpp"

namespace qcs {

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iterations: return "max_iterations";
    case SolverStatus::all_pruned: return "all_pruned";
    case SolverStatus::ill_conditioned: return "ill_conditioned";
  }
  return "unknown";
}

IllConditioned::IllConditioned(int iteration, const std::string& what)
    : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what),
      iteration_(iteration),
      reason_(what) {}

namespace {

struct Kernels {
  bool parallel;

  void gram(const kernels::MatrixRef& X, Eigen::MatrixXd& out) const {
    parallel ? kernels::parallel::gram(X, out) : kernels::serial::gram(X, out);
  }
  void cross_gram(const kernels::MatrixRef& X, const kernels::MatrixRef& Y, Eigen::MatrixXd& out) const {
    parallel ? kernels::parallel::cross_gram(X, Y, out) : kernels::serial::cross_gram(X, Y, out);
  }
  void weighted_gram(const kernels::MatrixRef& X, const kernels::VectorRef& w, double shift,
                     Eigen::MatrixXd& out) const {
    parallel ? kernels::parallel::weighted_gram(X, w, shift, out)
             : kernels::serial::weighted_gram(X, w, shift, out);
  }
  void matvec_t(const kernels::MatrixRef& X, const kernels::VectorRef& v, Eigen::VectorXd& out) const {
    parallel ? kernels::parallel::matvec_t(X, v, out) : kernels::serial::matvec_t(X, v, out);
  }
  void trunc_gauss_means(const kernels::VectorRef& c, double sigma, std::span<const Interval> b,
                         Eigen::VectorXd& out) const {
    parallel ? kernels::parallel::trunc_gauss_means(c, sigma, b, out)
             : kernels::serial::trunc_gauss_means(c, sigma, b, out);
  }
  void gig_moments(const kernels::VectorRef& x2, double eta, double eps, Eigen::VectorXd& inv_alpha,
                   Eigen::VectorXd& alpha) const {
    parallel ? kernels::parallel::gig_moments(x2, eta, eps, inv_alpha, alpha)
             : kernels::serial::gig_moments(x2, eta, eps, inv_alpha, alpha);
  }
};

void symmetrize(Eigen::MatrixXd& S) {
  for (Eigen::Index j = 0; j < S.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = 0.5 * (S(i, j) + S(j, i));
      S(i, j) = v;
      S(j, i) = v;
    }
  }
}

double noise_floor(const Eigen::MatrixXd& A) {
  return qvmp::kNoiseFloorFactor * A.colwise().squaredNorm().mean();
}

}  // namespace

namespace qvmp {

double effective_noise_variance(const Problem& problem, const SolverConfig& config) {
  double s2 = problem.sigma2;
  switch (config.mode) {
    case SolverMode::coupled_baseline: {
      const double r = problem.quantizer.bin_width();
      s2 += r * r / 12.0;
      break;
    }
    case SolverMode::one_bit:
      s2 *= config.onebit_variance_scale;
      break;
    case SolverMode::multi_bit:
    case SolverMode::oracle:
      break;
  }
  return s2 > 0.0 ? s2 : noise_floor(problem.A);
}

Eigen::MatrixXd sigma_direct(const kernels::MatrixRef& gram, const kernels::VectorRef& inv_alpha,
                             double sigma2) {
  Eigen::MatrixXd H = gram / sigma2;
  H.diagonal() += inv_alpha;
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) throw IllConditioned(0, "precision matrix is not positive definite");
  Eigen::MatrixXd S = llt.solve(Eigen::MatrixXd::Identity(H.rows(), H.cols()));
  symmetrize(S);
  return S;
}

Eigen::MatrixXd sigma_woodbury(const kernels::MatrixRef& A, const kernels::VectorRef& inv_alpha,
                               double sigma2, bool parallel) {
  const Kernels k{parallel};
  const Eigen::VectorXd lam = inv_alpha.cwiseInverse();
  const Eigen::MatrixXd At = A.transpose();
  Eigen::MatrixXd C;
  k.weighted_gram(At, lam, sigma2, C);
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success) throw IllConditioned(0, "Woodbury matrix C is not positive definite");
  const Eigen::MatrixXd A_lam = A * lam.asDiagonal();
  const Eigen::MatrixXd B = llt.solve(A_lam);
  Eigen::MatrixXd S;
  k.cross_gram(A_lam, B, S);
  S = -S;
  S.diagonal() += lam;
  symmetrize(S);
  return S;
}

double eta_update(const kernels::VectorRef& alpha, const PriorConfig& prior) {
  const auto n = static_cast<double>(alpha.size());
  return (n * prior.eps + prior.c) / (alpha.sum() + prior.d);
}

}  // namespace qvmp

QvmpEngine::QvmpEngine(const Problem& problem, SolverConfig config)
    : problem_(problem), config_(config) {
  problem_.validate();
  config_.validate();
  const bool one_bit_problem = problem_.one_bit();
  switch (config_.mode) {
    case SolverMode::multi_bit:
    case SolverMode::coupled_baseline:
      if (one_bit_problem) throw std::invalid_argument("multi-bit solver modes need a multi-bit quantizer");
      observation_ = problem_.z;
      break;
    case SolverMode::one_bit:
      if (!one_bit_problem) throw std::invalid_argument("one-bit mode needs a one-bit quantizer");
      observation_ = Eigen::VectorXd::Zero(problem_.num_measurements());
      break;
    case SolverMode::oracle:
      if (!problem_.measurements) throw std::invalid_argument("oracle mode needs the unquantized measurements");
      observation_ = *problem_.measurements;
      break;
  }
  sigma2_ = qvmp::effective_noise_variance(problem_, config_);

  const Kernels k{config_.parallel_kernels};
  const Eigen::Index M = problem_.num_measurements();
  const Eigen::Index N = problem_.signal_length();
  k.gram(problem_.A, gram_full_);

  state_.active.resize(static_cast<std::size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n) state_.active[static_cast<std::size_t>(n)] = static_cast<int>(n);
  A_active_ = problem_.A;
  At_active_ = problem_.A.transpose();

  Eigen::VectorXd corr;
  if (config_.mode == SolverMode::one_bit) {
    Eigen::VectorXd s(M);
    for (Eigen::Index m = 0; m < M; ++m) s[m] = problem_.signs[static_cast<std::size_t>(m)];
    k.matvec_t(problem_.A, s, corr);
    const double sqrt_m = std::sqrt(static_cast<double>(M));
    state_.inv_alpha = sqrt_m * corr.cwiseAbs().cwiseMax(qvmp::kInitCorrelationFloor).cwiseInverse();
    state_.e_mean = -s / sqrt_m;
  } else {
    k.matvec_t(problem_.A, observation_, corr);
    state_.inv_alpha = corr.cwiseAbs().cwiseMax(qvmp::kInitCorrelationFloor).cwiseInverse();
    state_.e_mean = Eigen::VectorXd::Zero(M);
  }
  state_.alpha = state_.inv_alpha.cwiseInverse();
  state_.eta = 1.0;
  state_.mu = Eigen::VectorXd::Zero(N);
  alpha_tilde_ = state_.inv_alpha.cwiseInverse();
}

void QvmpEngine::update_sigma() {
  const auto na = static_cast<Eigen::Index>(state_.active.size());
  try {
    if (na > problem_.num_measurements()) {
      state_.Sigma = qvmp::sigma_woodbury(A_active_, state_.inv_alpha, sigma2_, config_.parallel_kernels);
    } else {
      Eigen::MatrixXd g(na, na);
      for (Eigen::Index j = 0; j < na; ++j) {
        for (Eigen::Index i = 0; i < na; ++i) {
          g(i, j) = gram_full_(state_.active[static_cast<std::size_t>(i)], state_.active[static_cast<std::size_t>(j)]);
        }
      }
      state_.Sigma = qvmp::sigma_direct(g, state_.inv_alpha, sigma2_);
    }
  } catch (const IllConditioned& e) {
    throw IllConditioned(iteration_, e.reason());
  }
  if (!state_.Sigma.allFinite()) throw IllConditioned(iteration_, "posterior covariance is not finite");
}

void QvmpEngine::update_mu() {
  const Kernels k{config_.parallel_kernels};
  Eigen::VectorXd g;
  k.matvec_t(A_active_, observation_ - state_.e_mean, g);
  Eigen::VectorXd mu;
  k.matvec_t(state_.Sigma, g, mu);  // Sigma is symmetric
  state_.mu = mu / sigma2_;
}

void QvmpEngine::update_alpha() {
  const Kernels k{config_.parallel_kernels};
  const Eigen::VectorXd x2 =
      (state_.mu.array().square() + state_.Sigma.diagonal().array()).max(qvmp::kSecondMomentFloor).matrix();
  k.gig_moments(x2, state_.eta, config_.prior.eps, state_.inv_alpha, state_.alpha);
}

void QvmpEngine::update_eta() { state_.eta = qvmp::eta_update(state_.alpha, config_.prior); }

Eigen::VectorXd QvmpEngine::residual() const {
  const Kernels k{config_.parallel_kernels};
  Eigen::VectorXd a_mu;
  k.matvec_t(At_active_, state_.mu, a_mu);
  return observation_ - a_mu;
}

void QvmpEngine::update_e() {
  switch (config_.mode) {
    case SolverMode::multi_bit: {
      const Kernels k{config_.parallel_kernels};
      const auto& box = std::get<BoxDomain>(problem_.domain);
      k.trunc_gauss_means(residual(), std::sqrt(sigma2_), box.intervals, state_.e_mean);
      break;
    }
    case SolverMode::one_bit:
      state_.e_mean = onebit::project_onto_domain(residual(), problem_.signs);
      break;
    case SolverMode::coupled_baseline:
    case SolverMode::oracle:
      break;  // e stays at zero
  }
}

int QvmpEngine::prune() {
  const auto na = static_cast<Eigen::Index>(state_.active.size());
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(na));
  for (Eigen::Index j = 0; j < na; ++j) {
    if (!(state_.inv_alpha[j] > config_.pruning_threshold)) keep.push_back(j);
  }
  const int removed = static_cast<int>(na - static_cast<Eigen::Index>(keep.size()));
  if (removed == 0) return 0;

  const auto nk = static_cast<Eigen::Index>(keep.size());
  PosteriorState next;
  next.eta = state_.eta;
  next.e_mean = state_.e_mean;
  next.mu.resize(nk);
  next.inv_alpha.resize(nk);
  next.alpha.resize(nk);
  next.Sigma.resize(nk, nk);
  for (Eigen::Index a = 0; a < nk; ++a) {
    const Eigen::Index src = keep[static_cast<std::size_t>(a)];
    next.active.push_back(state_.active[static_cast<std::size_t>(src)]);
    next.mu[a] = state_.mu[src];
    next.inv_alpha[a] = state_.inv_alpha[src];
    next.alpha[a] = state_.alpha[src];
    for (Eigen::Index b = 0; b < nk; ++b) next.Sigma(a, b) = state_.Sigma(src, keep[static_cast<std::size_t>(b)]);
  }
  state_ = std::move(next);
  rebuild_active_matrices();
  return removed;
}

void QvmpEngine::rebuild_active_matrices() {
  const auto na = static_cast<Eigen::Index>(state_.active.size());
  A_active_.resize(problem_.num_measurements(), na);
  for (Eigen::Index j = 0; j < na; ++j) A_active_.col(j) = problem_.A.col(state_.active[static_cast<std::size_t>(j)]);
  At_active_ = A_active_.transpose();
}

double QvmpEngine::objective() const {
  if (state_.active.empty()) return 0.5 * (observation_ - state_.e_mean).squaredNorm() / sigma2_;
  const double prior_term = 0.5 * (state_.inv_alpha.array() * state_.mu.array().square()).sum();
  const double fit = (residual() - state_.e_mean).squaredNorm();
  return prior_term + 0.5 * fit / sigma2_;
}

Eigen::VectorXd QvmpEngine::estimate() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(problem_.signal_length());
  for (std::size_t j = 0; j < state_.active.size(); ++j) {
    x[state_.active[j]] = state_.mu[static_cast<Eigen::Index>(j)];
  }
  return x;
}

IterationRecord QvmpEngine::make_record() const {
  IterationRecord r;
  r.iteration = iteration_;
  r.objective = objective();
  r.e_norm = state_.e_mean.norm();
  double violation = 0.0;
  if (const auto* box = std::get_if<BoxDomain>(&problem_.domain); box && config_.mode == SolverMode::multi_bit) {
    for (Eigen::Index m = 0; m < state_.e_mean.size(); ++m) {
      const Interval& iv = box->intervals[static_cast<std::size_t>(m)];
      violation = std::max({violation, iv.lower - state_.e_mean[m], state_.e_mean[m] - iv.upper});
    }
  } else if (config_.mode == SolverMode::one_bit) {
    violation = std::abs(r.e_norm - 1.0);
    for (Eigen::Index m = 0; m < state_.e_mean.size(); ++m) {
      violation = std::max(violation, state_.e_mean[m] * problem_.signs[static_cast<std::size_t>(m)]);
    }
  }
  r.e_violation = violation;
  return r;
}

bool QvmpEngine::iterate() {
  ++iteration_;
  update_sigma();
  update_mu();
  update_alpha();
  update_eta();
  update_e();
  if (config_.record_trace) last_record_ = make_record();
  prune();

  // alpha-tilde over the survivors; pruned coordinates are zero in both iterates.
  const Eigen::Index N = problem_.signal_length();
  Eigen::VectorXd next = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(N);
  for (std::size_t j = 0; j < state_.active.size(); ++j) {
    const int n = state_.active[j];
    next[n] = 1.0 / state_.inv_alpha[static_cast<Eigen::Index>(j)];
    prev[n] = alpha_tilde_[n];
  }
  const double denom = prev.norm();
  last_change_ = denom > 0.0 ? (next - prev).norm() / denom : 0.0;
  alpha_tilde_ = std::move(next);
  last_record_.active_count = static_cast<int>(state_.active.size());
  last_record_.alpha_change = last_change_;
  return !state_.active.empty() && last_change_ < config_.tol;
}

RecoveryResult QvmpEngine::run() {
  const auto start = std::chrono::steady_clock::now();
  RecoveryResult result;
  result.status = SolverStatus::max_iterations;
  try {
    while (iteration_ < config_.max_iters) {
      const bool done = iterate();
      result.active_count_trace.push_back(static_cast<int>(state_.active.size()));
      if (config_.record_trace) result.trace.push_back(last_record_);
      if (state_.active.empty()) {
        result.status = SolverStatus::all_pruned;
        break;
      }
      if (done) {
        result.status = SolverStatus::converged;
        break;
      }
    }
  } catch (const IllConditioned& e) {
    result.status = SolverStatus::ill_conditioned;
    result.failed_iteration = e.iteration();
  }
  result.iterations = iteration_;
  result.converged = result.status == SolverStatus::converged;
  result.final_alpha_change = last_change_;
  result.x_hat = estimate();
  if (config_.mode == SolverMode::one_bit) {
    const double norm = result.x_hat.norm();
    if (norm > 0.0) result.x_hat /= norm;
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RecoveryResult run_qvmp(const Problem& problem, const SolverConfig& config) {
  QvmpEngine engine(problem, config);
  return engine.run();
}

}  // namespace qcs
