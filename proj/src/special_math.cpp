#include "qcs/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

namespace qcs::special {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
constexpr double kSqrtHalfPi = 1.2533141373155002512078826424055226;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kEulerGamma = 0.5772156649015328606065120900824024;

// Mean of the standard normal truncated to [l, u] with 0 <= l < u <= inf.
double upper_tail_mean(double l, double u) {
  if (std::isinf(u)) return 1.0 / mills_ratio(l);
  // phi(u) / phi(l) = exp(-(u - l)(u + l) / 2)
  const double log_r = -0.5 * (u - l) * (u + l);
  const double one_minus_r = -std::expm1(log_r);
  const double den = mills_ratio(l) - std::exp(log_r) * mills_ratio(u);
  return one_minus_r / den;
}

double standardized_mean(double l, double u) {
  const double width = u - l;
  const double center = 0.5 * (l + u);
  // Narrow window: the density is nearly log-linear across it.
  if (std::isfinite(width) && width * std::max(1.0, std::abs(center)) < 1e-4) {
    return center - center * width * width / 12.0;
  }
  if (l >= 0.0) return upper_tail_mean(l, u);
  if (u <= 0.0) return -upper_tail_mean(-u, -l);
  const double num = std_normal_pdf(l) - std_normal_pdf(u);
  const double den = 1.0 - std_normal_sf(u) - std_normal_sf(-l);
  return num / den;
}

// 1/Gamma(1 + mu), 1/Gamma(1 - mu) and the Temme combinations
// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  TemmeGammas g{};
  if (std::abs(mu) < 1e-3) {
    // Taylor coefficients of 1/Gamma(z) about 0 (shifted by one power).
    constexpr double c2 = -0.6558780715202538810770195151453905;
    constexpr double c3 = -0.0420026350340952355290039348754298;
    constexpr double c4 = 0.1665386113822914895017007951021052;
    constexpr double c5 = -0.0421977345555443367482083012891874;
    const double m2 = mu * mu;
    const double even = 1.0 + c2 * m2 + c4 * m2 * m2;
    const double odd = mu * (kEulerGamma + c3 * m2 + c5 * m2 * m2);
    g.gampl = even + odd;
    g.gammi = even - odd;
    g.gam1 = -(kEulerGamma + c3 * m2 + c5 * m2 * m2);
    g.gam2 = even;
  } else {
    g.gampl = 1.0 / std::tgamma(1.0 + mu);
    g.gammi = 1.0 / std::tgamma(1.0 - mu);
    g.gam1 = (g.gammi - g.gampl) / (2.0 * mu);
    g.gam2 = 0.5 * (g.gammi + g.gampl);
  }
  return g;
}

double checked_gig_args(int order, double x2, double eta, double eps) {
  if (order != 1 && order != -1) {
    throw std::invalid_argument("gig_moment: only orders +1 and -1 are supported, got " +
                                std::to_string(order));
  }
  if (!(x2 > 0.0) || !(eta > 0.0)) {
    throw std::invalid_argument("gig_moment: x2 and eta must be strictly positive");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("gig_moment: eps must lie in [0, 1]");
  }
  return std::max(std::sqrt(2.0 * eta * x2), kGigArgFloor);
}

}  // namespace

double std_normal_pdf(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

double std_normal_cdf(double u) { return 0.5 * std::erfc(-u / kSqrt2); }

double std_normal_sf(double u) { return 0.5 * std::erfc(u / kSqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw std::domain_error("std_normal_quantile: p outside [0, 1]");
  }
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double erfcx(double x) {
  if (x < 0.0) throw std::domain_error("erfcx: negative argument");
  if (x < 25.0) {
    // exp(x^2) with the rounding error of x*x folded back in.
    const double sq = x * x;
    const double sq_err = std::fma(x, x, -sq);
    return std::exp(sq) * (1.0 + sq_err) * std::erfc(x);
  }
  // Asymptotic series; terms below 1e-18 relative by x = 25.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 10; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    sum += term;
  }
  return sum / (x * std::sqrt(std::numbers::pi));
}

double mills_ratio(double t) { return kSqrtHalfPi * erfcx(t / kSqrt2); }

double trunc_gauss_mean(double mu, double sigma, Interval bounds) {
  if (!(bounds.lower <= bounds.upper)) {
    throw std::invalid_argument("trunc_gauss_mean: lower bound exceeds upper bound");
  }
  if (!(sigma >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("trunc_gauss_mean: need finite mu and sigma >= 0");
  }
  if (bounds.lower == bounds.upper) return bounds.lower;
  if (sigma == 0.0) return std::clamp(mu, bounds.lower, bounds.upper);

  const double l = (bounds.lower - mu) / sigma;
  const double u = (bounds.upper - mu) / sigma;
  if (!(l < u)) return std::clamp(mu, bounds.lower, bounds.upper);

  double m = standardized_mean(l, u);
  m = std::clamp(m, l, u);
  return std::clamp(mu + sigma * m, bounds.lower, bounds.upper);
}

double bessel_k_ratio(double nu, double x) {
  if (!(std::abs(nu) <= 0.5)) throw std::domain_error("bessel_k_ratio: |nu| must be <= 1/2");
  if (!(x > 0.0)) throw std::domain_error("bessel_k_ratio: x must be positive");
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100000;
  const double nu2 = nu * nu;

  if (x < 2.0) {
    // Temme's series for K_nu and K_{nu+1}.
    const double half_x = 0.5 * x;
    const double pimu = std::numbers::pi * nu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    const double d = -std::log(half_x);
    const double e = nu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(nu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    const double ee = std::exp(e);
    double p = 0.5 * ee / g.gampl;
    double q = 0.5 / (ee * g.gammi);
    double c = 1.0;
    const double dd = half_x * half_x;
    double sum1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
      const double di = i;
      ff = (di * ff + p + q) / (di * di - nu2);
      c *= dd / di;
      p /= di - nu;
      q /= di + nu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    // K_{nu+1} = sum1 * 2/x
    return sum1 * (2.0 / x) / sum;
  }

  // Steed's algorithm for CF2; h yields K_{nu+1}/K_nu without exp(-x).
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - nu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps && std::abs(delh) < std::abs(h) * kEps) break;
  }
  h *= a1;
  return (nu + x + 0.5 - h) / x;
}

double gig_moment(int order, double x2, double eta, double eps) {
  const double s = checked_gig_args(order, x2, eta, eps);
  if (eps != 0.0) return gig_moment_general(order, x2, eta, eps);
  const double scale = std::sqrt(x2 / (2.0 * eta));
  // K_{1/2} = K_{-1/2} and K_{3/2}/K_{1/2} = 1 + 1/s
  if (order == 1) return scale;
  return (1.0 + 1.0 / s) / scale;
}

double gig_moment_general(int order, double x2, double eta, double eps) {
  const double s = checked_gig_args(order, x2, eta, eps);
  const double scale = std::sqrt(x2 / (2.0 * eta));
  const double nu0 = eps - 0.5;
  if (order == 1) return scale * bessel_k_ratio(nu0, s);
  // K_{nu0-1}/K_{nu0} = K_{1-nu0}/K_{-nu0}
  return bessel_k_ratio(-nu0, s) / scale;
}

}  // namespace qcs::special
