#pragma once

#include <limits>

namespace qcs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Extended-real interval; either endpoint may be infinite.
struct Interval {
  double lower = -kInf;
  double upper = kInf;

  bool contains_closed(double v) const { return v >= lower && v <= upper; }
  bool bounded() const { return lower > -kInf && upper < kInf; }
};

namespace special {

double std_normal_pdf(double u);
double std_normal_cdf(double u);

/// Upper tail 1 - Phi(u), accurate for large positive u.
double std_normal_sf(double u);

/// Inverse of Phi; 0 and 1 map to -inf and +inf.
double std_normal_quantile(double p);

/// exp(x^2) * erfc(x); finite for all x >= 0.
double erfcx(double x);

/// Mills ratio (1 - Phi(t)) / phi(t) for t >= 0.
double mills_ratio(double t);

/// Mean of N(mu, sigma^2) truncated to `bounds`.
///
/// Same-side truncations are evaluated through the Mills ratio so that
/// far-tail bounds (e.g. standardized bounds beyond +-60, or sigma -> 0)
/// do not cancel to 0/0. The result is clamped into the closed interval.
double trunc_gauss_mean(double mu, double sigma, Interval bounds);

/// Ratio K_{nu+1}(x) / K_nu(x) of modified Bessel functions of the second
/// kind for |nu| <= 1/2 and x > 0 (Temme series below x = 2, Steed's
/// continued fraction above). Never forms the unscaled K values for x >= 2.
double bessel_k_ratio(double nu, double x);

/// Lower clamp on s = sqrt(2 * eta * x2) inside the GIG moments.
inline constexpr double kGigArgFloor = 1e-12;

/// <alpha^order> for the GIG posterior of a precision parameter with
/// shape eps, <x^2> = x2 and <eta> = eta. Only order = +1 / -1 are supported.
/// eps == 0 takes the exact half-integer closed form.
double gig_moment(int order, double x2, double eta, double eps);

/// Same moment, always through bessel_k_ratio (no half-integer shortcut).
double gig_moment_general(int order, double x2, double eta, double eps);

}  // namespace special
}  // namespace qcs
