#include "qcs/onebit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qcs::onebit {

namespace {
void check_signs(const Eigen::VectorXd& v, std::span<const int> signs) {
  if (v.size() == 0) throw std::invalid_argument("project_onto_domain: empty vector");
  if (static_cast<std::size_t>(v.size()) != signs.size()) {
    throw std::invalid_argument("project_onto_domain: sign pattern length mismatch");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("project_onto_domain: signs must be +-1");
  }
}
}  // namespace

Eigen::VectorXd project_onto_domain(const Eigen::VectorXd& v, std::span<const int> signs) {
  check_signs(v, signs);
  const Eigen::Index M = v.size();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(M);

  double norm_sq = 0.0;
  Eigen::Index i0 = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < M; ++m) {
    const double vbar = -signs[m] * v[m];
    if (vbar > 0.0) {
      e[m] = v[m];
      norm_sq += v[m] * v[m];
    }
    if (vbar > best) {
      best = vbar;
      i0 = m;
    }
  }
  if (norm_sq > 0.0) {
    e /= e.norm();
    return e;
  }
  e[i0] = -signs[i0];
  return e;
}

Eigen::VectorXd brute_force_project(const Eigen::VectorXd& v, std::span<const int> signs,
                                    int resolution) {
  check_signs(v, signs);
  if (v.size() != 2 && v.size() != 3) throw std::invalid_argument("brute_force_project: M must be 2 or 3");
  if (resolution < 1) throw std::invalid_argument("brute_force_project: resolution must be >= 1");

  // Search w = -signs .* e in the nonnegative orthant of the unit sphere.
  Eigen::VectorXd vbar(v.size());
  for (Eigen::Index m = 0; m < v.size(); ++m) vbar[m] = -signs[m] * v[m];

  const double step = 0.5 * std::numbers::pi / resolution;
  Eigen::VectorXd best_w;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& w) {
    const double d = (w - vbar).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best_w = w;
    }
  };
  if (v.size() == 2) {
    for (int a = 0; a <= resolution; ++a) {
      const double t = a * step;
      consider(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
  } else {
    for (int a = 0; a <= resolution; ++a) {
      const double polar = a * step;
      for (int b = 0; b <= resolution; ++b) {
        const double azimuth = b * step;
        consider(Eigen::Vector3d(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                                 std::cos(polar)));
      }
    }
  }
  Eigen::VectorXd e(v.size());
  for (Eigen::Index m = 0; m < v.size(); ++m) e[m] = -signs[m] * best_w[m];
  return e;
}

double grid_discretization_bound(int dimension, int resolution) {
  const double step = 0.5 * std::numbers::pi / resolution;
  // Nearest grid point is within half a step per angle; chord <= arc.
  return dimension == 2 ? 0.5 * step : std::sqrt(2.0) * 0.5 * step;
}

}  // namespace qcs::onebit
