#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcs::onebit {

/// Euclidean projection of v onto { e : sgn(e) = -signs, ||e||_2 = 1 }.
///
/// With vbar = -signs .* v and I = { m : vbar_m > 0 }: a nonempty I gives
/// v_I / ||v_I|| on I and zeros elsewhere; an empty I gives a single entry
/// -signs[i0] at i0 = argmax vbar (lowest index on ties).
Eigen::VectorXd project_onto_domain(const Eigen::VectorXd& v, std::span<const int> signs);

/// Exhaustive search over a uniform angular grid of the unit sphere restricted
/// to the sign orthant (M = 2 or 3). `resolution` is the number of grid steps
/// per quarter turn of each angle. Test oracle for project_onto_domain.
Eigen::VectorXd brute_force_project(const Eigen::VectorXd& v, std::span<const int> signs,
                                    int resolution);

/// Largest distance from any point of the orthant arc/patch to its nearest
/// grid point of brute_force_project at `resolution`.
double grid_discretization_bound(int dimension, int resolution);

}  // namespace qcs::onebit
