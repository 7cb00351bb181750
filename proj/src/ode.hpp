#ifndef BDMAP_ODE_HPP
#define BDMAP_ODE_HPP

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "potential.hpp"
#include "types.hpp"

namespace bdmap {

// Values of the fundamental system at x = R: solutions of -u'' + Vu = zu with
// theta(z,0) = phi'(z,0) = 1, theta'(z,0) = phi(z,0) = 0. All four share one
// rescaling exponent; true values are the stored ones times exp(log_scale).
struct FundamentalValues {
  cx theta, theta_prime, phi, phi_prime;
  double log_scale = 0.0;

  // theta*phi' - theta'*phi == exp(-2*log_scale) for the stored mantissas.
  cx wronskian_scaled() const {
    return (theta * phi_prime - theta_prime * phi) * std::exp(2.0 * log_scale);
  }
};

// A solution (or resolvent image) sampled on an ascending grid covering
// [0, R], with derivative values. Values are plain (log_scale folded in and
// kept at zero) for every constructor in this library.
struct SolutionPath {
  std::vector<double> grid;
  std::vector<cx> u;
  std::vector<cx> du;
  double log_scale = 0.0;

  double x_min() const { return grid.front(); }
  double x_max() const { return grid.back(); }
  std::size_t locate(double x) const;
  cx value_at(double x) const;
  cx deriv_at(double x) const;
};

inline constexpr int kDefaultPathIntervals = 1024;

FundamentalValues propagate_fundamental(const Potential& pot, cx z, double tol);

// Unique solution with gamma_{theta0,thetaR}(u) = [c0; cR].
SolutionPath solve_with_boundary_data(const Potential& pot, cx z,
                                      const BoundaryAngles& angles, cx c0, cx cR,
                                      double tol,
                                      int n_intervals = kDefaultPathIntervals);

// (u_plus, u_minus): u_plus(z,0) = 1 with the thetaR condition at R;
// u_minus(z,R) = 1 with the theta0 condition at 0.
std::pair<SolutionPath, SolutionPath> u_plus_minus(
    const Potential& pot, cx z, const BoundaryAngles& angles, double tol,
    int n_intervals = kDefaultPathIntervals);

// f g' - f' g at x, with both paths' scales applied.
cx path_wronskian(const SolutionPath& p1, const SolutionPath& p2, double x);

// L^2 inner product, conjugate-linear in the first argument.
cx l2_inner(const SolutionPath& p1, const SolutionPath& p2, double tol = 1e-10);

// Plain (bilinear) product integral, no conjugation.
cx path_product_integral(const SolutionPath& p1, const SolutionPath& p2);

// Integral of u * f over the path grid; fvals holds f at the grid nodes.
cx integral_against(const SolutionPath& p, const std::vector<cx>& fvals);

// Q_{H_{theta0,thetaR}}(f, g) - z (f, g): the sesquilinear form with cotangent
// boundary terms, Dirichlet variants when sin of an angle vanishes.
cx form_eval(const Potential& pot, const BoundaryAngles& angles,
             const SolutionPath& f, const SolutionPath& g, cx z,
             double tol = 1e-10);

// Utility: sample a closed-form function (value and derivative) on a uniform
// grid over [0, R].
SolutionPath sample_path(const std::function<cx(double)>& f,
                         const std::function<cx(double)>& fp, double R,
                         int n_intervals = kDefaultPathIntervals);

namespace detail {

// Adaptive Dormand-Prince 5(4) propagation of `pairs` coupled (u, u') blocks
// for -u'' + (V - z) u = 0. Splits at sampled-potential breakpoints, rescales
// the state when it exceeds exp(30) and reports each rescale factor so
// recorded history can be kept on the current scale.
void integrate(const Potential& pot, cx z, int pairs, double rtol, double x0,
               double x1, std::array<cx, 4>& y, double& log_scale,
               const std::function<void(double)>& on_rescale = {});

}  // namespace detail

}  // namespace bdmap

#endif
