#ifndef BDMAP_RESOLVENT_HPP
#define BDMAP_RESOLVENT_HPP

#include <functional>

#include "boundary.hpp"
#include "ode.hpp"
#include "potential.hpp"
#include "types.hpp"

namespace bdmap {

using ScalarField = std::function<cx(double)>;

// Workspace shared by the kernel, resolvent and Krein operations: the two
// one-sided solutions for the base boundary condition and their Wronskian.
struct ResolventBasis {
  SolutionPath u_plus;
  SolutionPath u_minus;
  cx wronskian;
};

ResolventBasis resolvent_basis(const Potential& pot, cx z,
                               const BoundaryAngles& angles, double tol,
                               int n_intervals = kDefaultPathIntervals);

// Green's function G(z, x, x') = u_minus(min) u_plus(max) / W.
cx greens_kernel(const Potential& pot, cx z, const BoundaryAngles& angles,
                 double x, double x_prime, double tol);
cx greens_kernel(const ResolventBasis& basis, double x, double x_prime);

// (H - z)^{-1} f by quadrature against the Green's kernel.
SolutionPath apply_resolvent(const Potential& pot, cx z,
                             const BoundaryAngles& angles, const ScalarField& f,
                             double tol,
                             int n_intervals = kDefaultPathIntervals);

// gamma_{primed} (H_base - z)^{-1} f via the closed boundary-row formulas:
// trigonometric prefactors times inner products against u_plus/u_minus.
BoundaryVector boundary_rows(const Potential& pot, cx z,
                             const BoundaryAngles& base,
                             const BoundaryAngles& primed, const ScalarField& f,
                             double tol,
                             int n_intervals = kDefaultPathIntervals);

// Same rows with f given as a sampled path (no conjugation is applied to f).
BoundaryVector boundary_rows(const ResolventBasis& basis,
                             const BoundaryAngles& base,
                             const BoundaryAngles& primed,
                             const SolutionPath& f);

// Resolvent of the primed operator assembled from the base resolvent plus a
// rank <= 2 boundary correction; handles the regimes where both angles, only
// thetaR, only theta0, or neither differ.
SolutionPath krein_resolvent(const Potential& pot, cx z,
                             const BoundaryAngles& base,
                             const BoundaryAngles& primed, const ScalarField& f,
                             double tol,
                             int n_intervals = kDefaultPathIntervals);

// Max-norm residual between the derivative of Lambda*S (central difference in
// z) and the boundary-row representation of gamma'(H-z)^{-1}[gamma'(H-z)^{-1}]*.
double lambda_derivative_identity(const Potential& pot, cx z,
                                  const BoundaryAngles& base,
                                  const BoundaryAngles& primed, double h,
                                  double tol);

// Trace of the rank <= 2 Krein correction (diagonal integral); equals
// tr[(H_primed - z)^{-1} - (H_base - z)^{-1}].
cx krein_correction_trace(const Potential& pot, cx z,
                          const BoundaryAngles& base,
                          const BoundaryAngles& primed, double tol);

}  // namespace bdmap

#endif
