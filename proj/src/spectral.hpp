#ifndef BDMAP_SPECTRAL_HPP
#define BDMAP_SPECTRAL_HPP

#include <vector>

#include "boundary.hpp"
#include "potential.hpp"
#include "types.hpp"

namespace bdmap {

// Self-adjoint setting: real potential, real angles. Angles enter mod pi.

struct EigenvalueList {
  std::vector<double> values;        // strictly increasing
  double theta0 = 0.0, thetaR = 0.0;
  int count_requested = 0;
  // sup_k |sqrt(max(lambda_k,0)) - k pi / R| over the computed range, and the
  // sharper k-weighted constant against the phase-shifted prediction.
  double index_bound = 0.0;
  double asymptotic_constant = 0.0;
};

// Lowest n eigenvalues of H_{theta0,thetaR}, each a sign-change-bracketed
// root of the characteristic determinant refined to width <= tol*max(1,|l|).
EigenvalueList eigenvalues(const Potential& pot, const BoundaryAngles& angles,
                           int n, double tol);

// All eigenvalues <= lambda_max.
std::vector<double> eigenvalues_up_to(const Potential& pot,
                                      const BoundaryAngles& angles,
                                      double lambda_max, double tol);

struct TraceDiffResult {
  cx value;          // index-paired eigenvalue sum plus fitted tail estimate
  cx partial_sum;    // sum over the first n_terms only
  cx tail_estimate;
  double tail_bound; // uncertainty of the tail estimate
};

// tr[(H_primed - z)^{-1} - (H_base - z)^{-1}] by eigenvalue summation.
TraceDiffResult trace_resolvent_diff(const Potential& pot,
                                     const BoundaryAngles& base,
                                     const BoundaryAngles& primed, cx z,
                                     int n_terms, double tol);

struct LogDetDerivative {
  cx value;              // -d/dz ln det Lambda, Richardson-extrapolated
  double error_estimate;
};

LogDetDerivative log_det_derivative(const Potential& pot,
                                    const BoundaryAngles& base,
                                    const BoundaryAngles& primed, cx z,
                                    double h, double tol);

struct SpectralShift {
  std::vector<double> breakpoints;   // merged eigenvalues up to the grid end
  std::vector<int> values;           // one per interval between breakpoints,
                                     // plus the leading interval (index 0)
  int eta = 1;                       // sign convention applied to det Lambda
  std::vector<double> grid;          // caller's evaluation points
  std::vector<int> grid_values;
  std::vector<double> residuals;     // |phase/pi - nearest integer| per point
  double base_theta0 = 0.0, base_thetaR = 0.0;
  double primed_theta0 = 0.0, primed_thetaR = 0.0;

  int value_at(double lambda) const;
};

// xi(lambda) = pi^{-1} lim Im ln(eta det Lambda(lambda + i eps)), phase
// tracked continuously from a real anchor below both spectra.
SpectralShift spectral_shift(const Potential& pot, const BoundaryAngles& base,
                             const BoundaryAngles& primed,
                             const std::vector<double>& lambda_grid,
                             const std::vector<double>& eps_schedule,
                             double tol);

// Counting-function difference N(lambda; H_base) - N(lambda; H_primed).
int ssf_counting_oracle(const Potential& pot, const BoundaryAngles& base,
                        const BoundaryAngles& primed, double lambda,
                        double tol = 1e-10);

}  // namespace bdmap

#endif
