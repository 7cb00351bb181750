#ifndef BDMAP_POSITIVE_TYPE_HPP
#define BDMAP_POSITIVE_TYPE_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace bdmap {

using DenseMatrix = Eigen::MatrixXcd;

struct PositiveTypeDiagnostics {
  bool neg_axis_in_resolvent = false;
  double M_A_estimate = 0.0;        // sampled sup of (1+t)||(A+t)^{-1}||
  double sector_angle_estimate = 0.0;
  double shift_t0 = 0.0;
};

// Checks (-inf, 0] against the spectrum and samples the resolvent bound on
// the given t grid. The estimates are sampled suprema, not certificates.
PositiveTypeDiagnostics positive_type_diagnostics(
    const DenseMatrix& A, const std::vector<double>& t_grid);

std::vector<double> default_t_grid(const DenseMatrix& A, int points = 200);

struct QuadConfig {
  double tol = 1e-12;
  int min_panels = 8;
  int max_panels = 4096;
  int nodes_per_panel = 16;
};

// A^{-alpha} for 0 < Re(alpha) < 2 by real-line resolvent quadrature after
// the substitution t = e^s, panels doubled to convergence.
DenseMatrix frac_power_neg(const DenseMatrix& A, std::complex<double> alpha,
                           const QuadConfig& quad = {});

// A^{1/2} = A * A^{-1/2}.
DenseMatrix sqrt_op(const DenseMatrix& A, const QuadConfig& quad = {});

// det((A - z)^{1/2} (A0 - z)^{-1} (A - z)^{1/2}) for real z below both
// numerical ranges.
std::complex<double> sym_det_matrix(const DenseMatrix& A, const DenseMatrix& A0,
                                    double z, const QuadConfig& quad = {});

// | -d/dz ln sym_det (central difference) - tr((A-z)^{-1} - (A0-z)^{-1}) |
double trace_formula_residual(const DenseMatrix& A, const DenseMatrix& A0,
                              double z, double h, const QuadConfig& quad = {});

// || A^{-a1} A^{-a2} - A^{-(a1+a2)} ||_2
double semigroup_check(const DenseMatrix& A, std::complex<double> a1,
                       std::complex<double> a2, const QuadConfig& quad = {});

// Hermitian positive definite oracle: A^alpha by eigendecomposition.
DenseMatrix spectral_oracle_power(const DenseMatrix& A,
                                  std::complex<double> alpha);

}  // namespace bdmap

#endif
