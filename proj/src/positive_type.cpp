#include "positive_type.hpp"

#include <cmath>

#include "errors.hpp"

namespace bdmap {

namespace {

using cxd = std::complex<double>;

double op_norm(const DenseMatrix& M) {
  Eigen::JacobiSVD<DenseMatrix> svd(M);
  return svd.singularValues()(0);
}

Eigen::VectorXcd eigenvalues_of(const DenseMatrix& A) {
  Eigen::ComplexEigenSolver<DenseMatrix> es(A, false);
  return es.eigenvalues();
}

void require_positive_type(const DenseMatrix& A) {
  Eigen::VectorXcd ev = eigenvalues_of(A);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    cxd l = ev(i);
    double floor = 1e-12 * (1.0 + std::abs(l));
    if (l.real() <= floor && std::abs(l.imag()) <= floor)
      throw not_positive_type_error(
          "matrix has spectrum on the closed negative real axis");
  }
}

DenseMatrix resolvent_at(const DenseMatrix& A, double t) {
  DenseMatrix M = A + t * DenseMatrix::Identity(A.rows(), A.cols());
  return M.partialPivLu().solve(DenseMatrix::Identity(A.rows(), A.cols()));
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on the Legendre
// recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[static_cast<std::size_t>(i)] = t;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

std::vector<double> default_t_grid(const DenseMatrix& A, int points) {
  double rho = eigenvalues_of(A).cwiseAbs().maxCoeff();
  double T = 10.0 * std::max(rho, 1.0);
  std::vector<double> grid;
  grid.push_back(0.0);
  double lo = std::log(1e-6 * std::max(rho, 1.0));
  double hi = std::log(T);
  for (int i = 0; i < points - 1; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * i / (points - 2)));
  return grid;
}

PositiveTypeDiagnostics positive_type_diagnostics(
    const DenseMatrix& A, const std::vector<double>& t_grid) {
  if (t_grid.empty())
    throw std::invalid_argument("positive_type_diagnostics: empty t grid");
  PositiveTypeDiagnostics d;
  Eigen::VectorXcd ev = eigenvalues_of(A);
  double min_re = 0.0;
  double max_arg = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    cxd l = ev(i);
    double floor = 1e-12 * (1.0 + std::abs(l));
    if (l.real() <= floor && std::abs(l.imag()) <= floor)
      throw not_positive_type_error(
          "spectrum touches the closed negative real axis");
    min_re = std::min(min_re, l.real());
    max_arg = std::max(max_arg, std::abs(std::arg(l)));
  }
  d.neg_axis_in_resolvent = true;
  // (1+t)||(A+t)^{-1}|| tends to 1 as t -> infinity, so 1 is always part of
  // the supremum being sampled.
  d.M_A_estimate = 1.0;
  for (double t : t_grid) {
    double v = (1.0 + t) * op_norm(resolvent_at(A, t));
    d.M_A_estimate = std::max(d.M_A_estimate, v);
  }
  d.sector_angle_estimate = max_arg;
  d.shift_t0 = std::max(0.0, -min_re);
  return d;
}

DenseMatrix frac_power_neg(const DenseMatrix& A, cxd alpha,
                           const QuadConfig& quad) {
  double ra = alpha.real();
  if (!(ra > 0.0 && ra < 2.0))
    throw std::invalid_argument("frac_power_neg: need 0 < Re(alpha) < 2");
  require_positive_type(A);

  const bool second_form = ra >= 1.0;  // t^{1-a}(A+t)^{-2} representation
  // Prefactor sin(pi a)/pi, resp. sin(pi a)/(pi (1-a)) written through
  // sin(pi(1-a))/(pi(1-a)) so the a -> 1 limit is regular.
  cxd coeff;
  if (!second_form) {
    coeff = std::sin(M_PI * alpha) / M_PI;
  } else {
    cxd w = M_PI * (1.0 - alpha);
    coeff = std::abs(w) > 1e-8 ? std::sin(w) / w : 1.0 - w * w / 6.0;
  }

  Eigen::VectorXcd ev = eigenvalues_of(A);
  double rho_hi = ev.cwiseAbs().maxCoeff();
  double rho_lo = ev.cwiseAbs().minCoeff();
  double s_mid = 0.5 * std::log(std::max(rho_hi * rho_lo, 1e-30));
  // Truncation from the integrand decay exp(-s min(Re a, n - Re a)).
  double decay = second_form ? std::min(ra, 2.0 - ra) : std::min(ra, 1.0 - ra);
  double L = std::log(1.0 / quad.tol) / decay + 8.0;

  auto integrand = [&](double s) -> DenseMatrix {
    double t = std::exp(s);
    DenseMatrix R = resolvent_at(A, t);
    if (!second_form) {
      // t^{-a} (A+t)^{-1} dt = e^{s(1-a)} (A+e^s)^{-1} ds
      return std::exp(cxd(s) * (1.0 - alpha)) * R;
    }
    // t^{1-a}(A+t)^{-2} dt = e^{s(2-a)} (A+e^s)^{-2} ds
    return std::exp(cxd(s) * (2.0 - alpha)) * (R * R);
  };

  std::vector<double> gx, gw;
  gauss_legendre(quad.nodes_per_panel, gx, gw);
  double a = s_mid - L, b = s_mid + L;

  DenseMatrix prev;
  for (int panels = quad.min_panels; panels <= quad.max_panels; panels *= 2) {
    DenseMatrix acc = DenseMatrix::Zero(A.rows(), A.cols());
    double hp = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      double lo = a + p * hp;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        double s = lo + 0.5 * hp * (gx[q] + 1.0);
        acc += (0.5 * hp * gw[q]) * integrand(s);
      }
    }
    DenseMatrix result = coeff * acc;
    if (prev.size() > 0) {
      double diff = op_norm(result - prev);
      double scale = std::max(op_norm(result), 1e-300);
      if (diff <= quad.tol * scale) return result;
    }
    prev = result;
  }
  throw quadrature_error("frac_power_neg: panel doubling did not converge");
}

DenseMatrix sqrt_op(const DenseMatrix& A, const QuadConfig& quad) {
  return A * frac_power_neg(A, cxd(0.5), quad);
}

std::complex<double> sym_det_matrix(const DenseMatrix& A, const DenseMatrix& A0,
                                    double z, const QuadConfig& quad) {
  DenseMatrix I = DenseMatrix::Identity(A.rows(), A.cols());
  DenseMatrix S = sqrt_op(A - z * I, quad);
  DenseMatrix M = S * (A0 - z * I).partialPivLu().solve(S);
  return M.partialPivLu().determinant();
}

double trace_formula_residual(const DenseMatrix& A, const DenseMatrix& A0,
                              double z, double h, const QuadConfig& quad) {
  if (!(h > 0.0))
    throw std::invalid_argument("trace_formula_residual: h > 0 required");
  cxd dp = sym_det_matrix(A, A0, z + h, quad);
  cxd dm = sym_det_matrix(A, A0, z - h, quad);
  cxd d0 = sym_det_matrix(A, A0, z, quad);
  if (std::abs(d0) < 1e-300)
    throw singular_lambda_error("trace_formula_residual: determinant vanishes");
  cxd lhs = -std::log(dp / dm) / (2.0 * h);
  DenseMatrix I = DenseMatrix::Identity(A.rows(), A.cols());
  cxd rhs = ((A - z * I).partialPivLu().solve(I) -
             (A0 - z * I).partialPivLu().solve(I))
                .trace();
  return std::abs(lhs - rhs);
}

double semigroup_check(const DenseMatrix& A, cxd a1, cxd a2,
                       const QuadConfig& quad) {
  if (!(a1.real() > 0.0) || !(a2.real() > 0.0) ||
      !(a1.real() + a2.real() < 2.0))
    throw std::invalid_argument(
        "semigroup_check: need Re a1, Re a2 > 0 and Re(a1+a2) < 2");
  DenseMatrix lhs = frac_power_neg(A, a1, quad) * frac_power_neg(A, a2, quad);
  DenseMatrix rhs = frac_power_neg(A, a1 + a2, quad);
  return op_norm(lhs - rhs);
}

DenseMatrix spectral_oracle_power(const DenseMatrix& A, cxd alpha) {
  double herm = op_norm(A - A.adjoint());
  if (herm > 1e-10 * std::max(1.0, op_norm(A)))
    throw not_pd_error("spectral_oracle_power: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(A);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0)
    throw not_pd_error("spectral_oracle_power: matrix not positive definite");
  Eigen::VectorXcd powed(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    powed(i) = std::exp(alpha * std::log(ev(i)));
  return es.eigenvectors() * powed.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace bdmap
