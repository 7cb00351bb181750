#include "resolvent.hpp"

#include <cmath>

#include "errors.hpp"

namespace bdmap {

namespace {

cx wronskian_with_floor(const SolutionPath& up, const SolutionPath& um) {
  cx w = path_wronskian(up, um, up.x_min());
  double scale = std::max({1.0, std::abs(up.deriv_at(up.x_min())),
                           std::abs(um.deriv_at(um.x_max()))});
  if (std::abs(w) <= 1e-12 * scale)
    throw at_eigenvalue_error("resolvent basis: Wronskian vanishes");
  return w;
}

std::vector<cx> sample_field(const ScalarField& f,
                             const std::vector<double>& grid) {
  std::vector<cx> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return v;
}

// Prefactors of the boundary rows: kappa1 = (gamma_{primed} u_minus)_1 / W and
// kappa2 = (gamma_{primed} u_plus)_2 / W. The branch formulas below reduce to
// these via the boundary conditions of u_plus/u_minus.
struct RowPrefactors {
  cx kappa1, kappa2;
};

RowPrefactors row_prefactors(const ResolventBasis& b,
                             const BoundaryAngles& primed) {
  RowPrefactors k;
  cx um0 = b.u_minus.value_at(b.u_minus.x_min());
  cx dum0 = b.u_minus.deriv_at(b.u_minus.x_min());
  cx upR = b.u_plus.value_at(b.u_plus.x_max());
  cx dupR = b.u_plus.deriv_at(b.u_plus.x_max());
  k.kappa1 = (std::cos(primed.theta0) * um0 + std::sin(primed.theta0) * dum0) /
             b.wronskian;
  k.kappa2 = (std::cos(primed.thetaR) * upR - std::sin(primed.thetaR) * dupR) /
             b.wronskian;
  return k;
}

}  // namespace

ResolventBasis resolvent_basis(const Potential& pot, cx z,
                               const BoundaryAngles& angles, double tol,
                               int n_intervals) {
  auto [up, um] = u_plus_minus(pot, z, angles, tol, n_intervals);
  ResolventBasis b;
  b.u_plus = std::move(up);
  b.u_minus = std::move(um);
  b.wronskian = wronskian_with_floor(b.u_plus, b.u_minus);
  return b;
}

cx greens_kernel(const ResolventBasis& basis, double x, double x_prime) {
  double lo = std::min(x, x_prime), hi = std::max(x, x_prime);
  return basis.u_minus.value_at(lo) * basis.u_plus.value_at(hi) /
         basis.wronskian;
}

cx greens_kernel(const Potential& pot, cx z, const BoundaryAngles& angles,
                 double x, double x_prime, double tol) {
  ResolventBasis b = resolvent_basis(pot, z, angles, tol);
  return greens_kernel(b, x, x_prime);
}

SolutionPath apply_resolvent(const Potential& pot, cx z,
                             const BoundaryAngles& angles, const ScalarField& f,
                             double tol, int n_intervals) {
  ResolventBasis b = resolvent_basis(pot, z, angles, tol, n_intervals);
  const std::vector<double>& x = b.u_plus.grid;
  const std::size_t m = x.size();
  std::vector<cx> fv = sample_field(f, x);

  // f' by centered differences feeds the O(h^4) corrected-trapezoid cells.
  std::vector<cx> fd(m);
  for (std::size_t i = 1; i + 1 < m; ++i)
    fd[i] = (fv[i + 1] - fv[i - 1]) / (x[i + 1] - x[i - 1]);
  fd[0] = (-3.0 * fv[0] + 4.0 * fv[1] - fv[2]) / (x[2] - x[0]);
  fd[m - 1] = (3.0 * fv[m - 1] - 4.0 * fv[m - 2] + fv[m - 3]) /
              (x[m - 1] - x[m - 3]);

  auto cell = [&](const SolutionPath& p, std::size_t i) {
    double h = x[i + 1] - x[i];
    cx g0 = p.u[i] * fv[i], g1 = p.u[i + 1] * fv[i + 1];
    cx d0 = p.du[i] * fv[i] + p.u[i] * fd[i];
    cx d1 = p.du[i + 1] * fv[i + 1] + p.u[i + 1] * fd[i + 1];
    return 0.5 * h * (g0 + g1) + h * h / 12.0 * (d0 - d1);
  };

  // I_minus(x) = int_0^x u_minus f; J_plus(x) = int_x^R u_plus f.
  std::vector<cx> I(m), J(m);
  I[0] = cx(0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) I[i + 1] = I[i] + cell(b.u_minus, i);
  J[m - 1] = cx(0.0);
  for (std::size_t i = m - 1; i > 0; --i) J[i - 1] = J[i] + cell(b.u_plus, i - 1);

  SolutionPath out;
  out.grid = x;
  out.u.resize(m);
  out.du.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.u[i] = (b.u_plus.u[i] * I[i] + b.u_minus.u[i] * J[i]) / b.wronskian;
    out.du[i] = (b.u_plus.du[i] * I[i] + b.u_minus.du[i] * J[i]) / b.wronskian;
    if (!finite(out.u[i]))
      throw nonfinite_error("apply_resolvent: non-finite output");
  }
  return out;
}

namespace {

BoundaryVector rows_from_integrals(const ResolventBasis& b,
                                   const BoundaryAngles& base,
                                   const BoundaryAngles& primed, cx int_plus,
                                   cx int_minus) {
  // Branch selection: the sine form when the base angle is not a multiple of
  // pi, the cosine form otherwise; both agree where both are defined.
  cx b0;
  if (!dirichlet_angle(base.theta0)) {
    b0 = -b.u_minus.value_at(b.u_minus.x_min()) / std::sin(base.theta0);
  } else {
    b0 = b.u_minus.deriv_at(b.u_minus.x_min()) / std::cos(base.theta0);
  }
  cx bR;
  if (!dirichlet_angle(base.thetaR)) {
    bR = b.u_plus.value_at(b.u_plus.x_max()) / std::sin(base.thetaR);
  } else {
    bR = b.u_plus.deriv_at(b.u_plus.x_max()) / std::cos(base.thetaR);
  }
  BoundaryVector r;
  r.c0 = std::sin(primed.theta0 - base.theta0) / b.wronskian * int_plus * b0;
  r.cR = -std::sin(primed.thetaR - base.thetaR) / b.wronskian * int_minus * bR;
  return r;
}

}  // namespace

BoundaryVector boundary_rows(const Potential& pot, cx z,
                             const BoundaryAngles& base,
                             const BoundaryAngles& primed, const ScalarField& f,
                             double tol, int n_intervals) {
  ResolventBasis b = resolvent_basis(pot, z, base, tol, n_intervals);
  std::vector<cx> fv = sample_field(f, b.u_plus.grid);
  cx ip = integral_against(b.u_plus, fv);
  cx im = integral_against(b.u_minus, fv);
  return rows_from_integrals(b, base, primed, ip, im);
}

BoundaryVector boundary_rows(const ResolventBasis& b,
                             const BoundaryAngles& base,
                             const BoundaryAngles& primed,
                             const SolutionPath& f) {
  cx ip = path_product_integral(b.u_plus, f);
  cx im = path_product_integral(b.u_minus, f);
  return rows_from_integrals(b, base, primed, ip, im);
}

namespace {

// Reduce a real angle mod pi into [0, pi); the operator is unchanged.
double mod_pi(double t) {
  double r = std::fmod(t, M_PI);
  if (r < 0.0) r += M_PI;
  if (r > M_PI - kAngleModTol || r < kAngleModTol) r = 0.0;
  return r;
}

}  // namespace

SolutionPath krein_resolvent(const Potential& pot, cx z,
                             const BoundaryAngles& base,
                             const BoundaryAngles& primed, const ScalarField& f,
                             double tol, int n_intervals) {
  base.require_real("krein_resolvent");
  primed.require_real("krein_resolvent");
  BoundaryAngles tb(mod_pi(base.t0()), mod_pi(base.tR()));
  BoundaryAngles tp(mod_pi(primed.t0()), mod_pi(primed.tR()));
  bool same0 = std::abs(tb.t0() - tp.t0()) < kAngleModTol;
  bool sameR = std::abs(tb.tR() - tp.tR()) < kAngleModTol;

  SolutionPath w = apply_resolvent(pot, z, tb, f, tol, n_intervals);
  if (same0 && sameR) return w;

  ResolventBasis b = resolvent_basis(pot, z, tb, tol, n_intervals);
  std::vector<cx> fv = sample_field(f, b.u_plus.grid);
  cx ip = integral_against(b.u_plus, fv);
  cx im = integral_against(b.u_minus, fv);
  BoundaryVector r = rows_from_integrals(b, tb, tp, ip, im);

  Mat2 lambda = lambda_map(pot, z, tb, tp, tol);
  if (lambda.singular())
    throw singular_lambda_error("krein_resolvent: boundary data map singular");
  Mat2 linv = lambda.inverse();

  BoundaryVector c;
  if (!same0 && !sameR) {
    BoundaryVector t = linv * r;
    c.c0 = t.c0 / std::sin(tp.theta0 - tb.theta0);
    c.cR = t.cR / std::sin(tp.thetaR - tb.thetaR);
  } else if (same0) {
    c.c0 = cx(0.0);
    c.cR = linv.a22 * r.cR / std::sin(tp.thetaR - tb.thetaR);
  } else {
    c.c0 = linv.a11 * r.c0 / std::sin(tp.theta0 - tb.theta0);
    c.cR = cx(0.0);
  }

  RowPrefactors k = row_prefactors(b, tp);
  cx w1 = k.kappa1 * c.c0;
  cx w2 = k.kappa2 * c.cR;

  SolutionPath out;
  out.grid = w.grid;
  out.u.resize(w.u.size());
  out.du.resize(w.du.size());
  for (std::size_t i = 0; i < w.u.size(); ++i) {
    out.u[i] = w.u[i] - w1 * b.u_plus.u[i] - w2 * b.u_minus.u[i];
    out.du[i] = w.du[i] - w1 * b.u_plus.du[i] - w2 * b.u_minus.du[i];
  }
  return out;
}

double lambda_derivative_identity(const Potential& pot, cx z,
                                  const BoundaryAngles& base,
                                  const BoundaryAngles& primed, double h,
                                  double tol) {
  base.require_real("lambda_derivative_identity");
  primed.require_real("lambda_derivative_identity");
  if (!(h > 0.0))
    throw std::invalid_argument("lambda_derivative_identity: h > 0 required");

  ResolventBasis b = resolvent_basis(pot, z, base, tol);
  RowPrefactors k = row_prefactors(b, primed);

  // gamma'(H-z)^{-1} [gamma'(H-z)^{-1}]*: columns are the boundary rows of
  // the two rank-one representatives kappa1 u_plus and kappa2 u_minus.
  BoundaryVector col1 = boundary_rows(b, base, primed, b.u_plus);
  BoundaryVector col2 = boundary_rows(b, base, primed, b.u_minus);
  Mat2 M{k.kappa1 * col1.c0, k.kappa2 * col2.c0, k.kappa1 * col1.cR,
         k.kappa2 * col2.cR};

  Mat2 S = s_matrix(primed.theta0 - base.theta0, primed.thetaR - base.thetaR);
  Mat2 Lp = lambda_map(pot, z + h, base, primed, tol);
  Mat2 Lm = lambda_map(pot, z - h, base, primed, tol);
  Mat2 D = (Lp - Lm) * S;
  D.a11 /= 2.0 * h;
  D.a12 /= 2.0 * h;
  D.a21 /= 2.0 * h;
  D.a22 /= 2.0 * h;

  return (M - D).max_norm();
}

cx krein_correction_trace(const Potential& pot, cx z,
                          const BoundaryAngles& base,
                          const BoundaryAngles& primed, double tol) {
  base.require_real("krein_correction_trace");
  primed.require_real("krein_correction_trace");
  BoundaryAngles tb(mod_pi(base.t0()), mod_pi(base.tR()));
  BoundaryAngles tp(mod_pi(primed.t0()), mod_pi(primed.tR()));
  bool same0 = std::abs(tb.t0() - tp.t0()) < kAngleModTol;
  bool sameR = std::abs(tb.tR() - tp.tR()) < kAngleModTol;
  if (same0 && sameR) return cx(0.0);

  ResolventBasis b = resolvent_basis(pot, z, tb, tol);
  Mat2 linv = lambda_map(pot, z, tb, tp, tol).inverse();
  Mat2 C{cx(0.0), cx(0.0), cx(0.0), cx(0.0)};
  if (!same0 && !sameR) {
    cx s0 = std::sin(tp.theta0 - tb.theta0);
    cx sR = std::sin(tp.thetaR - tb.thetaR);
    C = Mat2{linv.a11 / s0, linv.a12 / s0, linv.a21 / sR, linv.a22 / sR};
  } else if (same0) {
    C.a22 = linv.a22 / std::sin(tp.thetaR - tb.thetaR);
  } else {
    C.a11 = linv.a11 / std::sin(tp.theta0 - tb.theta0);
  }

  RowPrefactors k = row_prefactors(b, tp);
  cx ipp = path_product_integral(b.u_plus, b.u_plus);
  cx ipm = path_product_integral(b.u_plus, b.u_minus);
  cx imm = path_product_integral(b.u_minus, b.u_minus);

  // Correction kernel K(x,y) = sum_{jk} kappa_j C_{jk} kappa_k u_j(x) u_k(y);
  // the resolvent difference equals -K.
  cx tr = k.kappa1 * C.a11 * k.kappa1 * ipp +
          k.kappa1 * C.a12 * k.kappa2 * ipm +
          k.kappa2 * C.a21 * k.kappa1 * ipm +
          k.kappa2 * C.a22 * k.kappa2 * imm;
  return -tr;
}

}  // namespace bdmap
