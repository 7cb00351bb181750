#include "boundary.hpp"

#include <cmath>

#include "errors.hpp"

namespace bdmap {

BoundaryVector trace_map(const BoundaryAngles& angles, const SolutionPath& p) {
  double s = std::exp(p.log_scale);
  cx u0 = p.u.front() * s, du0 = p.du.front() * s;
  cx uR = p.u.back() * s, duR = p.du.back() * s;
  BoundaryVector v;
  v.c0 = std::cos(angles.theta0) * u0 + std::sin(angles.theta0) * du0;
  v.cR = std::cos(angles.thetaR) * uR - std::sin(angles.thetaR) * duR;
  if (!finite(v.c0) || !finite(v.cR))
    throw nonfinite_error("trace map produced non-finite values");
  return v;
}

namespace {

// Trace matrix of the fundamental pair: first row O(1), second row on the
// propagation scale exp(f.log_scale).
struct TraceRows {
  cx f11, f12;    // [cos(theta0), sin(theta0)]
  cx g21, g22;    // second row mantissas
};

TraceRows trace_rows(const FundamentalValues& f, const BoundaryAngles& a) {
  TraceRows t;
  t.f11 = std::cos(a.theta0);
  t.f12 = std::sin(a.theta0);
  cx c = std::cos(a.thetaR), s = std::sin(a.thetaR);
  t.g21 = c * f.theta - s * f.theta_prime;
  t.g22 = c * f.phi - s * f.phi_prime;
  return t;
}

bool rows_singular(const TraceRows& t) {
  double scale = (std::abs(t.f11) + std::abs(t.f12)) *
                 (std::abs(t.g21) + std::abs(t.g22));
  cx d = t.f11 * t.g22 - t.f12 * t.g21;
  return std::abs(d) <= kSingularFloor * (scale > 0.0 ? scale : 1.0);
}

}  // namespace

CharDet char_det(const Potential& pot, cx z, const BoundaryAngles& angles,
                 double tol) {
  FundamentalValues f = propagate_fundamental(pot, z, tol);
  TraceRows t = trace_rows(f, angles);
  CharDet d;
  d.value = LogScaled(t.f11 * t.g22 - t.f12 * t.g21, f.log_scale);
  return d;
}

Mat2 lambda_map(const Potential& pot, cx z, const BoundaryAngles& from,
                const BoundaryAngles& to, double tol) {
  FundamentalValues fv = propagate_fundamental(pot, z, tol);
  TraceRows F = trace_rows(fv, from);
  TraceRows T = trace_rows(fv, to);
  if (rows_singular(F))
    throw at_eigenvalue_error("lambda_map: z is an eigenvalue of the source "
                              "boundary condition");
  cx d = F.f11 * F.g22 - F.f12 * F.g21;
  double e = std::exp(fv.log_scale);
  Mat2 L;
  L.a11 = (T.f11 * F.g22 - T.f12 * F.g21) / d;
  L.a12 = (T.f12 * F.f11 - T.f11 * F.f12) / (d * e);
  L.a21 = (T.g21 * F.g22 - T.g22 * F.g21) * e / d;
  L.a22 = (T.g22 * F.f11 - T.g21 * F.f12) / d;
  if (!finite(L.a11) || !finite(L.a12) || !finite(L.a21) || !finite(L.a22))
    throw nonfinite_error("lambda_map entries not finite");
  return L;
}

cx lambda_det(const Potential& pot, cx z, const BoundaryAngles& from,
              const BoundaryAngles& to, double tol) {
  return lambda_map(pot, z, from, to, tol).det();
}

namespace {

void require_non_multiple_of_pi(cx diff, const char* what) {
  if (diff.imag() == 0.0 && is_multiple_of_pi(diff.real()))
    throw std::invalid_argument(std::string(what) +
                                ": angle difference is a multiple of pi");
}

}  // namespace

Mat2 lft_transfer(const Mat2& lambda_ref, const BoundaryAngles& theta,
                  const BoundaryAngles& theta_p, const BoundaryAngles& delta,
                  const BoundaryAngles& delta_p) {
  require_non_multiple_of_pi(delta_p.theta0 - delta.theta0, "lft_transfer");
  require_non_multiple_of_pi(delta_p.thetaR - delta.thetaR, "lft_transfer");

  Mat2 Sdd = s_matrix(delta_p.theta0 - delta.theta0,
                      delta_p.thetaR - delta.thetaR);
  Mat2 Sdd_inv = Mat2::diag(1.0 / Sdd.a11, 1.0 / Sdd.a22);
  Mat2 num = s_matrix(delta_p.theta0 - theta_p.theta0,
                      delta_p.thetaR - theta_p.thetaR) +
             s_matrix(theta_p.theta0 - delta.theta0,
                      theta_p.thetaR - delta.thetaR) *
                 lambda_ref;
  Mat2 den = s_matrix(delta_p.theta0 - theta.theta0,
                      delta_p.thetaR - theta.thetaR) +
             s_matrix(theta.theta0 - delta.theta0,
                      theta.thetaR - delta.thetaR) *
                 lambda_ref;
  if (den.singular())
    throw singular_transfer_error("lft_transfer: bracketed matrix singular");
  return Sdd_inv * num * den.inverse() * Sdd;
}

double herglotz_check(const Potential& pot, cx z, const BoundaryAngles& from,
                      const BoundaryAngles& to, double tol) {
  from.require_real("herglotz_check");
  to.require_real("herglotz_check");
  if (!(z.imag() > 0.0))
    throw std::invalid_argument("herglotz_check: Im z > 0 required");
  require_non_multiple_of_pi(to.theta0 - from.theta0, "herglotz_check");
  require_non_multiple_of_pi(to.thetaR - from.thetaR, "herglotz_check");
  Mat2 L = lambda_map(pot, z, from, to, tol);
  Mat2 M = L * s_matrix(to.theta0 - from.theta0, to.thetaR - from.thetaR);
  return M.min_eig_imag_part();
}

cx lambda_asymptotic_leading(const BoundaryAngles& from,
                             const BoundaryAngles& to, double z) {
  if (!(z < 0.0))
    throw std::invalid_argument(
        "lambda_asymptotic_leading: z must be negative real");
  if (dirichlet_angle(to.theta0) || dirichlet_angle(to.thetaR))
    throw unsupported_case_error(
        "lambda_asymptotic_leading: target angles must have sin != 0");
  cx sp = std::sin(to.theta0) * std::sin(to.thetaR);
  bool d0 = dirichlet_angle(from.theta0);
  bool dR = dirichlet_angle(from.thetaR);
  double az = std::abs(z);
  if (d0 && dR) return sp * az;
  if (d0 && !dR) return -sp / std::sin(from.thetaR) * std::sqrt(az);
  if (!d0 && dR) return -sp / std::sin(from.theta0) * std::sqrt(az);
  return sp / (std::sin(from.theta0) * std::sin(from.thetaR));
}

}  // namespace bdmap
