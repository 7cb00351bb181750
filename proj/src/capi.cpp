#include "bdmap/bdmap.h"

#include <cstring>
#include <random>
#include <string>

#include "boundary.hpp"
#include "discrete.hpp"
#include "errors.hpp"
#include "ode.hpp"
#include "positive_type.hpp"
#include "potential.hpp"
#include "resolvent.hpp"
#include "spectral.hpp"

using namespace bdmap;

struct bdm_potential {
  Potential pot;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
bdm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BDM_OK;
  } catch (const at_eigenvalue_error& e) {
    g_last_error = e.what();
    return BDM_ERR_AT_EIGENVALUE;
  } catch (const tolerance_error& e) {
    g_last_error = e.what();
    return BDM_ERR_TOLERANCE_NOT_MET;
  } catch (const nonfinite_error& e) {
    g_last_error = e.what();
    return BDM_ERR_NONFINITE;
  } catch (const grid_mismatch_error& e) {
    g_last_error = e.what();
    return BDM_ERR_GRID_MISMATCH;
  } catch (const domain_violation_error& e) {
    g_last_error = e.what();
    return BDM_ERR_DOMAIN_VIOLATION;
  } catch (const bracketing_error& e) {
    g_last_error = e.what();
    return BDM_ERR_BRACKETING_FAILURE;
  } catch (const tail_too_large_error& e) {
    g_last_error = e.what();
    return BDM_ERR_TAIL_TOO_LARGE;
  } catch (const phase_tracking_error& e) {
    g_last_error = e.what();
    return BDM_ERR_PHASE_TRACKING_LOST;
  } catch (const singular_transfer_error& e) {
    g_last_error = e.what();
    return BDM_ERR_SINGULAR_TRANSFER;
  } catch (const singular_lambda_error& e) {
    g_last_error = e.what();
    return BDM_ERR_SINGULAR_LAMBDA;
  } catch (const unsupported_case_error& e) {
    g_last_error = e.what();
    return BDM_ERR_UNSUPPORTED_CASE;
  } catch (const not_below_spectrum_error& e) {
    g_last_error = e.what();
    return BDM_ERR_NOT_BELOW_SPECTRUM;
  } catch (const not_positive_type_error& e) {
    g_last_error = e.what();
    return BDM_ERR_NOT_POSITIVE_TYPE;
  } catch (const not_pd_error& e) {
    g_last_error = e.what();
    return BDM_ERR_NOT_PD;
  } catch (const quadrature_error& e) {
    g_last_error = e.what();
    return BDM_ERR_QUADRATURE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return BDM_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BDM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BDM_ERR_INTERNAL;
  }
}

void put_cx(double* out, cx v) {
  out[0] = v.real();
  out[1] = v.imag();
}

void put_mat2(double* out, const Mat2& m) {
  put_cx(out + 0, m.a11);
  put_cx(out + 2, m.a12);
  put_cx(out + 4, m.a21);
  put_cx(out + 6, m.a22);
}

Mat2 get_mat2(const double* in) {
  return {cx(in[0], in[1]), cx(in[2], in[3]), cx(in[4], in[5]),
          cx(in[6], in[7])};
}

const Potential& pot_of(const bdm_potential* p) {
  if (!p) throw std::invalid_argument("null potential handle");
  return p->pot;
}

void require_out(const void* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string("null output pointer: ") + name);
}

std::vector<cx> unpack_field(const double* f, int n_out) {
  if (!f) throw std::invalid_argument("null sampled-function pointer");
  if (n_out < 8) throw std::invalid_argument("n_out too small");
  std::vector<cx> v(static_cast<std::size_t>(n_out) + 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cx(f[2 * i], f[2 * i + 1]);
  return v;
}

void pack_path(const SolutionPath& p, double* out_u, double* out_du) {
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    if (out_u) put_cx(out_u + 2 * i, p.u[i]);
    if (out_du) put_cx(out_du + 2 * i, p.du[i]);
  }
}

DenseMatrix unpack_dense(const double* a, int dim) {
  if (!a) throw std::invalid_argument("null matrix pointer");
  if (dim < 1 || dim > 512) throw std::invalid_argument("bad matrix dimension");
  DenseMatrix M(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j, k += 2) M(i, j) = cx(a[k], a[k + 1]);
  return M;
}

void pack_dense(const DenseMatrix& M, double* out) {
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j, k += 2) put_cx(out + k, M(i, j));
}

// A sampled field on the uniform grid drives the resolvent operations; the
// interpolation below only serves evaluation at those exact nodes.
ScalarField field_from_samples(std::vector<cx> samples, double R) {
  int n = static_cast<int>(samples.size()) - 1;
  return [samples = std::move(samples), R, n](double x) {
    double t = x / R * n;
    long j = std::lround(t);
    if (j < 0) j = 0;
    if (j > n) j = n;
    if (std::abs(t - j) < 1e-9) return samples[static_cast<std::size_t>(j)];
    long j0 = static_cast<long>(std::floor(t));
    if (j0 < 0) j0 = 0;
    if (j0 >= n) j0 = n - 1;
    double w = t - j0;
    return (1.0 - w) * samples[static_cast<std::size_t>(j0)] +
           w * samples[static_cast<std::size_t>(j0) + 1];
  };
}

}  // namespace

extern "C" {

const char* bdm_last_error_message(void) { return g_last_error.c_str(); }

void bdm_version(int* major, int* minor, int* patch) {
  if (major) *major = 0;
  if (minor) *minor = 1;
  if (patch) *patch = 0;
}

bdm_status bdm_potential_zero(double R, bdm_potential** out) {
  return guarded([&] {
    require_out(out, "out");
    *out = new bdm_potential{Potential::zero(R)};
  });
}

bdm_status bdm_potential_constant(double R, double c, bdm_potential** out) {
  return guarded([&] {
    require_out(out, "out");
    *out = new bdm_potential{Potential::constant(R, c)};
  });
}

bdm_status bdm_potential_cosine(double R, double amplitude, double frequency,
                                double phase, bdm_potential** out) {
  return guarded([&] {
    require_out(out, "out");
    *out = new bdm_potential{Potential::cosine(R, amplitude, frequency, phase)};
  });
}

bdm_status bdm_potential_samples(double R, const double* xs, const double* vs,
                                 size_t n, bdm_potential** out) {
  return guarded([&] {
    require_out(out, "out");
    if (!xs || !vs) throw std::invalid_argument("null sample arrays");
    std::vector<double> x(xs, xs + n), v(vs, vs + n);
    *out = new bdm_potential{Potential::samples(R, std::move(x), std::move(v))};
  });
}

void bdm_potential_free(bdm_potential* pot) { delete pot; }

double bdm_potential_eval(const bdm_potential* pot, double x) {
  return pot ? pot->pot(x) : 0.0;
}

bdm_status bdm_fundamental(const bdm_potential* pot, double z_re, double z_im,
                           double tol, double out_vals[8],
                           double* out_log_scale) {
  return guarded([&] {
    require_out(out_vals, "out_vals");
    require_out(out_log_scale, "out_log_scale");
    FundamentalValues f = propagate_fundamental(pot_of(pot), cx(z_re, z_im), tol);
    put_cx(out_vals + 0, f.theta);
    put_cx(out_vals + 2, f.theta_prime);
    put_cx(out_vals + 4, f.phi);
    put_cx(out_vals + 6, f.phi_prime);
    *out_log_scale = f.log_scale;
  });
}

bdm_status bdm_char_det(const bdm_potential* pot, double z_re, double z_im,
                        double theta0, double thetaR, double tol,
                        double out_value[2], double* out_log_scale) {
  return guarded([&] {
    require_out(out_value, "out_value");
    require_out(out_log_scale, "out_log_scale");
    CharDet d = char_det(pot_of(pot), cx(z_re, z_im),
                         BoundaryAngles(theta0, thetaR), tol);
    put_cx(out_value, d.value.mantissa);
    *out_log_scale = d.value.log_scale;
  });
}

bdm_status bdm_lambda_map(const bdm_potential* pot, double z_re, double z_im,
                          double theta0, double thetaR, double theta0p,
                          double thetaRp, double tol, double out_mat[8]) {
  return guarded([&] {
    require_out(out_mat, "out_mat");
    Mat2 L = lambda_map(pot_of(pot), cx(z_re, z_im),
                        BoundaryAngles(theta0, thetaR),
                        BoundaryAngles(theta0p, thetaRp), tol);
    put_mat2(out_mat, L);
  });
}

bdm_status bdm_lambda_det(const bdm_potential* pot, double z_re, double z_im,
                          double theta0, double thetaR, double theta0p,
                          double thetaRp, double tol, double out_det[2]) {
  return guarded([&] {
    require_out(out_det, "out_det");
    put_cx(out_det, lambda_det(pot_of(pot), cx(z_re, z_im),
                               BoundaryAngles(theta0, thetaR),
                               BoundaryAngles(theta0p, thetaRp), tol));
  });
}

bdm_status bdm_s_matrix(double delta0, double deltaR, double out_mat[8]) {
  return guarded([&] {
    require_out(out_mat, "out_mat");
    put_mat2(out_mat, s_matrix(cx(delta0), cx(deltaR)));
  });
}

bdm_status bdm_lft_transfer(const double lambda_ref[8], double theta0,
                            double thetaR, double theta0p, double thetaRp,
                            double delta0, double deltaR, double delta0p,
                            double deltaRp, double out_mat[8]) {
  return guarded([&] {
    require_out(out_mat, "out_mat");
    if (!lambda_ref) throw std::invalid_argument("null reference matrix");
    Mat2 got = lft_transfer(get_mat2(lambda_ref), BoundaryAngles(theta0, thetaR),
                            BoundaryAngles(theta0p, thetaRp),
                            BoundaryAngles(delta0, deltaR),
                            BoundaryAngles(delta0p, deltaRp));
    put_mat2(out_mat, got);
  });
}

bdm_status bdm_herglotz_check(const bdm_potential* pot, double z_re,
                              double z_im, double theta0, double thetaR,
                              double theta0p, double thetaRp, double tol,
                              double* out_min_eig) {
  return guarded([&] {
    require_out(out_min_eig, "out_min_eig");
    *out_min_eig = herglotz_check(pot_of(pot), cx(z_re, z_im),
                                  BoundaryAngles(theta0, thetaR),
                                  BoundaryAngles(theta0p, thetaRp), tol);
  });
}

bdm_status bdm_lambda_asymptotic_leading(double theta0, double thetaR,
                                         double theta0p, double thetaRp,
                                         double z, double out_value[2]) {
  return guarded([&] {
    require_out(out_value, "out_value");
    put_cx(out_value,
           lambda_asymptotic_leading(BoundaryAngles(theta0, thetaR),
                                     BoundaryAngles(theta0p, thetaRp), z));
  });
}

bdm_status bdm_eigenvalues(const bdm_potential* pot, double theta0,
                           double thetaR, int n, double tol, double* out_values,
                           double* out_asymptotic_constant) {
  return guarded([&] {
    require_out(out_values, "out_values");
    EigenvalueList e =
        eigenvalues(pot_of(pot), BoundaryAngles(theta0, thetaR), n, tol);
    std::memcpy(out_values, e.values.data(), sizeof(double) * e.values.size());
    if (out_asymptotic_constant)
      *out_asymptotic_constant = e.asymptotic_constant;
  });
}

bdm_status bdm_trace_resolvent_diff(const bdm_potential* pot, double base0,
                                    double baseR, double primed0,
                                    double primedR, double z_re, double z_im,
                                    int n_terms, double tol,
                                    double out_value[2],
                                    double* out_tail_bound) {
  return guarded([&] {
    require_out(out_value, "out_value");
    TraceDiffResult t = trace_resolvent_diff(
        pot_of(pot), BoundaryAngles(base0, baseR),
        BoundaryAngles(primed0, primedR), cx(z_re, z_im), n_terms, tol);
    put_cx(out_value, t.value);
    if (out_tail_bound) *out_tail_bound = t.tail_bound;
  });
}

bdm_status bdm_log_det_derivative(const bdm_potential* pot, double base0,
                                  double baseR, double primed0, double primedR,
                                  double z_re, double z_im, double h,
                                  double tol, double out_value[2],
                                  double* out_error_estimate) {
  return guarded([&] {
    require_out(out_value, "out_value");
    LogDetDerivative d = log_det_derivative(
        pot_of(pot), BoundaryAngles(base0, baseR),
        BoundaryAngles(primed0, primedR), cx(z_re, z_im), h, tol);
    put_cx(out_value, d.value);
    if (out_error_estimate) *out_error_estimate = d.error_estimate;
  });
}

bdm_status bdm_spectral_shift(const bdm_potential* pot, double base0,
                              double baseR, double primed0, double primedR,
                              const double* grid, size_t n_grid, double tol,
                              int* out_grid_values, double* out_residuals,
                              double* out_breakpoints, int* out_interval_values,
                              size_t breakpoint_capacity,
                              size_t* out_breakpoint_count, int* out_eta) {
  return guarded([&] {
    if (!grid || n_grid == 0) throw std::invalid_argument("empty grid");
    require_out(out_grid_values, "out_grid_values");
    require_out(out_breakpoint_count, "out_breakpoint_count");
    std::vector<double> g(grid, grid + n_grid);
    SpectralShift s =
        spectral_shift(pot_of(pot), BoundaryAngles(base0, baseR),
                       BoundaryAngles(primed0, primedR), g, {}, tol);
    for (std::size_t i = 0; i < n_grid; ++i) {
      out_grid_values[i] = s.grid_values[i];
      if (out_residuals) out_residuals[i] = s.residuals[i];
    }
    *out_breakpoint_count = s.breakpoints.size();
    if (s.breakpoints.size() > breakpoint_capacity &&
        (out_breakpoints || out_interval_values))
      throw std::invalid_argument("breakpoint capacity too small");
    if (out_breakpoints)
      std::memcpy(out_breakpoints, s.breakpoints.data(),
                  sizeof(double) * s.breakpoints.size());
    if (out_interval_values)
      for (std::size_t i = 0; i < s.values.size(); ++i)
        out_interval_values[i] = s.values[i];
    if (out_eta) *out_eta = s.eta;
  });
}

bdm_status bdm_ssf_counting(const bdm_potential* pot, double base0,
                            double baseR, double primed0, double primedR,
                            double lambda, double tol, int* out_count_diff) {
  return guarded([&] {
    require_out(out_count_diff, "out_count_diff");
    *out_count_diff =
        ssf_counting_oracle(pot_of(pot), BoundaryAngles(base0, baseR),
                            BoundaryAngles(primed0, primedR), lambda, tol);
  });
}

bdm_status bdm_greens_kernel(const bdm_potential* pot, double z_re, double z_im,
                             double theta0, double thetaR, double x,
                             double x_prime, double tol, double out_value[2]) {
  return guarded([&] {
    require_out(out_value, "out_value");
    put_cx(out_value, greens_kernel(pot_of(pot), cx(z_re, z_im),
                                    BoundaryAngles(theta0, thetaR), x, x_prime,
                                    tol));
  });
}

bdm_status bdm_apply_resolvent(const bdm_potential* pot, double z_re,
                               double z_im, double theta0, double thetaR,
                               const double* f, int n_out, double tol,
                               double* out_u, double* out_du) {
  return guarded([&] {
    require_out(out_u, "out_u");
    const Potential& p = pot_of(pot);
    ScalarField field = field_from_samples(unpack_field(f, n_out), p.R());
    SolutionPath u = apply_resolvent(p, cx(z_re, z_im),
                                     BoundaryAngles(theta0, thetaR), field, tol,
                                     n_out);
    pack_path(u, out_u, out_du);
  });
}

bdm_status bdm_boundary_rows(const bdm_potential* pot, double z_re, double z_im,
                             double base0, double baseR, double primed0,
                             double primedR, const double* f, int n_out,
                             double tol, double out_rows[4]) {
  return guarded([&] {
    require_out(out_rows, "out_rows");
    const Potential& p = pot_of(pot);
    ScalarField field = field_from_samples(unpack_field(f, n_out), p.R());
    BoundaryVector r =
        boundary_rows(p, cx(z_re, z_im), BoundaryAngles(base0, baseR),
                      BoundaryAngles(primed0, primedR), field, tol, n_out);
    put_cx(out_rows + 0, r.c0);
    put_cx(out_rows + 2, r.cR);
  });
}

bdm_status bdm_krein_resolvent(const bdm_potential* pot, double z_re,
                               double z_im, double base0, double baseR,
                               double primed0, double primedR, const double* f,
                               int n_out, double tol, double* out_u,
                               double* out_du) {
  return guarded([&] {
    require_out(out_u, "out_u");
    const Potential& p = pot_of(pot);
    ScalarField field = field_from_samples(unpack_field(f, n_out), p.R());
    SolutionPath u =
        krein_resolvent(p, cx(z_re, z_im), BoundaryAngles(base0, baseR),
                        BoundaryAngles(primed0, primedR), field, tol, n_out);
    pack_path(u, out_u, out_du);
  });
}

bdm_status bdm_lambda_derivative_identity(const bdm_potential* pot,
                                          double z_re, double z_im,
                                          double base0, double baseR,
                                          double primed0, double primedR,
                                          double h, double tol,
                                          double* out_residual) {
  return guarded([&] {
    require_out(out_residual, "out_residual");
    *out_residual = lambda_derivative_identity(
        pot_of(pot), cx(z_re, z_im), BoundaryAngles(base0, baseR),
        BoundaryAngles(primed0, primedR), h, tol);
  });
}

bdm_status bdm_sym_det_discrete(const bdm_potential* pot, double z,
                                double base0, double baseR, double primed0,
                                double primedR, int n, double tol,
                                double out_value[2]) {
  return guarded([&] {
    require_out(out_value, "out_value");
    DiscreteHamiltonian Hb =
        discretize(pot_of(pot), BoundaryAngles(base0, baseR), n);
    DiscreteHamiltonian Hp =
        discretize(pot_of(pot), BoundaryAngles(primed0, primedR), n);
    put_cx(out_value, sym_det_discrete(Hb, Hp, z, tol));
  });
}

bdm_status bdm_sym_det_closed_form(const bdm_potential* pot, double z_re,
                                   double z_im, double base0, double baseR,
                                   double primed0, double primedR, double tol,
                                   double out_value[2]) {
  return guarded([&] {
    require_out(out_value, "out_value");
    put_cx(out_value,
           sym_det_closed_form(pot_of(pot), cx(z_re, z_im),
                               BoundaryAngles(base0, baseR),
                               BoundaryAngles(primed0, primedR), tol));
  });
}

bdm_status bdm_convergence_study(const bdm_potential* pot, double z,
                                 double base0, double baseR, double primed0,
                                 double primedR, const int* n_list,
                                 size_t n_count, double tol, double* out_values,
                                 double* out_errors, double out_reference[2],
                                 double* out_fitted_order) {
  return guarded([&] {
    if (!n_list || n_count == 0) throw std::invalid_argument("empty n_list");
    std::vector<int> ns(n_list, n_list + n_count);
    ConvergenceStudy s =
        convergence_study(pot_of(pot), z, BoundaryAngles(base0, baseR),
                          BoundaryAngles(primed0, primedR), ns, tol);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      if (out_values) put_cx(out_values + 2 * i, s.rows[i].value);
      if (out_errors) out_errors[i] = s.rows[i].error;
    }
    if (out_reference) put_cx(out_reference, s.reference);
    if (out_fitted_order) *out_fitted_order = s.fitted_order;
  });
}

bdm_status bdm_kernel_dimension_probe(const bdm_potential* pot, double z,
                                      double base0, double baseR,
                                      double primed0, double primedR, int n,
                                      int k, double* out_singular_values) {
  return guarded([&] {
    require_out(out_singular_values, "out_singular_values");
    DiscreteHamiltonian Hb =
        discretize(pot_of(pot), BoundaryAngles(base0, baseR), n);
    DiscreteHamiltonian Hp =
        discretize(pot_of(pot), BoundaryAngles(primed0, primedR), n);
    std::vector<double> sv = kernel_dimension_probe(Hb, Hp, z, k);
    std::memcpy(out_singular_values, sv.data(), sizeof(double) * sv.size());
  });
}

bdm_status bdm_frac_power_neg(const double* a, int dim, double alpha_re,
                              double alpha_im, double tol, double* out) {
  return guarded([&] {
    require_out(out, "out");
    QuadConfig q;
    q.tol = tol > 0.0 ? tol : 1e-12;
    pack_dense(frac_power_neg(unpack_dense(a, dim), cx(alpha_re, alpha_im), q),
               out);
  });
}

bdm_status bdm_sqrt_op(const double* a, int dim, double tol, double* out) {
  return guarded([&] {
    require_out(out, "out");
    QuadConfig q;
    q.tol = tol > 0.0 ? tol : 1e-12;
    pack_dense(sqrt_op(unpack_dense(a, dim), q), out);
  });
}

bdm_status bdm_sym_det_matrix(const double* a, const double* a0, int dim,
                              double z, double tol, double out_det[2]) {
  return guarded([&] {
    require_out(out_det, "out_det");
    QuadConfig q;
    q.tol = tol > 0.0 ? tol : 1e-12;
    put_cx(out_det,
           sym_det_matrix(unpack_dense(a, dim), unpack_dense(a0, dim), z, q));
  });
}

bdm_status bdm_trace_formula_residual(const double* a, const double* a0,
                                      int dim, double z, double h, double tol,
                                      double* out_residual) {
  return guarded([&] {
    require_out(out_residual, "out_residual");
    QuadConfig q;
    q.tol = tol > 0.0 ? tol : 1e-12;
    *out_residual = trace_formula_residual(unpack_dense(a, dim),
                                           unpack_dense(a0, dim), z, h, q);
  });
}

bdm_status bdm_semigroup_check(const double* a, int dim, double a1_re,
                               double a1_im, double a2_re, double a2_im,
                               double tol, double* out_residual) {
  return guarded([&] {
    require_out(out_residual, "out_residual");
    QuadConfig q;
    q.tol = tol > 0.0 ? tol : 1e-12;
    *out_residual = semigroup_check(unpack_dense(a, dim), cx(a1_re, a1_im),
                                    cx(a2_re, a2_im), q);
  });
}

bdm_status bdm_spectral_oracle_power(const double* a, int dim, double alpha_re,
                                     double alpha_im, double* out) {
  return guarded([&] {
    require_out(out, "out");
    pack_dense(spectral_oracle_power(unpack_dense(a, dim), cx(alpha_re, alpha_im)),
               out);
  });
}

bdm_status bdm_positive_type_diagnostics(const double* a, int dim,
                                         int t_points, double* out_m_estimate,
                                         double* out_sector_angle,
                                         double* out_shift_t0) {
  return guarded([&] {
    DenseMatrix A = unpack_dense(a, dim);
    PositiveTypeDiagnostics d = positive_type_diagnostics(
        A, default_t_grid(A, t_points > 2 ? t_points : 200));
    if (out_m_estimate) *out_m_estimate = d.M_A_estimate;
    if (out_sector_angle) *out_sector_angle = d.sector_angle_estimate;
    if (out_shift_t0) *out_shift_t0 = d.shift_t0;
  });
}

bdm_status bdm_abstract_battery(int dim, unsigned long long seed, double tol,
                                bdm_abstract_report* out) {
  return guarded([&] {
    require_out(out, "out");
    if (dim < 2 || dim > 64)
      throw std::invalid_argument("abstract battery: dim must be in [2, 64]");
    QuadConfig q;
    q.tol = tol > 0.0 ? std::min(tol, 1e-10) : 1e-12;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);

    auto random_hpd = [&](int n) {
      DenseMatrix B(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = cx(g(rng), g(rng));
      return DenseMatrix(B.adjoint() * B +
                         0.5 * DenseMatrix::Identity(n, n));
    };
    auto norm2 = [](const DenseMatrix& M) {
      Eigen::JacobiSVD<DenseMatrix> svd(M);
      return svd.singularValues()(0);
    };

    bdm_abstract_report rep{};
    rep.diagnostics_m_min = 1e300;

    DenseMatrix A = random_hpd(dim);
    for (double alpha : {0.25, 0.5, 0.75, 1.25, 1.5}) {
      DenseMatrix got = frac_power_neg(A, cx(alpha), q);
      DenseMatrix want = spectral_oracle_power(A, cx(-alpha));
      rep.frac_power_max_err = std::max(
          rep.frac_power_max_err, norm2(got - want) / std::max(1.0, norm2(want)));
    }

    DenseMatrix J = DenseMatrix::Zero(2, 2);
    J(0, 0) = 2.0;
    J(0, 1) = 1.0;
    J(1, 1) = 2.0;
    DenseMatrix sq = sqrt_op(J, q);
    DenseMatrix sq_want = DenseMatrix::Zero(2, 2);
    sq_want(0, 0) = std::sqrt(2.0);
    sq_want(0, 1) = std::sqrt(2.0) / 4.0;
    sq_want(1, 1) = std::sqrt(2.0);
    rep.sqrt_anchor_err = norm2(sq - sq_want);

    rep.semigroup_max_resid = semigroup_check(J, cx(0.5), cx(0.5), q);
    rep.semigroup_max_resid = std::max(
        rep.semigroup_max_resid, semigroup_check(A, cx(0.3, 0.1), cx(0.2, -0.1), q));

    // z close below the spectra keeps the O(h^2) difference term above the
    // quadrature noise floor.
    DenseMatrix A0 = random_hpd(dim);
    DenseMatrix A1 = A0 + 0.25 * random_hpd(dim);
    double zq = -1.0;
    rep.trace_resid_h = trace_formula_residual(A1, A0, zq, 4e-3, q);
    rep.trace_resid_h_half = trace_formula_residual(A1, A0, zq, 2e-3, q);

    DenseMatrix D1 = DenseMatrix::Zero(2, 2), D0 = DenseMatrix::Zero(2, 2);
    D1(0, 0) = 2.0;
    D1(1, 1) = 3.0;
    D0(0, 0) = 1.0;
    D0(1, 1) = 2.0;
    {
      cx dp = sym_det_matrix(D1, D0, -1.0 + 1e-4, q);
      cx dm = sym_det_matrix(D1, D0, -1.0 - 1e-4, q);
      cx deriv = -std::log(dp / dm) / cx(2e-4);
      rep.trace_anchor_err = std::abs(deriv - cx(-0.25));
    }

    for (int rep_i = 0; rep_i < 3; ++rep_i) {
      DenseMatrix B0 = random_hpd(dim);
      DenseMatrix B1 = B0 + 0.3 * random_hpd(dim);
      double z = -0.5 - 2.0 * norm2(B1);
      cx lhs = sym_det_matrix(B1, B0, z, q);
      DenseMatrix I = DenseMatrix::Identity(dim, dim);
      cx rhs = ((B1 - z * I) * (B0 - z * I).inverse()).determinant();
      rep.det_identity_max_err =
          std::max(rep.det_identity_max_err,
                   std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }

    for (const DenseMatrix* M : {&A, &A0, &A1}) {
      PositiveTypeDiagnostics d =
          positive_type_diagnostics(*M, default_t_grid(*M, 120));
      rep.diagnostics_m_min = std::min(rep.diagnostics_m_min, d.M_A_estimate);
    }

    *out = rep;
  });
}

}  // extern "C"
