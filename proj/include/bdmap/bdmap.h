/* bdmap: boundary data maps, determinants, trace formulas and spectral
 * shift functions for one-dimensional Schrodinger operators on [0, R] with
 * separated boundary conditions, plus a finite-dimensional laboratory for
 * symmetrized perturbation determinants of positive-type matrices.
 *
 * Conventions:
 *   - complex scalars are passed as double[2] = {re, im};
 *   - 2x2 complex matrices as double[8], row-major, re/im interleaved:
 *     {a11.re, a11.im, a12.re, a12.im, a21.re, a21.im, a22.re, a22.im};
 *   - dense dim x dim complex matrices as double[2*dim*dim], row-major,
 *     re/im interleaved;
 *   - boundary angles are real radians; the pair (theta0, thetaR) encodes
 *     cos(theta0) u(0) + sin(theta0) u'(0) = 0 and
 *     cos(thetaR) u(R) - sin(thetaR) u'(R) = 0;
 *   - every function returns a bdm_status; on failure
 *     bdm_last_error_message() describes the error (thread-local).
 */

#ifndef BDMAP_BDMAP_H
#define BDMAP_BDMAP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BDMAP_API __declspec(dllexport)
#else
#define BDMAP_API __attribute__((visibility("default")))
#endif

typedef enum bdm_status {
  BDM_OK = 0,
  BDM_ERR_INVALID_ARGUMENT = 1,
  BDM_ERR_AT_EIGENVALUE = 2,
  BDM_ERR_TOLERANCE_NOT_MET = 3,
  BDM_ERR_NONFINITE = 4,
  BDM_ERR_GRID_MISMATCH = 5,
  BDM_ERR_DOMAIN_VIOLATION = 6,
  BDM_ERR_BRACKETING_FAILURE = 7,
  BDM_ERR_TAIL_TOO_LARGE = 8,
  BDM_ERR_PHASE_TRACKING_LOST = 9,
  BDM_ERR_SINGULAR_TRANSFER = 10,
  BDM_ERR_SINGULAR_LAMBDA = 11,
  BDM_ERR_UNSUPPORTED_CASE = 12,
  BDM_ERR_NOT_BELOW_SPECTRUM = 13,
  BDM_ERR_NOT_POSITIVE_TYPE = 14,
  BDM_ERR_NOT_PD = 15,
  BDM_ERR_QUADRATURE = 16,
  BDM_ERR_INTERNAL = 17
} bdm_status;

BDMAP_API const char* bdm_last_error_message(void);
BDMAP_API void bdm_version(int* major, int* minor, int* patch);

/* ---- potentials ------------------------------------------------------- */

typedef struct bdm_potential bdm_potential;

BDMAP_API bdm_status bdm_potential_zero(double R, bdm_potential** out);
BDMAP_API bdm_status bdm_potential_constant(double R, double c,
                                            bdm_potential** out);
/* V(x) = amplitude * cos(2 pi frequency x / R + phase) */
BDMAP_API bdm_status bdm_potential_cosine(double R, double amplitude,
                                          double frequency, double phase,
                                          bdm_potential** out);
/* piecewise-linear samples; xs strictly ascending, xs[0] = 0, xs[n-1] = R */
BDMAP_API bdm_status bdm_potential_samples(double R, const double* xs,
                                           const double* vs, size_t n,
                                           bdm_potential** out);
BDMAP_API void bdm_potential_free(bdm_potential* pot);
BDMAP_API double bdm_potential_eval(const bdm_potential* pot, double x);

/* ---- fundamental system and boundary data maps ------------------------ */

/* out_vals = {theta, theta', phi, phi'} at x = R (8 doubles); true values
 * are out_vals * exp(out_log_scale). */
BDMAP_API bdm_status bdm_fundamental(const bdm_potential* pot, double z_re,
                                     double z_im, double tol,
                                     double out_vals[8],
                                     double* out_log_scale);

BDMAP_API bdm_status bdm_char_det(const bdm_potential* pot, double z_re,
                                  double z_im, double theta0, double thetaR,
                                  double tol, double out_value[2],
                                  double* out_log_scale);

BDMAP_API bdm_status bdm_lambda_map(const bdm_potential* pot, double z_re,
                                    double z_im, double theta0, double thetaR,
                                    double theta0p, double thetaRp, double tol,
                                    double out_mat[8]);

BDMAP_API bdm_status bdm_lambda_det(const bdm_potential* pot, double z_re,
                                    double z_im, double theta0, double thetaR,
                                    double theta0p, double thetaRp, double tol,
                                    double out_det[2]);

BDMAP_API bdm_status bdm_s_matrix(double delta0, double deltaR,
                                  double out_mat[8]);

BDMAP_API bdm_status bdm_lft_transfer(const double lambda_ref[8],
                                      double theta0, double thetaR,
                                      double theta0p, double thetaRp,
                                      double delta0, double deltaR,
                                      double delta0p, double deltaRp,
                                      double out_mat[8]);

/* smallest eigenvalue of Im(Lambda * S); requires Im z > 0 */
BDMAP_API bdm_status bdm_herglotz_check(const bdm_potential* pot, double z_re,
                                        double z_im, double theta0,
                                        double thetaR, double theta0p,
                                        double thetaRp, double tol,
                                        double* out_min_eig);

/* leading term of det Lambda for z < 0 on the real axis */
BDMAP_API bdm_status bdm_lambda_asymptotic_leading(double theta0, double thetaR,
                                                   double theta0p,
                                                   double thetaRp, double z,
                                                   double out_value[2]);

/* ---- spectra, traces, spectral shift ---------------------------------- */

BDMAP_API bdm_status bdm_eigenvalues(const bdm_potential* pot, double theta0,
                                     double thetaR, int n, double tol,
                                     double* out_values /* n */,
                                     double* out_asymptotic_constant);

BDMAP_API bdm_status bdm_trace_resolvent_diff(
    const bdm_potential* pot, double base0, double baseR, double primed0,
    double primedR, double z_re, double z_im, int n_terms, double tol,
    double out_value[2], double* out_tail_bound);

BDMAP_API bdm_status bdm_log_det_derivative(const bdm_potential* pot,
                                            double base0, double baseR,
                                            double primed0, double primedR,
                                            double z_re, double z_im, double h,
                                            double tol, double out_value[2],
                                            double* out_error_estimate);

/* Grid values, per-point residuals, and the breakpoint structure. The
 * interval-value array needs capacity breakpoint_capacity + 1. */
BDMAP_API bdm_status bdm_spectral_shift(
    const bdm_potential* pot, double base0, double baseR, double primed0,
    double primedR, const double* grid, size_t n_grid, double tol,
    int* out_grid_values /* n_grid */, double* out_residuals /* n_grid */,
    double* out_breakpoints, int* out_interval_values,
    size_t breakpoint_capacity, size_t* out_breakpoint_count, int* out_eta);

BDMAP_API bdm_status bdm_ssf_counting(const bdm_potential* pot, double base0,
                                      double baseR, double primed0,
                                      double primedR, double lambda, double tol,
                                      int* out_count_diff);

/* ---- resolvents and Krein corrections --------------------------------- */

BDMAP_API bdm_status bdm_greens_kernel(const bdm_potential* pot, double z_re,
                                       double z_im, double theta0,
                                       double thetaR, double x, double x_prime,
                                       double tol, double out_value[2]);

/* f sampled at the n_out+1 uniform nodes x_j = j R / n_out, re/im
 * interleaved (2*(n_out+1) doubles). Outputs use the same layout. */
BDMAP_API bdm_status bdm_apply_resolvent(const bdm_potential* pot, double z_re,
                                         double z_im, double theta0,
                                         double thetaR, const double* f,
                                         int n_out, double tol, double* out_u,
                                         double* out_du);

BDMAP_API bdm_status bdm_boundary_rows(const bdm_potential* pot, double z_re,
                                       double z_im, double base0, double baseR,
                                       double primed0, double primedR,
                                       const double* f, int n_out, double tol,
                                       double out_rows[4]);

BDMAP_API bdm_status bdm_krein_resolvent(const bdm_potential* pot, double z_re,
                                         double z_im, double base0,
                                         double baseR, double primed0,
                                         double primedR, const double* f,
                                         int n_out, double tol, double* out_u,
                                         double* out_du);

BDMAP_API bdm_status bdm_lambda_derivative_identity(
    const bdm_potential* pot, double z_re, double z_im, double base0,
    double baseR, double primed0, double primedR, double h, double tol,
    double* out_residual);

/* ---- discretization checks -------------------------------------------- */

BDMAP_API bdm_status bdm_sym_det_discrete(const bdm_potential* pot, double z,
                                          double base0, double baseR,
                                          double primed0, double primedR,
                                          int n, double tol,
                                          double out_value[2]);

BDMAP_API bdm_status bdm_sym_det_closed_form(const bdm_potential* pot,
                                             double z_re, double z_im,
                                             double base0, double baseR,
                                             double primed0, double primedR,
                                             double tol, double out_value[2]);

BDMAP_API bdm_status bdm_convergence_study(
    const bdm_potential* pot, double z, double base0, double baseR,
    double primed0, double primedR, const int* n_list, size_t n_count,
    double tol, double* out_values /* 2*n_count */,
    double* out_errors /* n_count */, double out_reference[2],
    double* out_fitted_order);

BDMAP_API bdm_status bdm_kernel_dimension_probe(const bdm_potential* pot,
                                                double z, double base0,
                                                double baseR, double primed0,
                                                double primedR, int n, int k,
                                                double* out_singular_values);

/* ---- dense positive-type laboratory ------------------------------------ */

BDMAP_API bdm_status bdm_frac_power_neg(const double* a, int dim,
                                        double alpha_re, double alpha_im,
                                        double tol, double* out);

BDMAP_API bdm_status bdm_sqrt_op(const double* a, int dim, double tol,
                                 double* out);

BDMAP_API bdm_status bdm_sym_det_matrix(const double* a, const double* a0,
                                        int dim, double z, double tol,
                                        double out_det[2]);

BDMAP_API bdm_status bdm_trace_formula_residual(const double* a,
                                                const double* a0, int dim,
                                                double z, double h, double tol,
                                                double* out_residual);

BDMAP_API bdm_status bdm_semigroup_check(const double* a, int dim,
                                         double a1_re, double a1_im,
                                         double a2_re, double a2_im,
                                         double tol, double* out_residual);

BDMAP_API bdm_status bdm_spectral_oracle_power(const double* a, int dim,
                                               double alpha_re,
                                               double alpha_im, double* out);

BDMAP_API bdm_status bdm_positive_type_diagnostics(const double* a, int dim,
                                                   int t_points,
                                                   double* out_m_estimate,
                                                   double* out_sector_angle,
                                                   double* out_shift_t0);

/* Deterministic randomized battery over Hermitian positive definite and
 * non-normal test matrices; all residual fields should sit at or below the
 * documented thresholds for a healthy build. */
typedef struct bdm_abstract_report {
  double frac_power_max_err;      /* vs the spectral oracle */
  double sqrt_anchor_err;         /* [[2,1],[0,2]] closed form */
  double semigroup_max_resid;
  double trace_resid_h;           /* residual at step h */
  double trace_resid_h_half;      /* residual at step h/2 */
  double trace_anchor_err;        /* diagonal pair value vs -1/4 */
  double det_identity_max_err;    /* symmetrized vs plain determinant */
  double diagnostics_m_min;       /* smallest sampled M_A (>= 1 expected) */
} bdm_abstract_report;

BDMAP_API bdm_status bdm_abstract_battery(int dim, unsigned long long seed,
                                          double tol,
                                          bdm_abstract_report* out);

#ifdef __cplusplus
}
#endif

#endif /* BDMAP_BDMAP_H */
