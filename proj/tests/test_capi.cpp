#include <doctest.h>

#include <bdmap/bdmap.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace {

struct Pot {
  bdm_potential* p = nullptr;
  ~Pot() { bdm_potential_free(p); }
};

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("potential lifecycle and evaluation") {
  Pot pot;
  REQUIRE(bdm_potential_cosine(1.0, 1.0, 1.0, 0.0, &pot.p) == BDM_OK);
  CHECK(std::abs(bdm_potential_eval(pot.p, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(bdm_potential_eval(pot.p, 0.25)) < 1e-15);

  bdm_potential* bad = nullptr;
  CHECK(bdm_potential_zero(-1.0, &bad) == BDM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(bdm_last_error_message()).find("positive") !=
        std::string::npos);

  std::vector<double> xs = {0.0, 0.5, 1.0}, vs = {0.0, 1.0, 0.0};
  Pot hat;
  REQUIRE(bdm_potential_samples(1.0, xs.data(), vs.data(), 3, &hat.p) == BDM_OK);
  CHECK(std::abs(bdm_potential_eval(hat.p, 0.25) - 0.5) < 1e-15);
}

TEST_CASE("fundamental system and determinants") {
  Pot pot;
  REQUIRE(bdm_potential_zero(1.0, &pot.p) == BDM_OK);

  double vals[8], ls = 0.0;
  REQUIRE(bdm_fundamental(pot.p, -1.0, 0.0, 1e-10, vals, &ls) == BDM_OK);
  double s = std::exp(ls);
  CHECK(std::abs(vals[0] * s - std::cosh(1.0)) < 1e-9);
  CHECK(std::abs(vals[4] * s - std::sinh(1.0)) < 1e-9);

  double d[2], dls = 0.0;
  REQUIRE(bdm_char_det(pot.p, -1.0, 0.0, 0.0, 0.0, 1e-10, d, &dls) == BDM_OK);
  CHECK(std::abs(d[0] * std::exp(dls) - std::sinh(1.0)) < 1e-9);

  double det[2];
  REQUIRE(bdm_lambda_det(pot.p, -4.0, 0.0, 0.0, 0.0, M_PI / 2, M_PI / 2,
                         1e-10, det) == BDM_OK);
  CHECK(std::abs(det[0] - 4.0) < 1e-8);
  CHECK(std::abs(det[1]) < 1e-9);

  // eigenvalue of the source condition
  CHECK(bdm_lambda_det(pot.p, M_PI * M_PI, 0.0, 0.0, 0.0, M_PI / 2, M_PI / 2,
                       1e-10, det) == BDM_ERR_AT_EIGENVALUE);
}

TEST_CASE("map, transfer, herglotz and asymptotics") {
  Pot pot;
  REQUIRE(bdm_potential_zero(1.0, &pot.p) == BDM_OK);

  double L[8];
  REQUIRE(bdm_lambda_map(pot.p, -1.0, 0.0, 0.0, 0.0, M_PI / 2, M_PI / 2, 1e-10,
                         L) == BDM_OK);
  double coth1 = std::cosh(1.0) / std::sinh(1.0);
  CHECK(std::abs(L[0] + coth1) < 1e-9);

  double ref[8];
  REQUIRE(bdm_lambda_map(pot.p, -1.0, 0.0, M_PI / 4, M_PI / 4, 3 * M_PI / 4,
                         3 * M_PI / 4, 1e-10, ref) == BDM_OK);
  double rec[8];
  REQUIRE(bdm_lft_transfer(ref, 0.0, 0.0, M_PI / 2, M_PI / 2, M_PI / 4,
                           M_PI / 4, 3 * M_PI / 4, 3 * M_PI / 4, rec) == BDM_OK);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(rec[i] - L[i]) < 1e-7);

  double me = 0.0;
  REQUIRE(bdm_herglotz_check(pot.p, 0.0, 1.0, 0.0, 0.0, M_PI / 2, M_PI / 2,
                             1e-10, &me) == BDM_OK);
  CHECK(me > 0.0);
  CHECK(bdm_herglotz_check(pot.p, 0.0, -1.0, 0.0, 0.0, M_PI / 2, M_PI / 2,
                           1e-10, &me) == BDM_ERR_INVALID_ARGUMENT);

  double lead[2];
  REQUIRE(bdm_lambda_asymptotic_leading(0.0, 0.0, M_PI / 2, M_PI / 2, -100.0,
                                        lead) == BDM_OK);
  CHECK(std::abs(lead[0] - 100.0) < 1e-12);
  CHECK(bdm_lambda_asymptotic_leading(0.0, 0.0, 0.0, 1.0, -100.0, lead) ==
        BDM_ERR_UNSUPPORTED_CASE);
}

TEST_CASE("spectral surface") {
  Pot pot;
  REQUIRE(bdm_potential_zero(1.0, &pot.p) == BDM_OK);

  double vals[3], asym = 0.0;
  REQUIRE(bdm_eigenvalues(pot.p, 0.0, 0.0, 3, 1e-10, vals, &asym) == BDM_OK);
  CHECK(std::abs(vals[0] - M_PI * M_PI) < 1e-7);
  CHECK(std::abs(vals[2] - 9 * M_PI * M_PI) < 1e-6);

  double tr[2], tail = 0.0;
  REQUIRE(bdm_trace_resolvent_diff(pot.p, 0.0, 0.0, M_PI / 2, M_PI / 2, -1.0,
                                   0.0, 120, 1e-6, tr, &tail) == BDM_OK);
  CHECK(std::abs(tr[0] - 1.0) < 1e-6);
  CHECK(tail < 1e-6);

  double ld[2], est = 0.0;
  REQUIRE(bdm_log_det_derivative(pot.p, 0.0, 0.0, M_PI / 2, M_PI / 2, -1.0,
                                 0.0, 1e-3, 1e-10, ld, &est) == BDM_OK);
  CHECK(std::abs(ld[0] - 1.0) < 1e-8);

  int cnt = 0;
  REQUIRE(bdm_ssf_counting(pot.p, 0.0, 0.0, M_PI / 2, M_PI / 2, 5.0, 1e-10,
                           &cnt) == BDM_OK);
  CHECK(cnt == -1);

  std::vector<double> grid = {-2.0, 1.0, 5.0, 15.0};
  std::vector<int> gv(grid.size());
  std::vector<double> res(grid.size());
  std::vector<double> bps(64);
  std::vector<int> iv(65);
  size_t nbp = 0;
  int eta = 0;
  REQUIRE(bdm_spectral_shift(pot.p, 0.0, 0.0, M_PI / 2, M_PI / 2, grid.data(),
                             grid.size(), 1e-10, gv.data(), res.data(),
                             bps.data(), iv.data(), bps.size(), &nbp,
                             &eta) == BDM_OK);
  CHECK(eta == 1);
  CHECK(gv[0] == 0);
  CHECK(gv[1] == -1);
  CHECK(gv[2] == -1);
  CHECK(nbp >= 2);
}

TEST_CASE("resolvent surface") {
  Pot pot;
  REQUIRE(bdm_potential_zero(1.0, &pot.p) == BDM_OK);

  double g[2];
  REQUIRE(bdm_greens_kernel(pot.p, 0.0, 0.0, 0.0, 0.0, 0.75, 0.25, 1e-10, g) ==
          BDM_OK);
  CHECK(std::abs(g[0] - 0.0625) < 1e-9);

  const int n = 256;
  std::vector<double> f(2 * (n + 1), 0.0);
  for (int i = 0; i <= n; ++i) f[2 * static_cast<std::size_t>(i)] = 1.0;
  std::vector<double> u(2 * (n + 1)), du(2 * (n + 1));
  REQUIRE(bdm_apply_resolvent(pot.p, 0.0, 0.0, 0.0, 0.0, f.data(), n, 1e-10,
                              u.data(), du.data()) == BDM_OK);
  double xmid = 0.5;
  CHECK(std::abs(u[2 * (n / 2)] - 0.5 * xmid * (1 - xmid)) < 1e-8);

  double rows[4];
  REQUIRE(bdm_boundary_rows(pot.p, 0.0, 0.0, 0.0, 0.0, M_PI / 2, M_PI / 2,
                            f.data(), n, 1e-10, rows) == BDM_OK);
  CHECK(std::abs(rows[0] - 0.5) < 1e-8);
  CHECK(std::abs(rows[2] - 0.5) < 1e-8);

  std::vector<double> uk(2 * (n + 1));
  REQUIRE(bdm_krein_resolvent(pot.p, -1.0, 0.0, 0.0, 0.0, M_PI / 2, M_PI / 2,
                              f.data(), n, 1e-10, uk.data(), nullptr) == BDM_OK);
  for (int i = 0; i <= n; ++i)
    CHECK(std::abs(uk[2 * static_cast<std::size_t>(i)] - 1.0) < 1e-6);

  double resid = 0.0;
  REQUIRE(bdm_lambda_derivative_identity(pot.p, -1.0, 0.0, 0.0, 0.0, M_PI / 2,
                                         M_PI / 2, 1e-3, 1e-10, &resid) ==
          BDM_OK);
  CHECK(resid < 1e-6);
}

TEST_CASE("discrete surface") {
  Pot pot;
  REQUIRE(bdm_potential_zero(1.0, &pot.p) == BDM_OK);

  double v[2];
  REQUIRE(bdm_sym_det_closed_form(pot.p, -9.0, 0.0, M_PI / 2, M_PI / 2,
                                  M_PI / 4, M_PI / 4, 1e-10, v) == BDM_OK);
  CHECK(std::abs(v[0] - 0.44113118) < 1e-6);

  double vd[2];
  REQUIRE(bdm_sym_det_discrete(pot.p, -9.0, M_PI / 2, M_PI / 2, M_PI / 4,
                               M_PI / 4, 400, 1e-10, vd) == BDM_OK);
  CHECK(std::abs(vd[0] - v[0]) < 1e-3);

  int ns[3] = {100, 200, 400};
  std::vector<double> values(6), errors(3);
  double ref[2], order = 0.0;
  REQUIRE(bdm_convergence_study(pot.p, -9.0, M_PI / 2, M_PI / 2, M_PI / 4,
                                M_PI / 4, ns, 3, 1e-10, values.data(),
                                errors.data(), ref, &order) == BDM_OK);
  CHECK(order > 1.0);

  double sv[3];
  REQUIRE(bdm_kernel_dimension_probe(pot.p, -9.0, 0.0, 0.0, M_PI / 4, M_PI / 4,
                                     64, 3, sv) == BDM_OK);
  CHECK(sv[1] < 1e-10 * sv[2]);

  CHECK(bdm_sym_det_discrete(pot.p, 100.0, M_PI / 2, M_PI / 2, M_PI / 4,
                             M_PI / 4, 64, 1e-10, vd) ==
        BDM_ERR_NOT_BELOW_SPECTRUM);
}

TEST_CASE("dense laboratory surface") {
  // diag(1, 4) packed re/im interleaved
  double A[8] = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, 0.0};
  double out[8];
  REQUIRE(bdm_frac_power_neg(A, 2, 0.5, 0.0, 1e-12, out) == BDM_OK);
  CHECK(std::abs(out[0] - 1.0) < 1e-9);
  CHECK(std::abs(out[6] - 0.5) < 1e-9);

  REQUIRE(bdm_sqrt_op(A, 2, 1e-12, out) == BDM_OK);
  CHECK(std::abs(out[6] - 2.0) < 1e-9);

  double B[8] = {2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0};
  double C[8] = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0};
  double det[2];
  REQUIRE(bdm_sym_det_matrix(B, C, 2, -1.0, 1e-12, det) == BDM_OK);
  CHECK(std::abs(det[0] - 2.0) < 1e-8);

  double resid = 0.0;
  REQUIRE(bdm_trace_formula_residual(B, C, 2, -1.0, 1e-3, 1e-12, &resid) ==
          BDM_OK);
  CHECK(resid < 1e-7);

  REQUIRE(bdm_semigroup_check(A, 2, 0.25, 0.0, 0.25, 0.0, 1e-12, &resid) ==
          BDM_OK);
  CHECK(resid < 1e-9);

  double neg[8] = {-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0};
  CHECK(bdm_frac_power_neg(neg, 2, 0.5, 0.0, 1e-12, out) ==
        BDM_ERR_NOT_POSITIVE_TYPE);

  double m = 0.0, ang = 0.0, t0 = 0.0;
  REQUIRE(bdm_positive_type_diagnostics(A, 2, 120, &m, &ang, &t0) == BDM_OK);
  CHECK(m >= 1.0);
  CHECK(ang < 1e-10);

  bdm_abstract_report rep{};
  REQUIRE(bdm_abstract_battery(4, 7u, 1e-10, &rep) == BDM_OK);
  CHECK(rep.frac_power_max_err < 1e-8);
  CHECK(rep.sqrt_anchor_err < 1e-8);
  CHECK(rep.semigroup_max_resid < 1e-8);
  CHECK(rep.det_identity_max_err < 1e-8);
  CHECK(rep.diagnostics_m_min >= 1.0);

  // determinism: identical seeds give identical reports
  bdm_abstract_report rep2{};
  REQUIRE(bdm_abstract_battery(4, 7u, 1e-10, &rep2) == BDM_OK);
  CHECK(rep.frac_power_max_err == rep2.frac_power_max_err);
  CHECK(rep.trace_resid_h == rep2.trace_resid_h);
}

TEST_CASE("version") {
  int ma = -1, mi = -1, pa = -1;
  bdm_version(&ma, &mi, &pa);
  CHECK(ma >= 0);
  CHECK(mi >= 0);
  CHECK(pa >= 0);
}

}  // TEST_SUITE
