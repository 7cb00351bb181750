#include "discrete.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace bdmap {

namespace {

double mod_pi(double t) {
  double r = std::fmod(t, M_PI);
  if (r < 0.0) r += M_PI;
  if (r > M_PI - kAngleModTol || r < kAngleModTol) r = 0.0;
  return r;
}

// Solve (T - z) x = b for symmetric tridiagonal T with z below its spectrum.
std::vector<double> tridiag_solve(const DiscreteHamiltonian& H, double z,
                                  std::vector<double> b) {
  const std::size_t m = H.dim();
  std::vector<double> d(m), c(m > 0 ? m - 1 : 0);
  d[0] = H.diag[0] - z;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    c[i] = H.offdiag[i] / d[i];
    d[i + 1] = H.diag[i + 1] - z - H.offdiag[i] * c[i];
    b[i + 1] -= c[i] * b[i];
  }
  b[m - 1] /= d[m - 1];
  for (std::size_t i = m - 1; i > 0; --i)
    b[i - 1] = b[i - 1] / d[i - 1] - c[i - 1] * b[i];
  return b;
}

}  // namespace

int DiscreteHamiltonian::count_below(double z) const {
  int neg = 0;
  double d = diag[0] - z;
  if (d < 0.0) ++neg;
  for (std::size_t i = 1; i < dim(); ++i) {
    double piv = d;
    if (piv == 0.0) piv = 1e-300;
    d = diag[i] - z - offdiag[i - 1] * offdiag[i - 1] / piv;
    if (d < 0.0) ++neg;
  }
  return neg;
}

DiscreteHamiltonian discretize(const Potential& pot,
                               const BoundaryAngles& angles, int n) {
  angles.require_real("discretize");
  if (n < 8) throw std::invalid_argument("discretize: need n >= 8");
  DiscreteHamiltonian H;
  H.n = n;
  H.h = pot.R() / (n + 1);
  H.theta0 = mod_pi(angles.t0());
  H.thetaR = mod_pi(angles.tR());
  H.robin0 = H.theta0 != 0.0;
  H.robinR = H.thetaR != 0.0;

  const double h = H.h;
  const double ih2 = 1.0 / (h * h);
  int first = H.robin0 ? 0 : 1;
  int last = H.robinR ? n + 1 : n;
  for (int j = first; j <= last; ++j) H.nodes.push_back(j * h);

  const std::size_t m = H.nodes.size();
  H.diag.resize(m);
  H.offdiag.assign(m - 1, -ih2);
  for (std::size_t i = 0; i < m; ++i) H.diag[i] = 2.0 * ih2 + pot(H.nodes[i]);

  // Half-cell ghost rows made symmetric by the diag(1/2,...,1/2) similarity:
  // corner diagonal 2(1 - h cot)/h^2 + V, corner coupling -sqrt(2)/h^2.
  if (H.robin0) {
    double cot0 = 1.0 / std::tan(H.theta0);
    H.diag[0] = 2.0 * (1.0 - h * cot0) * ih2 + pot(H.nodes[0]);
    H.offdiag[0] = -std::sqrt(2.0) * ih2;
  }
  if (H.robinR) {
    double cotR = 1.0 / std::tan(H.thetaR);
    H.diag[m - 1] = 2.0 * (1.0 - h * cotR) * ih2 + pot(H.nodes[m - 1]);
    H.offdiag[m - 2] = -std::sqrt(2.0) * ih2;
  }
  return H;
}

cx sym_det_discrete(const DiscreteHamiltonian& base,
                    const DiscreteHamiltonian& primed, double z, double tol) {
  (void)tol;
  if (base.n != primed.n || base.h != primed.h)
    throw std::invalid_argument("sym_det_discrete: meshes do not match");
  if (base.count_below(z) > 0 || primed.count_below(z) > 0)
    throw not_below_spectrum_error("sym_det_discrete: z not below spectra");

  // Dropped Dirichlet nodes make the zero-extended base inverse strictly
  // rank-deficient on the primed space; the determinant is exactly zero.
  if (base.dim() != primed.dim()) return cx(0.0);

  const std::size_t m = base.dim();
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (base.offdiag[i] != primed.offdiag[i])
      throw std::invalid_argument(
          "sym_det_discrete: operators differ off the diagonal");

  // H' - H is diagonal; det(I - (H'-z)^{1/2}[...](H'-z)^{1/2}) collapses to
  // det(I_r + D_J G_J) over the nonzero-difference index set J.
  std::vector<std::size_t> J;
  std::vector<double> dvals;
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    scale = std::max(scale, std::abs(base.diag[i]) + std::abs(primed.diag[i]));
  for (std::size_t i = 0; i < m; ++i) {
    double d = primed.diag[i] - base.diag[i];
    if (std::abs(d) > 1e-14 * scale) {
      J.push_back(i);
      dvals.push_back(d);
    }
  }
  if (J.empty()) return cx(1.0);

  const std::size_t r = J.size();
  Eigen::MatrixXd G(r, r);
  for (std::size_t c = 0; c < r; ++c) {
    std::vector<double> e(m, 0.0);
    e[J[c]] = 1.0;
    std::vector<double> x = tridiag_solve(base, z, std::move(e));
    for (std::size_t rI = 0; rI < r; ++rI) G(rI, c) = x[J[rI]];
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(r, r);
  for (std::size_t rI = 0; rI < r; ++rI) M.row(rI) += dvals[rI] * G.row(rI);
  return cx(M.determinant());
}

Mat2 form_gram_matrix(const Potential& pot, cx z, const BoundaryAngles& base,
                      const BoundaryAngles& primed, double tol) {
  base.require_real("form_gram_matrix");
  primed.require_real("form_gram_matrix");
  double t0 = mod_pi(base.t0()), tR = mod_pi(base.tR());
  double t0p = mod_pi(primed.t0()), tRp = mod_pi(primed.tR());
  if (t0p == 0.0 || tRp == 0.0)
    throw std::invalid_argument(
        "form_gram_matrix: primed angles must be Robin");
  auto [up, um] = u_plus_minus(pot, z, BoundaryAngles(t0p, tRp), tol);
  cx dup0 = up.deriv_at(0.0);
  cx um0 = um.value_at(0.0);
  cx dumR = um.deriv_at(um.x_max());
  double cot0p = 1.0 / std::tan(t0p);
  double cotRp = 1.0 / std::tan(tRp);
  double s00 = std::sin(t0 - t0p), sRR = std::sin(tR - tRp);

  Mat2 C;
  C.a11 = -(s00 * s00) / (std::sin(t0p) * std::sin(t0p)) / (dup0 + cot0p);
  C.a22 = (sRR * sRR) / (std::sin(tRp) * std::sin(tRp)) / (dumR - cotRp);
  C.a12 = s00 * sRR / (std::sin(t0p) * std::sin(tRp)) * um0 / (dumR - cotRp);
  C.a21 = C.a12;
  return C;
}

cx sym_det_closed_form(const Potential& pot, cx z, const BoundaryAngles& base,
                       const BoundaryAngles& primed, double tol) {
  double t0 = mod_pi(base.t0()), tR = mod_pi(base.tR());
  double t0p = mod_pi(primed.t0()), tRp = mod_pi(primed.tR());
  BoundaryAngles tb(t0, tR), tp(t0p, tRp);
  Mat2 C = form_gram_matrix(pot, z, tb, tp, tol);
  bool same0 = t0 == t0p, sameR = tR == tRp;
  if (same0 && sameR) return cx(1.0);

  Mat2 L = lambda_map(pot, z, tb, tp, tol);
  Mat2 LC = L * C;
  // S^{-1} with S = diag(sin(t0 - t0p), sin(tR - tRp)); when an angle is
  // shared the corresponding row of C vanishes and the limit is taken
  // entrywise (row of S^{-1} L C tends to zero off the shared block).
  Mat2 SinvLC;
  if (!same0) {
    double s = std::sin(t0 - t0p);
    SinvLC.a11 = LC.a11 / s;
    SinvLC.a12 = LC.a12 / s;
  }
  if (!sameR) {
    double s = std::sin(tR - tRp);
    SinvLC.a21 = LC.a21 / s;
    SinvLC.a22 = LC.a22 / s;
  }
  Mat2 M = Mat2::identity() - SinvLC;
  return M.det();
}

ConvergenceStudy convergence_study(const Potential& pot, double z,
                                   const BoundaryAngles& base,
                                   const BoundaryAngles& primed,
                                   const std::vector<int>& n_list, double tol) {
  if (n_list.size() < 3)
    throw std::invalid_argument("convergence_study: need >= 3 mesh sizes");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("convergence_study: n_list must ascend");

  ConvergenceStudy out;
  out.reference = sym_det_closed_form(pot, cx(z), base, primed, tol);
  for (int n : n_list) {
    DiscreteHamiltonian Hb = discretize(pot, base, n);
    DiscreteHamiltonian Hp = discretize(pot, primed, n);
    cx v = sym_det_discrete(Hb, Hp, z, tol);
    out.rows.push_back({n, v, std::abs(v - out.reference)});
  }
  // Least-squares slope of log error against log n.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (const ConvergenceRow& r : out.rows) {
    if (r.error <= 0.0) continue;
    double lx = std::log(static_cast<double>(r.n));
    double ly = std::log(r.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++used;
  }
  out.fitted_order =
      used >= 2 ? -(used * sxy - sx * sy) / (used * sxx - sx * sx) : 0.0;
  return out;
}

std::vector<double> kernel_dimension_probe(const DiscreteHamiltonian& base,
                                           const DiscreteHamiltonian& primed,
                                           double z, int k) {
  if (base.n != primed.n || base.h != primed.h)
    throw std::invalid_argument("kernel_dimension_probe: meshes do not match");
  if (base.count_below(z) > 0 || primed.count_below(z) > 0)
    throw not_below_spectrum_error("kernel_dimension_probe: z not below spectra");

  const std::size_t m = primed.dim();
  Eigen::VectorXd pd = Eigen::Map<const Eigen::VectorXd>(
      primed.diag.data(), static_cast<Eigen::Index>(m));
  Eigen::VectorXd po = Eigen::Map<const Eigen::VectorXd>(
      primed.offdiag.data(), static_cast<Eigen::Index>(m - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(pd, po);
  Eigen::VectorXd sq = (es.eigenvalues().array() - z).sqrt();
  Eigen::MatrixXd S =
      es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();

  // Offset of the base node set inside the primed one (the primed operator
  // retains at least the base's nodes for the regimes probed here).
  std::size_t off = 0;
  while (off < m && std::abs(primed.nodes[off] - base.nodes[0]) > 1e-12)
    ++off;
  if (off + base.dim() > m)
    throw std::invalid_argument(
        "kernel_dimension_probe: base nodes not contained in primed nodes");

  Eigen::MatrixXd M(m, m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> b(base.dim());
    for (std::size_t i = 0; i < base.dim(); ++i)
      b[i] = S(static_cast<Eigen::Index>(off + i), static_cast<Eigen::Index>(c));
    std::vector<double> x = tridiag_solve(base, z, std::move(b));
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < base.dim(); ++i)
      full(static_cast<Eigen::Index>(off + i)) = x[i];
    M.col(static_cast<Eigen::Index>(c)) = full;
  }
  M = S * M;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  Eigen::VectorXd sv = svd.singularValues();
  int kk = std::min<int>(k, static_cast<int>(m));
  std::vector<double> out(static_cast<std::size_t>(kk));
  for (int i = 0; i < kk; ++i)
    out[static_cast<std::size_t>(i)] =
        sv(static_cast<Eigen::Index>(m) - 1 - i);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bdmap
