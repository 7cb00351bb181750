#include "ode.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace bdmap {

namespace detail {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kRescaleLog = 30.0;

using State = std::array<cx, 4>;

inline void rhs(const Potential& pot, cx z, int pairs, double x,
                const State& y, State& dy) {
  cx w = cx(pot(x), 0.0) - z;
  for (int p = 0; p < pairs; ++p) {
    dy[2 * p] = y[2 * p + 1];
    dy[2 * p + 1] = w * y[2 * p];
  }
}

inline double sup_norm(const State& y, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(y[i]));
  return m;
}

void step_span(const Potential& pot, cx z, int pairs, double rtol, double x0,
               double x1, State& y, double& log_scale,
               const std::function<void(double)>& on_rescale) {
  const int n = 2 * pairs;
  const double span = x1 - x0;
  if (span == 0.0) return;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double scale_freq = std::sqrt(1.0 + std::abs(z) + pot.sup_abs());
  double h = dir * std::min(std::abs(span), 0.5 / scale_freq);

  State k1, k2, k3, k4, k5, k6, k7, yt, y5;
  double x = x0;
  rhs(pot, z, pairs, x, y, k1);
  long steps = 0;
  const long max_steps = 20'000'000;

  while (dir * (x1 - x) > 0.0) {
    if (++steps > max_steps)
      throw tolerance_error("ode propagation: step budget exhausted");
    if (dir * (x + h) > dir * x1) h = x1 - x;

    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
    rhs(pot, z, pairs, x + c2 * h, yt, k2);
    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(pot, z, pairs, x + c3 * h, yt, k3);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(pot, z, pairs, x + c4 * h, yt, k4);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(pot, z, pairs, x + c5 * h, yt, k5);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                          a64 * k4[i] + a65 * k5[i]);
    rhs(pot, z, pairs, x + h, yt, k6);
    for (int i = 0; i < n; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                          b6 * k6[i]);
    rhs(pot, z, pairs, x + h, y5, k7);

    double sc = std::max(sup_norm(y, n), sup_norm(y5, n));
    if (!(sc > 0.0) || !std::isfinite(sc))
      throw nonfinite_error("ode propagation: state became non-finite");
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      cx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                  e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e));
    }
    double errnorm = err / (rtol * sc);

    if (errnorm <= 1.0) {
      x += h;
      y = y5;
      k1 = k7;  // FSAL
      if (sup_norm(y, n) > std::exp(kRescaleLog)) {
        double f = sup_norm(y, n);
        double lf = std::log(f);
        for (int i = 0; i < n; ++i) {
          y[i] /= f;
          k1[i] /= f;
        }
        log_scale += lf;
        if (on_rescale) on_rescale(lf);
      }
      double grow = 0.9 * std::pow(std::max(errnorm, 1e-12), -0.2);
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      double shrink = std::max(0.9 * std::pow(errnorm, -0.2), 0.1);
      h *= shrink;
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)))
        throw tolerance_error("ode propagation: step control stalled");
    }
  }
}

}  // namespace

void integrate(const Potential& pot, cx z, int pairs, double rtol, double x0,
               double x1, std::array<cx, 4>& y, double& log_scale,
               const std::function<void(double)>& on_rescale) {
  const auto& bp = pot.breakpoints();
  if (bp.empty() || x0 == x1) {
    step_span(pot, z, pairs, rtol, x0, x1, y, log_scale, on_rescale);
    return;
  }
  // Split the span at interior sample breakpoints, honoring direction.
  std::vector<double> cuts;
  double lo = std::min(x0, x1), hi = std::max(x0, x1);
  for (double b : bp)
    if (b > lo + 1e-15 && b < hi - 1e-15) cuts.push_back(b);
  if (x0 > x1) std::reverse(cuts.begin(), cuts.end());
  double xa = x0;
  for (double b : cuts) {
    step_span(pot, z, pairs, rtol, xa, b, y, log_scale, on_rescale);
    xa = b;
  }
  step_span(pot, z, pairs, rtol, xa, x1, y, log_scale, on_rescale);
}

}  // namespace detail

namespace {

double internal_rtol(double tol) {
  if (!(tol > 0.0) || tol > 1e-4)
    throw std::invalid_argument("tol must lie in (0, 1e-4]");
  return std::max(tol / 100.0, 1e-13);
}

std::vector<double> uniform_grid(double R, int n_intervals) {
  if (n_intervals < 8) throw std::invalid_argument("path grid too coarse");
  std::vector<double> g(static_cast<std::size_t>(n_intervals) + 1);
  for (int i = 0; i <= n_intervals; ++i)
    g[static_cast<std::size_t>(i)] = R * static_cast<double>(i) / n_intervals;
  g.front() = 0.0;
  g.back() = R;
  return g;
}

// Integrate a single (u, u') pair across the full interval in either
// direction, recording at the given nodes; history is kept on the final
// rescale level throughout.
struct RecordedPair {
  std::vector<cx> u, du;
  double log_scale = 0.0;
};

RecordedPair record_pair(const Potential& pot, cx z, double rtol,
                         const std::vector<double>& nodes, cx u0, cx du0,
                         bool backward) {
  RecordedPair out;
  const std::size_t m = nodes.size();
  out.u.assign(m, cx(0.0));
  out.du.assign(m, cx(0.0));
  std::array<cx, 4> y{u0, du0, cx(0.0), cx(0.0)};
  double ls = 0.0;
  std::size_t start = backward ? m - 1 : 0;
  out.u[start] = u0;
  out.du[start] = du0;
  std::size_t recorded_end = start;

  auto on_rescale = [&](double lf) {
    double f = std::exp(-lf);
    if (backward) {
      for (std::size_t j = recorded_end; j < m; ++j) {
        out.u[j] *= f;
        out.du[j] *= f;
      }
    } else {
      for (std::size_t j = 0; j <= recorded_end; ++j) {
        out.u[j] *= f;
        out.du[j] *= f;
      }
    }
  };

  if (!backward) {
    for (std::size_t i = 0; i + 1 < m; ++i) {
      detail::integrate(pot, z, 1, rtol, nodes[i], nodes[i + 1], y, ls,
                        on_rescale);
      recorded_end = i + 1;
      out.u[i + 1] = y[0];
      out.du[i + 1] = y[1];
    }
  } else {
    for (std::size_t i = m - 1; i > 0; --i) {
      detail::integrate(pot, z, 1, rtol, nodes[i], nodes[i - 1], y, ls,
                        on_rescale);
      recorded_end = i - 1;
      out.u[i - 1] = y[0];
      out.du[i - 1] = y[1];
    }
  }
  out.log_scale = ls;
  return out;
}

}  // namespace

std::size_t SolutionPath::locate(double x) const {
  double slack = 1e-9 * (x_max() - x_min() + 1.0);
  if (x < x_min() - slack || x > x_max() + slack)
    throw grid_mismatch_error("evaluation point outside path range");
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  if (i + 1 >= grid.size()) i = grid.size() - 2;
  return i;
}

cx SolutionPath::value_at(double x) const {
  std::size_t i = locate(x);
  double h = grid[i + 1] - grid[i];
  double t = (x - grid[i]) / h;
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  double h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

cx SolutionPath::deriv_at(double x) const {
  std::size_t i = locate(x);
  double h = grid[i + 1] - grid[i];
  double t = (x - grid[i]) / h;
  cx dudx = (6 * t * t - 6 * t) * (u[i] - u[i + 1]) / h +
            (3 * t * t - 4 * t + 1) * du[i] + (3 * t * t - 2 * t) * du[i + 1];
  return dudx;
}

FundamentalValues propagate_fundamental(const Potential& pot, cx z, double tol) {
  double rtol = internal_rtol(tol);
  std::array<cx, 4> y{cx(1.0), cx(0.0), cx(0.0), cx(1.0)};
  double ls = 0.0;
  detail::integrate(pot, z, 2, rtol, 0.0, pot.R(), y, ls);
  for (const cx& v : y)
    if (!finite(v)) throw nonfinite_error("fundamental system not finite");
  FundamentalValues f;
  f.theta = y[0];
  f.theta_prime = y[1];
  f.phi = y[2];
  f.phi_prime = y[3];
  f.log_scale = ls;
  return f;
}

SolutionPath solve_with_boundary_data(const Potential& pot, cx z,
                                      const BoundaryAngles& angles, cx c0, cx cR,
                                      double tol, int n_intervals) {
  FundamentalValues f = propagate_fundamental(pot, z, tol);
  cx ct0 = std::cos(angles.theta0), st0 = std::sin(angles.theta0);
  cx ctR = std::cos(angles.thetaR), stR = std::sin(angles.thetaR);
  // Trace matrix of (theta, phi); second row carries exp(log_scale).
  Mat2 U{ct0, st0, ctR * f.theta - stR * f.theta_prime,
         ctR * f.phi - stR * f.phi_prime};
  if (U.singular())
    throw at_eigenvalue_error("boundary-value problem at an eigenvalue");
  cx d = U.det();
  // Solve U [A;B] = [c0; cR * exp(-ls)] on the stored scale.
  cx cRs = cR * std::exp(-f.log_scale);
  cx A = (c0 * U.a22 - U.a12 * cRs) / d;
  cx B = (U.a11 * cRs - c0 * U.a21) / d;

  SolutionPath p;
  p.grid = uniform_grid(pot.R(), n_intervals);
  double rtol = internal_rtol(tol);
  RecordedPair rec = record_pair(pot, z, rtol, p.grid, A, B, false);
  double s = std::exp(rec.log_scale);
  p.u.resize(rec.u.size());
  p.du.resize(rec.du.size());
  for (std::size_t i = 0; i < rec.u.size(); ++i) {
    p.u[i] = rec.u[i] * s;
    p.du[i] = rec.du[i] * s;
    if (!finite(p.u[i]) || !finite(p.du[i]))
      throw nonfinite_error("solution path not representable");
  }
  return p;
}

std::pair<SolutionPath, SolutionPath> u_plus_minus(const Potential& pot, cx z,
                                                   const BoundaryAngles& angles,
                                                   double tol, int n_intervals) {
  double rtol = internal_rtol(tol);
  std::vector<double> grid = uniform_grid(pot.R(), n_intervals);

  // u_plus: thetaR condition holds exactly at R, integrate backward, then
  // normalize u_plus(0) = 1.
  RecordedPair plus = record_pair(pot, z, rtol, grid, std::sin(angles.thetaR),
                                  std::cos(angles.thetaR), true);
  // u_minus: theta0 condition at 0, integrate forward, normalize at R.
  RecordedPair minus = record_pair(pot, z, rtol, grid, std::sin(angles.theta0),
                                   -std::cos(angles.theta0), false);

  auto normalize = [&](RecordedPair& r, std::size_t anchor,
                       const char* what) -> SolutionPath {
    double sup = 0.0;
    for (const cx& v : r.u) sup = std::max(sup, std::abs(v));
    cx v0 = r.u[anchor];
    if (std::abs(v0) <= 1e-12 * sup)
      throw at_eigenvalue_error(std::string(what) +
                                ": normalization value vanishes (eigenvalue of "
                                "the auxiliary boundary problem)");
    SolutionPath p;
    p.grid = grid;
    p.u.resize(r.u.size());
    p.du.resize(r.du.size());
    for (std::size_t i = 0; i < r.u.size(); ++i) {
      p.u[i] = r.u[i] / v0;
      p.du[i] = r.du[i] / v0;
      if (!finite(p.u[i]) || !finite(p.du[i]))
        throw nonfinite_error("solution path not representable");
    }
    return p;
  };

  SolutionPath up = normalize(plus, 0, "u_plus");
  SolutionPath um = normalize(minus, grid.size() - 1, "u_minus");
  return {std::move(up), std::move(um)};
}

cx path_wronskian(const SolutionPath& p1, const SolutionPath& p2, double x) {
  cx w = p1.value_at(x) * p2.deriv_at(x) - p1.deriv_at(x) * p2.value_at(x);
  return w * std::exp(p1.log_scale + p2.log_scale);
}

namespace {

bool same_grid(const SolutionPath& a, const SolutionPath& b) {
  if (a.grid.size() != b.grid.size()) return false;
  double slack = 1e-12 * (a.x_max() - a.x_min() + 1.0);
  for (std::size_t i = 0; i < a.grid.size(); ++i)
    if (std::abs(a.grid[i] - b.grid[i]) > slack) return false;
  return true;
}

void require_same_range(const SolutionPath& a, const SolutionPath& b) {
  double slack = 1e-9 * (a.x_max() - a.x_min() + 1.0);
  if (std::abs(a.x_min() - b.x_min()) > slack ||
      std::abs(a.x_max() - b.x_max()) > slack)
    throw grid_mismatch_error("paths cover different intervals");
}

SolutionPath resample(const SolutionPath& p, const std::vector<double>& grid) {
  SolutionPath q;
  q.grid = grid;
  q.u.resize(grid.size());
  q.du.resize(grid.size());
  q.log_scale = p.log_scale;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    q.u[i] = p.value_at(grid[i]);
    q.du[i] = p.deriv_at(grid[i]);
  }
  return q;
}

// Trapezoid rule with first-derivative endpoint correction on each cell:
// O(h^4) for C^4 integrands given exact node derivatives.
cx corrected_trapezoid(const std::vector<double>& x, const std::vector<cx>& g,
                       const std::vector<cx>& gd) {
  cx total(0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double h = x[i + 1] - x[i];
    total += 0.5 * h * (g[i] + g[i + 1]) + h * h / 12.0 * (gd[i] - gd[i + 1]);
  }
  return total;
}

cx product_integral(const SolutionPath& a, const SolutionPath& b, bool conj_a) {
  require_same_range(a, b);
  const SolutionPath* pa = &a;
  const SolutionPath* pb = &b;
  SolutionPath ra, rb;
  if (!same_grid(a, b)) {
    const std::vector<double>& g =
        a.grid.size() >= b.grid.size() ? a.grid : b.grid;
    if (a.grid.size() >= b.grid.size()) {
      rb = resample(b, g);
      pb = &rb;
    } else {
      ra = resample(a, g);
      pa = &ra;
    }
  }
  const std::size_t m = pa->grid.size();
  std::vector<cx> g(m), gd(m);
  for (std::size_t i = 0; i < m; ++i) {
    cx av = conj_a ? std::conj(pa->u[i]) : pa->u[i];
    cx ad = conj_a ? std::conj(pa->du[i]) : pa->du[i];
    g[i] = av * pb->u[i];
    gd[i] = ad * pb->u[i] + av * pb->du[i];
  }
  cx val = corrected_trapezoid(pa->grid, g, gd);
  return val * std::exp(a.log_scale + b.log_scale);
}

}  // namespace

cx l2_inner(const SolutionPath& p1, const SolutionPath& p2, double) {
  return product_integral(p1, p2, true);
}

cx path_product_integral(const SolutionPath& p1, const SolutionPath& p2) {
  return product_integral(p1, p2, false);
}

cx integral_against(const SolutionPath& p, const std::vector<cx>& fvals) {
  if (fvals.size() != p.grid.size())
    throw grid_mismatch_error("sampled function does not match path grid");
  const std::size_t m = p.grid.size();
  // Centered differences for f'; one-sided second order at the ends.
  std::vector<cx> fd(m);
  for (std::size_t i = 1; i + 1 < m; ++i)
    fd[i] = (fvals[i + 1] - fvals[i - 1]) / (p.grid[i + 1] - p.grid[i - 1]);
  fd[0] = (-3.0 * fvals[0] + 4.0 * fvals[1] - fvals[2]) /
          (p.grid[2] - p.grid[0]);
  fd[m - 1] = (3.0 * fvals[m - 1] - 4.0 * fvals[m - 2] + fvals[m - 3]) /
              (p.grid[m - 1] - p.grid[m - 3]);
  std::vector<cx> g(m), gd(m);
  for (std::size_t i = 0; i < m; ++i) {
    g[i] = p.u[i] * fvals[i];
    gd[i] = p.du[i] * fvals[i] + p.u[i] * fd[i];
  }
  return corrected_trapezoid(p.grid, g, gd) * std::exp(p.log_scale);
}

cx form_eval(const Potential& pot, const BoundaryAngles& angles,
             const SolutionPath& f, const SolutionPath& g, cx z, double tol) {
  require_same_range(f, g);
  const SolutionPath* pf = &f;
  const SolutionPath* pg = &g;
  SolutionPath rf, rg;
  if (!same_grid(f, g)) {
    const std::vector<double>& grid =
        f.grid.size() >= g.grid.size() ? f.grid : g.grid;
    if (f.grid.size() >= g.grid.size()) {
      rg = resample(g, grid);
      pg = &rg;
    } else {
      rf = resample(f, grid);
      pf = &rf;
    }
  }
  const std::vector<double>& x = pf->grid;
  const std::size_t m = x.size();
  if (m % 2 == 0)
    throw grid_mismatch_error("form_eval needs an even number of intervals");

  std::vector<cx> integrand(m);
  for (std::size_t i = 0; i < m; ++i) {
    cx w = cx(pot(x[i]), 0.0) - z;
    integrand[i] =
        std::conj(pf->du[i]) * pg->du[i] + w * std::conj(pf->u[i]) * pg->u[i];
  }
  cx quad(0.0);
  for (std::size_t i = 0; i + 2 < m; i += 2) {
    double h = x[i + 1] - x[i];
    quad += h / 3.0 * (integrand[i] + 4.0 * integrand[i + 1] + integrand[i + 2]);
  }
  quad *= std::exp(f.log_scale + g.log_scale);

  double supf = 0.0, supg = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    supf = std::max(supf, std::abs(pf->u[i]));
    supg = std::max(supg, std::abs(pg->u[i]));
  }
  double dom_tol = std::max(1e-6, 1e4 * tol);

  auto boundary_term = [&](cx theta, std::size_t idx) -> cx {
    if (dirichlet_angle(theta)) {
      if (std::abs(pf->u[idx]) > dom_tol * std::max(supf, 1.0) ||
          std::abs(pg->u[idx]) > dom_tol * std::max(supg, 1.0))
        throw domain_violation_error(
            "form domain: Dirichlet endpoint value not zero");
      return cx(0.0);
    }
    cx cot = std::cos(theta) / std::sin(theta);
    return -cot * std::conj(pf->u[idx]) * pg->u[idx] *
           std::exp(f.log_scale + g.log_scale);
  };

  quad += boundary_term(angles.theta0, 0);
  quad += boundary_term(angles.thetaR, m - 1);
  return quad;
}

SolutionPath sample_path(const std::function<cx(double)>& f,
                         const std::function<cx(double)>& fp, double R,
                         int n_intervals) {
  SolutionPath p;
  p.grid = uniform_grid(R, n_intervals);
  p.u.resize(p.grid.size());
  p.du.resize(p.grid.size());
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    p.u[i] = f(p.grid[i]);
    p.du[i] = fp(p.grid[i]);
  }
  return p;
}

}  // namespace bdmap
