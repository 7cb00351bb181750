#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace bdmap {

namespace {

struct ReducedAngles {
  double t0, tR;     // representatives in [0, pi)
  bool robin0, robinR;
};

// H_{theta+pi} = H_theta, so spectral work uses representatives in [0, pi).
ReducedAngles reduce(const BoundaryAngles& a, const char* who) {
  a.require_real(who);
  auto red = [](double t) {
    double r = std::fmod(t, M_PI);
    if (r < 0.0) r += M_PI;
    if (r > M_PI - kAngleModTol) r = 0.0;
    if (r < kAngleModTol) r = 0.0;
    return r;
  };
  ReducedAngles r;
  r.t0 = red(a.t0());
  r.tR = red(a.tR());
  r.robin0 = r.t0 != 0.0;
  r.robinR = r.tR != 0.0;
  return r;
}

struct SignedValue {
  double mantissa;   // real part of the characteristic determinant mantissa
  double log_scale;
};

SignedValue delta_eval(const Potential& pot, const ReducedAngles& a, double lam,
                       double tol) {
  CharDet d = char_det(pot, lam, BoundaryAngles(a.t0, a.tR), tol);
  return {d.value.mantissa.real(), d.value.log_scale};
}

double scaled_to(const SignedValue& v, double ls_ref) {
  return v.mantissa * std::exp(v.log_scale - ls_ref);
}

// Bisection/secant hybrid inside a sign-change bracket. Returns the iterate
// with the smallest determinant magnitude, which the final secant steps
// place far inside the stopping bracket.
double refine_root(const Potential& pot, const ReducedAngles& a, double lo,
                   double hi, SignedValue flo, SignedValue fhi, double tol) {
  double best_x = 0.5 * (lo + hi);
  double best_f = std::numeric_limits<double>::infinity();
  double best_ls = 0.0;
  auto consider = [&](double x, const SignedValue& f) {
    double ls = std::max(f.log_scale, best_ls);
    double fv = std::abs(f.mantissa) * std::exp(f.log_scale - ls);
    double bv = std::isfinite(best_f)
                    ? best_f * std::exp(best_ls - ls)
                    : std::numeric_limits<double>::infinity();
    if (fv < bv) {
      best_x = x;
      best_f = std::abs(f.mantissa);
      best_ls = f.log_scale;
    }
  };
  consider(lo, flo);
  consider(hi, fhi);
  for (int iter = 0; iter < 200; ++iter) {
    double width = hi - lo;
    double target = 0.5 * tol * std::max(1.0, std::abs(lo) + std::abs(hi));
    if (width <= target) break;
    double ls = std::max(flo.log_scale, fhi.log_scale);
    double a_v = scaled_to(flo, ls), b_v = scaled_to(fhi, ls);
    double cand = (lo * b_v - hi * a_v) / (b_v - a_v);
    if (!(cand > lo + 0.05 * width && cand < hi - 0.05 * width))
      cand = 0.5 * (lo + hi);
    SignedValue fc = delta_eval(pot, a, cand, tol);
    consider(cand, fc);
    if ((fc.mantissa > 0.0) == (flo.mantissa > 0.0)) {
      lo = cand;
      flo = fc;
    } else {
      hi = cand;
      fhi = fc;
    }
  }
  return best_x;
}

// Lower bound on the spectrum from the quadratic form: the Robin terms
// -cot(theta)|f|^2 at each end bound below via the trace inequality.
double spectrum_floor(const Potential& pot, const ReducedAngles& a) {
  double c = 0.0;
  if (a.robin0) c += std::max(0.0, 1.0 / std::tan(a.t0));
  if (a.robinR) c += std::max(0.0, 1.0 / std::tan(a.tR));
  return -(pot.sup_abs() + c / pot.R() + 2.0 * c * c + 1.0) - 1.0;
}

struct ScanState {
  std::vector<double> roots;
};

void collect_range(const Potential& pot, const ReducedAngles& a, double lo,
                   double hi, int n_points, double tol, ScanState& st,
                   int depth = 0) {
  if (!(hi > lo)) return;
  std::vector<double> xs(static_cast<std::size_t>(n_points) + 1);
  std::vector<SignedValue> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double t = static_cast<double>(i) / n_points;
    double x = lo + t * (hi - lo);
    SignedValue f = delta_eval(pot, a, x, tol);
    if (std::abs(f.mantissa) < 1e-13) {
      x += 1e-9 * std::max(1.0, std::abs(x));
      f = delta_eval(pot, a, x, tol);
    }
    xs[i] = x;
    fs[i] = f;
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if ((fs[i].mantissa > 0.0) != (fs[i + 1].mantissa > 0.0)) {
      st.roots.push_back(
          refine_root(pot, a, xs[i], xs[i + 1], fs[i], fs[i + 1], tol));
    } else if (depth < 2) {
      // A missed bracket is re-scanned threefold before giving up.
      collect_range(pot, a, xs[i], xs[i + 1], 3, tol, st, depth + 1);
    }
  }
}

double sqrt_prediction_shift(const ReducedAngles& a) {
  double s = 0.0;
  if (a.robin0) s -= M_PI / 2.0;
  if (a.robinR) s -= M_PI / 2.0;
  return s;
}

// All eigenvalues with sqrt-prediction index k in [1, k_max], plus everything
// below the first prediction window.
std::vector<double> scan_eigenvalues(const Potential& pot,
                                     const ReducedAngles& a, int k_max,
                                     double tol) {
  double R = pot.R();
  double s = sqrt_prediction_shift(a);
  auto mid = [&](int k) {
    double v = ((static_cast<double>(k) + 0.5) * M_PI + s) / R;
    return v * v;
  };
  ScanState st;
  double floor_lambda = spectrum_floor(pot, a);
  collect_range(pot, a, floor_lambda, mid(1), 96, tol, st);
  for (int k = 2; k <= k_max; ++k) {
    double lo = mid(k - 1), hi = mid(k);
    SignedValue flo = delta_eval(pot, a, lo, tol);
    SignedValue fhi = delta_eval(pot, a, hi, tol);
    if ((flo.mantissa > 0.0) != (fhi.mantissa > 0.0))
      st.roots.push_back(refine_root(pot, a, lo, hi, flo, fhi, tol));
    else
      collect_range(pot, a, lo, hi, 3, tol, st, 1);
  }
  std::sort(st.roots.begin(), st.roots.end());
  std::vector<double> out;
  for (double r : st.roots) {
    if (out.empty() || r - out.back() > 1e-9 * std::max(1.0, std::abs(r)))
      out.push_back(r);
  }
  return out;
}

}  // namespace

EigenvalueList eigenvalues(const Potential& pot, const BoundaryAngles& angles,
                           int n, double tol) {
  if (n < 1) throw std::invalid_argument("eigenvalues: n must be positive");
  ReducedAngles a = reduce(angles, "eigenvalues");
  std::vector<double> roots = scan_eigenvalues(pot, a, n + 4, tol);
  if (static_cast<int>(roots.size()) < n) {
    // Prediction misalignment at low index; push the ceiling out once.
    roots = scan_eigenvalues(pot, a, 3 * n + 64, tol);
    if (static_cast<int>(roots.size()) < n)
      throw bracketing_error("eigenvalues: could not isolate enough roots");
  }
  roots.resize(static_cast<std::size_t>(n));

  EigenvalueList out;
  out.values = std::move(roots);
  out.theta0 = a.t0;
  out.thetaR = a.tR;
  out.count_requested = n;
  double R = pot.R();
  double s = sqrt_prediction_shift(a);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double k = static_cast<double>(i + 1);
    double sq = std::sqrt(std::max(out.values[i], 0.0));
    out.index_bound = std::max(out.index_bound, std::abs(sq - k * M_PI / R));
    out.asymptotic_constant = std::max(
        out.asymptotic_constant, k * std::abs(sq - (k * M_PI + s) / R));
  }
  return out;
}

std::vector<double> eigenvalues_up_to(const Potential& pot,
                                      const BoundaryAngles& angles,
                                      double lambda_max, double tol) {
  ReducedAngles a = reduce(angles, "eigenvalues_up_to");
  double R = pot.R();
  double s = sqrt_prediction_shift(a);
  int k_max = 1;
  while (true) {
    double lo = ((static_cast<double>(k_max) - 0.5) * M_PI + s) / R;
    if (lo > 0.0 && lo * lo > lambda_max) break;
    ++k_max;
    if (k_max > 100000)
      throw bracketing_error("eigenvalues_up_to: range too large");
  }
  std::vector<double> roots = scan_eigenvalues(pot, a, k_max + 2, tol);
  std::vector<double> out;
  for (double r : roots)
    if (r <= lambda_max) out.push_back(r);
  return out;
}

namespace {

// Tail of sum_{k>n} k^{-s}.
double zeta_tail(double s, int n) {
  double acc = 0.0;
  int k = n + 1;
  const int kCut = n + 200000;
  for (; k <= kCut; ++k) {
    double t = std::pow(static_cast<double>(k), -s);
    acc += t;
    if (t < 1e-19 * std::max(acc, 1e-300)) return acc;
  }
  double K = static_cast<double>(kCut) + 0.5;
  return acc + std::pow(K, 1.0 - s) / (s - 1.0);
}

}  // namespace

TraceDiffResult trace_resolvent_diff(const Potential& pot,
                                     const BoundaryAngles& base,
                                     const BoundaryAngles& primed, cx z,
                                     int n_terms, double tol) {
  if (n_terms < 24)
    throw std::invalid_argument("trace_resolvent_diff: need n_terms >= 24");
  EigenvalueList eb = eigenvalues(pot, base, n_terms, tol);
  EigenvalueList ep = eigenvalues(pot, primed, n_terms, tol);

  auto off_spectrum = [&](const std::vector<double>& v) {
    for (double lam : v)
      if (std::abs(cx(lam) - z) < 1e-9 * std::max(1.0, std::abs(lam)))
        throw at_eigenvalue_error("trace_resolvent_diff: z on the spectrum");
  };
  off_spectrum(eb.values);
  off_spectrum(ep.values);

  std::vector<cx> terms(static_cast<std::size_t>(n_terms));
  cx partial(0.0);
  for (int k = 0; k < n_terms; ++k) {
    terms[static_cast<std::size_t>(k)] =
        1.0 / (ep.values[static_cast<std::size_t>(k)] - z) -
        1.0 / (eb.values[static_cast<std::size_t>(k)] - z);
    partial += terms[static_cast<std::size_t>(k)];
  }

  // Index-paired terms decay like a k^-3 + b k^-4 (the k^-3 part appears when
  // the two conditions differ in their Dirichlet endpoint count). Fit the two
  // coefficients on a trailing window and sum the fitted tail.
  int w = std::min(16, std::max(6, n_terms / 4));
  double s66 = 0.0, s77 = 0.0, s88 = 0.0;
  cx r3(0.0), r4(0.0);
  for (int k = n_terms - w + 1; k <= n_terms; ++k) {
    double k3 = std::pow(static_cast<double>(k), -3.0);
    double k4 = std::pow(static_cast<double>(k), -4.0);
    s66 += k3 * k3;
    s77 += k3 * k4;
    s88 += k4 * k4;
    cx t = terms[static_cast<std::size_t>(k - 1)];
    r3 += t * k3;
    r4 += t * k4;
  }
  double det = s66 * s88 - s77 * s77;
  cx a = (r3 * s88 - r4 * s77) / det;
  cx b = (s66 * r4 - s77 * r3) / det;

  double fit_resid = 0.0;
  for (int k = n_terms - w + 1; k <= n_terms; ++k) {
    cx fit = a * std::pow(static_cast<double>(k), -3.0) +
             b * std::pow(static_cast<double>(k), -4.0);
    double miss = std::abs(terms[static_cast<std::size_t>(k - 1)] - fit);
    fit_resid = std::max(fit_resid, miss * std::pow(static_cast<double>(k), 5.0));
  }

  TraceDiffResult out;
  out.partial_sum = partial;
  out.tail_estimate = a * zeta_tail(3.0, n_terms) + b * zeta_tail(4.0, n_terms);
  out.value = partial + out.tail_estimate;
  out.tail_bound = fit_resid * zeta_tail(5.0, n_terms);
  if (!(out.tail_bound <= tol))
    throw tail_too_large_error(
        "trace_resolvent_diff: tail bound exceeds tolerance; increase n_terms");
  return out;
}

LogDetDerivative log_det_derivative(const Potential& pot,
                                    const BoundaryAngles& base,
                                    const BoundaryAngles& primed, cx z,
                                    double h, double tol) {
  if (!(h > 0.0)) throw std::invalid_argument("log_det_derivative: h > 0");
  auto central = [&](double step) {
    cx dp = lambda_det(pot, z + step, base, primed, tol);
    cx dm = lambda_det(pot, z - step, base, primed, tol);
    return -std::log(dp / dm) / (2.0 * step);
  };
  cx d1 = central(h);
  cx d2 = central(0.5 * h);
  LogDetDerivative out;
  out.value = (4.0 * d2 - d1) / 3.0;
  out.error_estimate = std::abs(d2 - d1) / 3.0;
  return out;
}

int SpectralShift::value_at(double lambda) const {
  std::size_t idx = 0;
  while (idx < breakpoints.size() && lambda > breakpoints[idx]) ++idx;
  return values[idx];
}

namespace {

struct PhaseTracker {
  const Potential& pot;
  BoundaryAngles base, primed;
  double eps;
  double eta;
  double tol;

  double det_arg(double lam) const {
    cx d = lambda_det(pot, cx(lam, eps), base, primed, tol);
    return std::arg(eta * d);
  }

  double advance(double la, double phia, double lb, int depth) const {
    double raw = det_arg(lb);
    double phib = raw + 2.0 * M_PI * std::round((phia - raw) / (2.0 * M_PI));
    if (std::abs(phib - phia) <= 0.5 * M_PI) return phib;
    if (depth >= 48)
      throw phase_tracking_error(
          "spectral_shift: phase step too large after refinement");
    double mid = 0.5 * (la + lb);
    double phim = advance(la, phia, mid, depth + 1);
    return advance(mid, phim, lb, depth + 1);
  }
};

double neville_at_zero(const std::vector<double>& xs, std::vector<double> ys) {
  std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      ys[i] = ((0.0 - xs[i + level]) * ys[i] + (xs[i] - 0.0) * ys[i + 1]) /
              (xs[i] - xs[i + level]);
  return ys[0];
}

}  // namespace

SpectralShift spectral_shift(const Potential& pot, const BoundaryAngles& base,
                             const BoundaryAngles& primed,
                             const std::vector<double>& lambda_grid,
                             const std::vector<double>& eps_schedule,
                             double tol) {
  ReducedAngles rb = reduce(base, "spectral_shift");
  ReducedAngles rp = reduce(primed, "spectral_shift");
  if (!rp.robin0 || !rp.robinR)
    throw std::invalid_argument(
        "spectral_shift: primed angles must be Robin (in (0,pi) mod pi)");
  if (lambda_grid.empty())
    throw std::invalid_argument("spectral_shift: empty grid");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1]))
      throw std::invalid_argument("spectral_shift: grid must be ascending");

  std::vector<double> eps = eps_schedule;
  if (eps.empty()) eps = {1e-2, 1e-3, 1e-4};

  double lam_max = lambda_grid.back();
  double margin = 1.0 + 0.01 * std::abs(lam_max);
  std::vector<double> evb =
      eigenvalues_up_to(pot, base, lam_max + margin, tol);
  std::vector<double> evp =
      eigenvalues_up_to(pot, primed, lam_max + margin, tol);

  std::vector<double> breakpoints;
  std::merge(evb.begin(), evb.end(), evp.begin(), evp.end(),
             std::back_inserter(breakpoints));
  breakpoints.erase(
      std::remove_if(breakpoints.begin(), breakpoints.end(),
                     [&](double b) { return b > lam_max; }),
      breakpoints.end());

  const double guard = 1e-6;
  for (double g : lambda_grid)
    for (double b : breakpoints)
      if (std::abs(g - b) < guard * std::max(1.0, std::abs(b)))
        throw std::invalid_argument(
            "spectral_shift: grid point inside the eigenvalue guard gap");

  double e0 = std::min(evb.empty() ? 0.0 : evb.front(),
                       evp.empty() ? 0.0 : evp.front());
  double anchor = e0 - 1.0 - 0.05 * std::abs(e0);

  int eta = (rb.robin0 == rb.robinR) ? 1 : -1;

  // Evaluation nodes: caller grid plus one interior point per breakpoint
  // interval so every interval receives a value.
  std::vector<double> extra;
  {
    std::vector<double> cuts;
    cuts.push_back(anchor);
    for (double b : breakpoints) cuts.push_back(b);
    cuts.push_back(lam_max);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double m = 0.5 * (cuts[i] + cuts[i + 1]);
      bool near_bp = false;
      for (double b : breakpoints)
        if (std::abs(m - b) < guard * std::max(1.0, std::abs(b))) near_bp = true;
      if (!near_bp && m > anchor && m <= lam_max) extra.push_back(m);
    }
  }
  std::vector<double> nodes = lambda_grid;
  nodes.insert(nodes.end(), extra.begin(), extra.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // March the phase for each epsilon, then extrapolate eps -> 0 per node.
  std::vector<std::vector<double>> phases(eps.size());
  for (std::size_t ei = 0; ei < eps.size(); ++ei) {
    PhaseTracker tr{pot, BoundaryAngles(rb.t0, rb.tR),
                    BoundaryAngles(rp.t0, rp.tR), eps[ei],
                    static_cast<double>(eta), tol};
    double la = anchor;
    double phia = tr.det_arg(anchor);
    if (std::abs(phia) > 0.5 * M_PI)
      throw phase_tracking_error(
          "spectral_shift: anchor phase not near zero");
    phases[ei].reserve(nodes.size());
    for (double lb : nodes) {
      double phib = tr.advance(la, phia, lb, 0);
      phases[ei].push_back(phib);
      la = lb;
      phia = phib;
    }
  }

  auto xi_at_node = [&](std::size_t ni, double& residual) {
    std::vector<double> ys(eps.size());
    for (std::size_t ei = 0; ei < eps.size(); ++ei) ys[ei] = phases[ei][ni];
    double phi0 = neville_at_zero(eps, ys);
    double raw = phi0 / M_PI;
    int v = static_cast<int>(std::lround(raw));
    residual = std::abs(raw - v);
    return v;
  };

  SpectralShift out;
  out.breakpoints = breakpoints;
  out.eta = eta;
  out.grid = lambda_grid;
  out.base_theta0 = rb.t0;
  out.base_thetaR = rb.tR;
  out.primed_theta0 = rp.t0;
  out.primed_thetaR = rp.tR;
  out.values.assign(breakpoints.size() + 1, 0);

  std::vector<bool> interval_set(breakpoints.size() + 1, false);
  auto interval_of = [&](double lam) {
    std::size_t idx = 0;
    while (idx < breakpoints.size() && lam > breakpoints[idx]) ++idx;
    return idx;
  };

  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    double residual = 0.0;
    int v = xi_at_node(ni, residual);
    if (residual > 0.01)
      throw tolerance_error(
          "spectral_shift: non-integer phase residual above 0.01");
    std::size_t iv = interval_of(nodes[ni]);
    if (interval_set[iv] && out.values[iv] != v)
      throw phase_tracking_error(
          "spectral_shift: inconsistent values inside one interval");
    out.values[iv] = v;
    interval_set[iv] = true;
    auto git = std::lower_bound(lambda_grid.begin(), lambda_grid.end(),
                                nodes[ni]);
    if (git != lambda_grid.end() && *git == nodes[ni]) {
      out.grid_values.push_back(v);
      out.residuals.push_back(residual);
    }
  }
  if (!out.values.empty() && out.values.front() != 0)
    throw phase_tracking_error(
        "spectral_shift: nonzero value below the joint spectrum");
  return out;
}

int ssf_counting_oracle(const Potential& pot, const BoundaryAngles& base,
                        const BoundaryAngles& primed, double lambda,
                        double tol) {
  std::vector<double> eb = eigenvalues_up_to(pot, base, lambda + 1.0, tol);
  std::vector<double> ep = eigenvalues_up_to(pot, primed, lambda + 1.0, tol);
  for (const std::vector<double>* list : {&eb, &ep})
    for (double e : *list)
      if (std::abs(e - lambda) < 1e-9 * std::max(1.0, std::abs(lambda)))
        throw at_eigenvalue_error("ssf_counting_oracle: lambda on a spectrum");
  auto count = [&](const std::vector<double>& v) {
    return static_cast<int>(
        std::count_if(v.begin(), v.end(), [&](double e) { return e <= lambda; }));
  };
  return count(eb) - count(ep);
}

}  // namespace bdmap
