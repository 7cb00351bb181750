#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <thread>

#include "boundary.hpp"
#include "ode.hpp"
#include "potential.hpp"

using namespace bdmap;

namespace {

constexpr double kTol = 1e-10;

double rel_err(cx got, cx want) {
  double scale = std::max(std::abs(want), 1e-30);
  return std::abs(got - want) / scale;
}

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("fundamental system, free potential") {
  Potential pot = Potential::zero(1.0);

  SUBCASE("z = 0") {
    FundamentalValues f = propagate_fundamental(pot, cx(0.0), kTol);
    double s = std::exp(f.log_scale);
    CHECK(rel_err(f.theta * s, 1.0) < 1e-9);
    CHECK(std::abs(f.theta_prime * s) < 1e-9);
    CHECK(rel_err(f.phi * s, 1.0) < 1e-9);
    CHECK(rel_err(f.phi_prime * s, 1.0) < 1e-9);
  }

  SUBCASE("z = -1 hyperbolic closed form") {
    FundamentalValues f = propagate_fundamental(pot, cx(-1.0), kTol);
    double s = std::exp(f.log_scale);
    CHECK(rel_err(f.theta * s, std::cosh(1.0)) < 1e-9);
    CHECK(rel_err(f.theta_prime * s, std::sinh(1.0)) < 1e-9);
    CHECK(rel_err(f.phi * s, std::sinh(1.0)) < 1e-9);
    CHECK(rel_err(f.phi_prime * s, std::cosh(1.0)) < 1e-9);
  }

  SUBCASE("z = +4 oscillatory closed form") {
    FundamentalValues f = propagate_fundamental(pot, cx(4.0), kTol);
    double s = std::exp(f.log_scale);
    CHECK(rel_err(f.theta * s, std::cos(2.0)) < 1e-9);
    CHECK(rel_err(f.phi * s, std::sin(2.0) / 2.0) < 1e-9);
  }
}

TEST_CASE("constant potential reduces to a spectral shift") {
  Potential one = Potential::constant(1.0, 1.0);
  FundamentalValues f = propagate_fundamental(one, cx(1.0), kTol);
  double s = std::exp(f.log_scale);
  CHECK(rel_err(f.theta * s, 1.0) < 1e-9);
  CHECK(std::abs(f.theta_prime * s) < 1e-9);
  CHECK(rel_err(f.phi_prime * s, 1.0) < 1e-9);

  Potential shifted = Potential::constant(1.0, 2.5);
  Potential zero = Potential::zero(1.0);
  for (cx z : {cx(-3.0), cx(1.0, 2.0), cx(7.0, -0.5)}) {
    FundamentalValues a = propagate_fundamental(shifted, z, kTol);
    FundamentalValues b = propagate_fundamental(zero, z - 2.5, kTol);
    double sa = std::exp(a.log_scale), sb = std::exp(b.log_scale);
    CHECK(rel_err(a.theta * sa, b.theta * sb) < 10 * kTol);
    CHECK(rel_err(a.theta_prime * sa, b.theta_prime * sb) < 10 * kTol);
    CHECK(rel_err(a.phi * sa, b.phi * sb) < 10 * kTol);
    CHECK(rel_err(a.phi_prime * sa, b.phi_prime * sb) < 10 * kTol);
  }
}

TEST_CASE("wronskian normalization of the fundamental pair") {
  Potential cosv = Potential::cosine(1.0, 1.0, 1.0, 0.0);
  for (cx z : {cx(0.0), cx(-1.0), cx(-25.0), cx(3.0, 4.0), cx(12.0)}) {
    FundamentalValues f = propagate_fundamental(cosv, z, kTol);
    CHECK(std::abs(f.wronskian_scaled() - 1.0) < 10 * kTol);
  }
}

TEST_CASE("sampled potential matches its closed-form family") {
  // Piecewise-linear hat; oracle is the same sampled data integrated at
  // higher resolution via a much finer sampling of the same interpolant.
  std::vector<double> xs = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> vs = {0.0, 1.0, 2.0, 1.0, 0.0};
  Potential hat = Potential::samples(1.0, xs, vs);
  FundamentalValues f = propagate_fundamental(hat, cx(-2.0), kTol);
  CHECK(std::abs(f.wronskian_scaled() - 1.0) < 10 * kTol);

  // Refining the sample grid of the same piecewise-linear function must not
  // change the solution.
  std::vector<double> xs2, vs2;
  for (int i = 0; i <= 64; ++i) {
    double x = i / 64.0;
    xs2.push_back(x);
    vs2.push_back(hat(x));
  }
  Potential hat2 = Potential::samples(1.0, xs2, vs2);
  FundamentalValues g = propagate_fundamental(hat2, cx(-2.0), kTol);
  CHECK(rel_err(f.theta * std::exp(f.log_scale),
                g.theta * std::exp(g.log_scale)) < 1e-8);
}

TEST_CASE("solve_with_boundary_data") {
  Potential pot = Potential::zero(1.0);
  BoundaryAngles dirichlet(0.0, 0.0);

  SUBCASE("linear solution at z = 0") {
    SolutionPath p =
        solve_with_boundary_data(pot, cx(0.0), dirichlet, cx(0.0), cx(1.0), kTol);
    for (double x : {0.0, 0.25, 0.6, 1.0})
      CHECK(std::abs(p.value_at(x) - x) < 1e-9);
    BoundaryVector tr = trace_map(dirichlet, p);
    CHECK(std::abs(tr.c0) < 10 * kTol);
    CHECK(std::abs(tr.cR - 1.0) < 10 * kTol);
  }

  SUBCASE("two-point hyperbolic oracle at z = -1") {
    SolutionPath p =
        solve_with_boundary_data(pot, cx(-1.0), dirichlet, cx(1.0), cx(0.0), kTol);
    for (double x : {0.0, 0.3, 0.5, 0.9, 1.0}) {
      cx want = std::sinh(1.0 - x) / std::sinh(1.0);
      CHECK(std::abs(p.value_at(x) - want) < 1e-9);
    }
  }

  SUBCASE("rejects eigenvalues") {
    CHECK_THROWS_AS(solve_with_boundary_data(pot, cx(M_PI * M_PI), dirichlet,
                                             cx(0.0), cx(1.0), kTol),
                    at_eigenvalue_error);
  }
}

TEST_CASE("u_plus_minus bases") {
  Potential pot = Potential::zero(1.0);

  SUBCASE("Dirichlet, z = 0") {
    auto [up, um] = u_plus_minus(pot, cx(0.0), BoundaryAngles(0.0, 0.0), kTol);
    for (double x : {0.0, 0.25, 0.75, 1.0}) {
      CHECK(std::abs(up.value_at(x) - (1.0 - x)) < 1e-9);
      CHECK(std::abs(um.value_at(x) - x) < 1e-9);
    }
  }

  SUBCASE("Dirichlet, z = -1") {
    auto [up, um] = u_plus_minus(pot, cx(-1.0), BoundaryAngles(0.0, 0.0), kTol);
    double s1 = std::sinh(1.0);
    for (double x : {0.1, 0.5, 0.8}) {
      CHECK(std::abs(up.value_at(x) - std::sinh(1.0 - x) / s1) < 1e-9);
      CHECK(std::abs(um.value_at(x) - std::sinh(x) / s1) < 1e-9);
    }
  }

  SUBCASE("Neumann-type, z = -1") {
    auto [up, um] =
        u_plus_minus(pot, cx(-1.0), BoundaryAngles(M_PI / 2, M_PI / 2), kTol);
    double c1 = std::cosh(1.0);
    for (double x : {0.0, 0.4, 1.0}) {
      CHECK(std::abs(up.value_at(x) - std::cosh(1.0 - x) / c1) < 1e-9);
      CHECK(std::abs(um.value_at(x) - std::cosh(x) / c1) < 1e-9);
    }
  }

  SUBCASE("conjugation symmetry for real data") {
    Potential cosv = Potential::cosine(1.0, 1.0, 1.0, 0.0);
    BoundaryAngles ang(M_PI / 3, M_PI / 5);
    cx z(2.0, 3.0);
    auto [up, um] = u_plus_minus(cosv, z, ang, kTol);
    auto [vp, vm] = u_plus_minus(cosv, std::conj(z), ang, kTol);
    for (double x : {0.2, 0.5, 0.9}) {
      CHECK(std::abs(up.value_at(x) - std::conj(vp.value_at(x))) < 1e-8);
      CHECK(std::abs(um.value_at(x) - std::conj(vm.value_at(x))) < 1e-8);
    }
  }
}

TEST_CASE("wronskian of path pairs") {
  Potential pot = Potential::zero(1.0);

  SUBCASE("closed form at z = 0") {
    auto [up, um] = u_plus_minus(pot, cx(0.0), BoundaryAngles(0.0, 0.0), kTol);
    CHECK(std::abs(path_wronskian(up, um, 0.5) - 1.0) < 1e-8);
  }

  SUBCASE("identical arguments vanish") {
    auto [up, um] = u_plus_minus(pot, cx(-1.0), BoundaryAngles(0.0, 0.0), kTol);
    CHECK(std::abs(path_wronskian(up, up, 0.3)) < 1e-12);
  }

  SUBCASE("x-independence") {
    Potential cosv = Potential::cosine(1.0, 1.0, 1.0, 0.0);
    struct Case {
      cx z;
      BoundaryAngles a;
    };
    for (const Case& c : {Case{cx(-1.0), BoundaryAngles(0.0, 0.0)},
                          Case{cx(-1.0), BoundaryAngles(M_PI / 2, M_PI / 2)},
                          Case{cx(1.0, 1.0), BoundaryAngles(M_PI / 3, M_PI / 4)}}) {
      auto [up, um] = u_plus_minus(cosv, c.z, c.a, kTol);
      cx w0 = path_wronskian(up, um, 0.0);
      double worst = 0.0;
      for (double x : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0})
        worst = std::max(worst, std::abs(path_wronskian(up, um, x) - w0));
      CHECK(worst < 100 * kTol * std::abs(w0));
    }
  }
}

TEST_CASE("l2 inner products") {
  SUBCASE("monomial") {
    SolutionPath xpath = sample_path([](double x) { return cx(x); },
                                     [](double) { return cx(1.0); }, 1.0);
    CHECK(std::abs(l2_inner(xpath, xpath) - 1.0 / 3.0) < 1e-12);
  }

  SUBCASE("orthogonal modes") {
    SolutionPath s1 = sample_path(
        [](double x) { return cx(std::sin(M_PI * x)); },
        [](double x) { return cx(M_PI * std::cos(M_PI * x)); }, 1.0);
    SolutionPath s2 = sample_path(
        [](double x) { return cx(std::sin(2 * M_PI * x)); },
        [](double x) { return cx(2 * M_PI * std::cos(2 * M_PI * x)); }, 1.0);
    CHECK(std::abs(l2_inner(s1, s2)) < 1e-11);
  }

  SUBCASE("hyperbolic antiderivative oracle") {
    // integral of sinh(x)^2 / sinh(1)^2 over [0,1]
    Potential pot = Potential::zero(1.0);
    auto [up, um] = u_plus_minus(pot, cx(-1.0), BoundaryAngles(0.0, 0.0), kTol);
    double want =
        (std::sinh(2.0) / 2.0 - 1.0) / (2.0 * std::sinh(1.0) * std::sinh(1.0));
    CHECK(std::abs(l2_inner(um, um) - want) < 1e-10);
  }

  SUBCASE("grids of different resolution are merged") {
    SolutionPath coarse = sample_path([](double x) { return cx(x); },
                                      [](double) { return cx(1.0); }, 1.0, 64);
    SolutionPath fine = sample_path([](double x) { return cx(x * x); },
                                    [](double x) { return cx(2 * x); }, 1.0, 256);
    CHECK(std::abs(l2_inner(coarse, fine) - 0.25) < 1e-9);
  }

  SUBCASE("mismatched ranges rejected") {
    SolutionPath a = sample_path([](double) { return cx(1.0); },
                                 [](double) { return cx(0.0); }, 1.0);
    SolutionPath b = sample_path([](double) { return cx(1.0); },
                                 [](double) { return cx(0.0); }, 2.0);
    CHECK_THROWS_AS(l2_inner(a, b), grid_mismatch_error);
  }
}

TEST_CASE("sesquilinear form evaluation") {
  Potential pot = Potential::zero(1.0);

  SUBCASE("Dirichlet form of the ground mode") {
    SolutionPath s = sample_path(
        [](double x) { return cx(std::sin(M_PI * x)); },
        [](double x) { return cx(M_PI * std::cos(M_PI * x)); }, 1.0);
    cx q = form_eval(pot, BoundaryAngles(0.0, 0.0), s, s, cx(0.0));
    CHECK(std::abs(q - M_PI * M_PI / 2.0) < 1e-9);
  }

  SUBCASE("diagonal identities against boundary data") {
    BoundaryAngles primed(M_PI / 2, M_PI / 2);
    auto [up, um] = u_plus_minus(pot, cx(-1.0), primed, kTol);
    double t1 = std::tanh(1.0);
    // (u+, u+): -[u+'(0) + cot(theta0')]
    cx q_pp = form_eval(pot, primed, up, up, cx(-1.0));
    CHECK(std::abs(q_pp - t1) < 1e-9);
    // (u-, u-): u-'(R) - cot(thetaR')
    cx q_mm = form_eval(pot, primed, um, um, cx(-1.0));
    CHECK(std::abs(q_mm - t1) < 1e-9);
    // (u+, u-): both dual expressions agree
    cx q_pm = form_eval(pot, primed, up, um, cx(-1.0));
    cx dual1 = -um.value_at(0.0) * up.deriv_at(0.0);
    cx dual2 = up.value_at(1.0) * um.deriv_at(1.0);
    double want = t1 / std::cosh(1.0);
    CHECK(std::abs(q_pm - want) < 1e-9);
    CHECK(std::abs(dual1 - dual2) < 1e-9);
    CHECK(std::abs(q_pm - dual1) < 1e-9);
  }

  SUBCASE("general Robin angles satisfy the boundary-data identities") {
    Potential cosv = Potential::cosine(1.0, 1.0, 1.0, 0.0);
    BoundaryAngles primed(M_PI / 3, 2 * M_PI / 5);
    cx z(-3.0);
    auto [up, um] = u_plus_minus(cosv, z, primed, kTol);
    double cot0 = 1.0 / std::tan(primed.t0());
    double cotR = 1.0 / std::tan(primed.tR());
    cx q_pp = form_eval(cosv, primed, up, up, z);
    CHECK(std::abs(q_pp - (-(up.deriv_at(0.0) + cot0))) < 1e-8);
    cx q_mm = form_eval(cosv, primed, um, um, z);
    CHECK(std::abs(q_mm - (um.deriv_at(1.0) - cotR)) < 1e-8);
    cx q_pm = form_eval(cosv, primed, up, um, z);
    cx dual1 = -um.value_at(0.0) * (up.deriv_at(0.0) + cot0);
    cx dual2 = up.value_at(1.0) * (um.deriv_at(1.0) - cotR);
    CHECK(std::abs(dual1 - dual2) < 1e-8);
    CHECK(std::abs(q_pm - dual1) < 1e-8);
  }

  SUBCASE("Dirichlet endpoint violation") {
    SolutionPath bad = sample_path([](double) { return cx(1.0); },
                                   [](double) { return cx(0.0); }, 1.0);
    CHECK_THROWS_AS(
        form_eval(pot, BoundaryAngles(0.0, 0.0), bad, bad, cx(0.0)),
        domain_violation_error);
  }
}

TEST_CASE("u_plus_minus rejects eigenvalues of the auxiliary problem") {
  // At a Dirichlet eigenvalue the solution obeying the right condition
  // vanishes at x = 0 and cannot be normalized there.
  Potential pot = Potential::zero(1.0);
  CHECK_THROWS_AS(
      u_plus_minus(pot, cx(M_PI * M_PI), BoundaryAngles(0.0, 0.0), kTol),
      at_eigenvalue_error);
}

TEST_CASE("concurrent propagation is deterministic") {
  Potential cosv = Potential::cosine(1.0, 1.0, 1.0, 0.0);
  FundamentalValues ref = propagate_fundamental(cosv, cx(-3.0, 1.0), kTol);
  std::vector<std::thread> workers;
  std::array<cx, 8> results{};
  for (int t = 0; t < 8; ++t)
    workers.emplace_back([&, t] {
      FundamentalValues f = propagate_fundamental(cosv, cx(-3.0, 1.0), kTol);
      results[static_cast<std::size_t>(t)] = f.theta * std::exp(f.log_scale);
    });
  for (std::thread& w : workers) w.join();
  cx want = ref.theta * std::exp(ref.log_scale);
  for (cx got : results) CHECK(got == want);
}

TEST_CASE("complex boundary angles are accepted by the ode layer") {
  Potential pot = Potential::zero(1.0);
  BoundaryAngles complex_angles(cx(0.4, 0.2), cx(1.1, -0.3));
  auto [up, um] = u_plus_minus(pot, cx(-2.0), complex_angles, kTol);
  // The defining boundary conditions hold.
  cx bc0 = std::cos(complex_angles.theta0) * um.value_at(0.0) +
           std::sin(complex_angles.theta0) * um.deriv_at(0.0);
  cx bcR = std::cos(complex_angles.thetaR) * up.value_at(1.0) -
           std::sin(complex_angles.thetaR) * up.deriv_at(1.0);
  CHECK(std::abs(bc0) < 1e-9);
  CHECK(std::abs(bcR) < 1e-9);
  CHECK(std::abs(up.value_at(0.0) - 1.0) < 1e-12);
  CHECK(std::abs(um.value_at(1.0) - 1.0) < 1e-12);
}

}  // TEST_SUITE
