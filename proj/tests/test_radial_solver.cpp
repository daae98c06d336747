#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "henonlab/closed_forms.hpp"
#include "henonlab/radial_operator.hpp"

using namespace henonlab;

namespace {

ProblemSpec radial_spec(int N, double alpha, double p, double lambda) {
  ProblemSpec s;
  s.N = N;
  s.alpha = alpha;
  s.p = p;
  s.lambda = lambda;
  return s.validate();
}

RadialField random_dirichlet_field(const RadialGrid& g, std::mt19937_64& rng,
                                   double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  RadialField f(g);
  for (int i = 0; i <= g.interior_nodes(); ++i) f[i] = u(rng);
  // Smooth it once so finite-difference directional derivatives behave.
  RadialField s = f;
  for (int i = 1; i <= g.interior_nodes() - 1; ++i)
    s[i] = 0.25 * f[i - 1] + 0.5 * f[i] + 0.25 * f[i + 1];
  s[g.interior_nodes() + 1] = 0.0;
  return s;
}

}  // namespace

TEST_CASE("N=1 assembly reduces to the standard second-difference stencil") {
  RadialGrid g(32, 1);
  RadialOperator op(g, 1);
  const double h2 = g.h() * g.h();
  CHECK(op.diag(0) == Catch::Approx(2.0 / h2));
  CHECK(op.super(0) == Catch::Approx(-2.0 / h2));
  for (int i = 1; i <= 32; ++i) {
    CHECK(op.sub(i) == Catch::Approx(-1.0 / h2));
    CHECK(op.diag(i) == Catch::Approx(2.0 / h2));
    CHECK(op.super(i) == Catch::Approx(-1.0 / h2));
  }
}

TEST_CASE("applying the operator to 1 - r^2 returns ~2N with O(h^2) error") {
  for (int N : {1, 2, 3, 5}) {
    for (int M : {100, 200}) {
      RadialGrid g(M, N);
      RadialOperator op(g, N);
      auto u = RadialField::sample(g, [](double r) { return 1.0 - r * r; });
      RadialField Au = op.apply(u);
      double err = 0.0;
      for (int i = 0; i <= M; ++i) err = std::max(err, std::abs(Au[i] - 2.0 * N));
      INFO("N=" << N << " M=" << M);
      CHECK(err <= 200.0 * g.h() * g.h());
    }
  }
}

TEST_CASE("M-matrix sign pattern for N up to 10") {
  for (int N : {1, 2, 3, 4, 7, 10}) {
    for (int M : {16, 128, 1024}) {
      RadialGrid g(M, N);
      RadialOperator op(g, N);
      CHECK(op.diag(0) > 0.0);
      CHECK(op.super(0) <= 0.0);
      for (int i = 1; i <= M; ++i) {
        CHECK(op.sub(i) <= 0.0);
        CHECK(op.super(i) <= 0.0);
        CHECK(op.diag(i) > 0.0);
        const double row = op.sub(i) + op.diag(i) + op.super(i);
        CHECK(row >= -1e-9 * op.diag(i));
      }
      // Dirichlet row: the dropped coupling leaves a strictly positive sum.
      CHECK(op.sub(M) + op.diag(M) > 0.0);
    }
  }
}

TEST_CASE("solve_linear reproduces the torsion profile at O(h^2)") {
  const int N = 3;
  const double alpha = 2.0;
  double prev_err = 0.0;
  for (int M : {250, 500}) {
    RadialGrid g(M, N);
    RadialOperator op(g, N);
    auto rhs = RadialField::sample(g, [&](double r) { return std::pow(r, alpha); });
    RadialField u = solve_linear(op, rhs);
    double err = 0.0;
    for (int i = 0; i <= M + 1; ++i)
      err = std::max(err, std::abs(u[i] - torsion_e_alpha(g.r(i), N, alpha)));
    if (prev_err > 0.0) CHECK(prev_err / err == Catch::Approx(4.0).epsilon(0.25));
    prev_err = err;
    CHECK(err <= 10.0 * g.h() * g.h());
  }
}

TEST_CASE("solve_linear: zero rhs and positivity") {
  RadialGrid g(64, 3);
  RadialOperator op(g, 3);
  RadialField zero(g);
  RadialField u = solve_linear(op, zero);
  CHECK(u.sup_norm() == 0.0);

  RadialField bump(g);
  bump[40] = 1.0;  // nonnegative, not identically zero
  RadialField v = solve_linear(op, bump);
  for (int i = 0; i <= 64; ++i) CHECK(v[i] > 0.0);
}

TEST_CASE("comparison principle: ordered right-hand sides give ordered solutions") {
  RadialGrid g(80, 4);
  RadialOperator op(g, 4);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    RadialField r1(g), r2(g);
    for (int i = 0; i <= 80; ++i) {
      r2[i] = u(rng);
      r1[i] = r2[i] + u(rng);  // r1 >= r2 nodewise
    }
    RadialField u1 = solve_linear(op, r1);
    RadialField u2 = solve_linear(op, r2);
    for (int i = 0; i <= 80; ++i) CHECK(u1[i] >= u2[i] - 1e-14);
  }
}

TEST_CASE("principal eigenpair: analytic Dirichlet values") {
  {
    RadialGrid g(2000, 3);
    RadialOperator op(g, 3);
    const auto ep = principal_eigenpair(op, 0.0);
    CHECK(ep.lambda_1_alpha ==
          Catch::Approx(M_PI * M_PI).epsilon(1e-3));
  }
  {
    RadialGrid g(2000, 1);
    RadialOperator op(g, 1);
    const auto ep = principal_eigenpair(op, 0.0);
    CHECK(ep.lambda_1_alpha ==
          Catch::Approx(0.25 * M_PI * M_PI).epsilon(1e-3));
  }
}

TEST_CASE("eigenvalue h-refinement is O(h^2)") {
  const int N = 3;
  double lam[3];
  int idx = 0;
  for (int M : {250, 500, 1000}) {
    RadialGrid g(M, N);
    RadialOperator op(g, N);
    lam[idx++] = principal_eigenpair(op, 1.0).lambda_1_alpha;
  }
  const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("eigenfunction is positive, strictly decreasing, Rayleigh-consistent") {
  RadialGrid g(400, 3);
  RadialOperator op(g, 3);
  const double alpha = 2.0;
  const auto ep = principal_eigenpair(op, alpha);
  for (int i = 0; i <= 400; ++i) {
    CHECK(ep.phi[i] > 0.0);
    // Nonincreasing everywhere (the profile is flat to O(h^{alpha+2}) at the
    // origin, so allow solver-tolerance slack there), strictly decreasing
    // away from the center.
    CHECK(ep.phi[i + 1] <= ep.phi[i] + 1e-12 * ep.phi[0]);
    if (g.r(i) >= 0.05) CHECK(ep.phi[i + 1] < ep.phi[i]);
  }
  const double omega = sphere_area(3);
  double mass = 0.0;
  for (int i = 0; i <= 400; ++i)
    mass += g.weight(i) * std::pow(g.r(i), alpha) * ep.phi[i] * ep.phi[i];
  mass *= omega;
  CHECK(mass == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(omega * op.form(ep.phi, ep.phi) ==
        Catch::Approx(ep.lambda_1_alpha * mass).epsilon(1e-9));
}

TEST_CASE("discrete Poincare with weight: Rayleigh lower bound") {
  RadialGrid g(200, 3);
  RadialOperator op(g, 3);
  const double alpha = 1.5;
  const auto ep = principal_eigenpair(op, alpha);
  std::mt19937_64 rng(99);
  const double omega = sphere_area(3);
  for (int trial = 0; trial < 20; ++trial) {
    RadialField v = random_dirichlet_field(g, rng);
    double mass = 0.0;
    for (int i = 0; i <= 200; ++i)
      mass += g.weight(i) * std::pow(g.r(i), alpha) * v[i] * v[i];
    mass *= omega;
    CHECK(omega * op.form(v, v) >= ep.lambda_1_alpha * mass * (1.0 - 1e-8));
  }
}

TEST_CASE("energy at zero and quadratic scaling") {
  const auto spec = radial_spec(3, 2.0, 3.0, 0.09);
  RadialGrid g(500, 3);
  RadialOperator op(g, 3);
  RadialField zero(g);
  const double J0 = energy_radial(zero, spec, op);
  const double expected = -std::pow(spec.a, spec.p + 1.0) / (spec.p + 1.0) *
                          weighted_ball_volume(3, spec.alpha);
  CHECK(J0 == Catch::Approx(expected).epsilon(1e-13));
  CHECK(J0 < 0.0);

  // Direct nodal quadrature of the constant integrand agrees to O(h^2).
  double quad = 0.0;
  for (int i = 0; i <= 501; ++i)
    quad += g.weight(i) * std::pow(g.r(i), spec.alpha);
  quad *= sphere_area(3);
  CHECK(quad == Catch::Approx(weighted_ball_volume(3, spec.alpha)).epsilon(1e-5));

  // The gradient term is an exact quadratic form.
  std::mt19937_64 rng(3);
  RadialField v = random_dirichlet_field(g, rng);
  CHECK(op.form(2.0 * v, 2.0 * v) == Catch::Approx(4.0 * op.form(v, v)).epsilon(1e-14));
}

TEST_CASE("small multiples of the eigenfunction have positive lambda=0 energy") {
  const auto spec = radial_spec(3, 1.0, 3.0, 0.0);
  RadialGrid g(300, 3);
  RadialOperator op(g, 3);
  const auto ep = principal_eigenpair(op, 1.0);
  const double J = energy_radial(0.01 * ep.phi, spec, op);
  CHECK(J > 0.0);
}

TEST_CASE("gradient and energy are consistent: directional derivatives") {
  const auto spec = radial_spec(3, 2.0, 3.0, 0.3);
  RadialGrid g(120, 3);
  RadialOperator op(g, 3);
  std::mt19937_64 rng(2024);
  const double omega = sphere_area(3);
  for (int trial = 0; trial < 20; ++trial) {
    RadialField v = random_dirichlet_field(g, rng, 0.7);
    RadialField d = random_dirichlet_field(g, rng, 1.0);
    RadialField grad = gradient_radial(v, spec, op);
    const double pairing = omega * op.pairing(grad, d);
    const double t = 1e-6;
    const double fd = (energy_radial(v + t * d, spec, op) -
                       energy_radial(v - t * d, spec, op)) /
                      (2.0 * t);
    INFO("trial " << trial);
    CHECK(std::abs(fd - pairing) <= 1e-5 * std::max(1.0, std::abs(pairing)));
  }
}

TEST_CASE("zero field with a = 0 is a critical point") {
  const auto spec = radial_spec(3, 1.0, 3.0, 0.0);
  RadialGrid g(100, 3);
  RadialOperator op(g, 3);
  RadialField zero(g);
  CHECK(gradient_radial(zero, spec, op).sup_norm() == 0.0);
}

TEST_CASE("pivoted tridiagonal solver handles an indefinite shift") {
  RadialGrid g(64, 3);
  RadialOperator op(g, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // Shift past the first eigenvalue so the matrix is indefinite.
  const double lam1 = principal_eigenpair(op, 0.0).lambda_1_alpha;
  std::vector<double> shift(65, 1.8 * lam1);
  RadialField rhs(g);
  for (int i = 0; i <= 64; ++i) rhs[i] = u(rng);
  RadialField x = op.solve_shifted(shift, rhs);
  // Residual check.
  RadialField ax = op.apply(x);
  double err = 0.0;
  for (int i = 0; i <= 64; ++i)
    err = std::max(err, std::abs(ax[i] - 1.8 * lam1 * x[i] - rhs[i]));
  CHECK(err <= 1e-8 * (1.0 + x.sup_norm()));
}

TEST_CASE("discrete critical Rayleigh minimization lands near S_alpha") {
  RadialGrid g(500, 3);
  RadialOperator op(g, 3);
  const double alpha = 2.0;
  const double S = sobolev_constants(3, alpha).S_alpha;
  const double Sh = rayleigh_minimize_critical(op, alpha, 2000);
  CHECK(Sh == Catch::Approx(S).epsilon(0.05));
}
