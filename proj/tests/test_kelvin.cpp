#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "henonlab/kelvin.hpp"

using namespace henonlab;

TEST_CASE("Kelvin exponent map") {
  CHECK(kelvin_exponent(3, 0.0, 5.0) == 0.0);
  CHECK(kelvin_exponent(4, 2.0, 3.0) == 2.0);
  // The Ni-regime boundary p = (N+2-beta)/(N-2) maps to alpha_eff = 0.
  for (int N : {3, 4, 6})
    for (double beta : {-1.0, 0.0, 2.0}) {
      const double p = (N + 2.0 - beta) / (N - 2.0);
      CHECK(kelvin_exponent(N, beta, p) == Catch::Approx(0.0).margin(1e-12));
    }
  CHECK_THROWS(kelvin_exponent(2, 0.0, 3.0));
}

TEST_CASE("exponent identity: beta = N+2-p(N-2)+alpha inverts exactly") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(0.0, 30.0), up(1.0, 6.0);
  for (int N : {3, 4, 5, 7})
    for (int k = 0; k < 50; ++k) {
      const double alpha = ua(rng);
      const double p = up(rng);
      const double beta = N + 2.0 - p * (N - 2.0) + alpha;
      CHECK(kelvin_exponent(N, beta, p) ==
            Catch::Approx(alpha).margin(1e-10));
    }
}

TEST_CASE("push: zero map, boundary preservation, involution") {
  RadialGrid g(200, 3);
  RadialField zero(g);
  auto pz = kelvin_push(zero, 3);
  for (double v : pz.U) CHECK(v == 0.0);

  auto u = RadialField::sample(g, [](double r) { return std::cos(r); });
  u[201] = 0.25;  // boundary value a
  auto prof = kelvin_push(u, 3);
  CHECK(prof.R.front() == 1.0);
  CHECK(prof.U.front() == Catch::Approx(0.25).epsilon(1e-15));

  // Round trip through the matching inverse map is exact at the nodes.
  RadialField back = kelvin_pull(prof, g);
  for (int i = 1; i <= 201; ++i)
    CHECK(back[i] == Catch::Approx(u[i]).epsilon(1e-13));
}

TEST_CASE("regime classification echoes the exterior case list") {
  ExteriorSpec s{3, 0.0, 6.0, 0.0};
  auto reg = kelvin_classify(s);
  CHECK(reg.alpha_eff == Catch::Approx(1.0));
  REQUIRE_FALSE(reg.applicable.empty());
  CHECK(reg.applicable.front().find("a=0 (i)") != std::string::npos);

  // Critical Lane-Emden with a = 0 sits outside the a=0 (i) range.
  ExteriorSpec crit{3, 0.0, 5.0, 0.0};
  auto regc = kelvin_classify(crit);
  for (const auto& c : regc.applicable)
    CHECK(c.find("a=0 (i)") == std::string::npos);

  ExteriorSpec pos{3, 0.0, 5.0, 0.05};
  auto regp = kelvin_classify(pos);
  bool has_iff = false, has_two = false;
  for (const auto& c : regp.applicable) {
    if (c.find("a>0 (i)") != std::string::npos) has_iff = true;
    if (c.find("a>0 (ii)") != std::string::npos) has_two = true;
  }
  CHECK(has_iff);
  CHECK_FALSE(has_two);  // p = 5 is not > (N+2)/(N-2) = 5
}

namespace {

// Independent oracle: exterior residual recomputed from scratch with its own
// non-uniform difference formulas.
double oracle_exterior_residual(const ExteriorProfile& prof, int N,
                                double beta, double p, double Rmax) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < prof.R.size(); ++k) {
    const double R = prof.R[k];
    if (R > Rmax) continue;
    const double x0 = prof.R[k - 1], x1 = prof.R[k], x2 = prof.R[k + 1];
    const double y0 = prof.U[k - 1], y1 = prof.U[k], y2 = prof.U[k + 1];
    // Quadratic through the three samples.
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double c2 = (d12 - d01) / (x2 - x0);
    const double der1 = d01 + c2 * (2.0 * x1 - x0 - x1);
    const double der2 = 2.0 * c2;
    const double lap = der2 + (N - 1) * der1 / R;
    worst = std::max(worst,
                     std::abs(-lap - std::pow(y1, p) / std::pow(R, beta)));
  }
  return worst;
}

}  // namespace

TEST_CASE("exterior solve: two solutions at small a, residuals O(h^2)") {
  ExteriorSpec s{3, 0.0, 5.0, 0.05};
  ExteriorOptions opt;
  opt.M = 500;
  auto res = exterior_solve(s, opt);
  CHECK(res.alpha_eff == 0.0);
  CHECK(res.lambda_equivalent == Catch::Approx(std::pow(0.05, 4.0)));
  REQUIRE(res.minimal.has_value());
  REQUIRE(res.mountain_pass.has_value());

  // Boundary value preserved exactly on both profiles.
  CHECK(res.minimal->exterior.U.front() == Catch::Approx(0.05).epsilon(1e-12));
  CHECK(res.mountain_pass->exterior.U.front() ==
        Catch::Approx(0.05).epsilon(1e-12));

  // Distinct profiles.
  double dist = 0.0;
  for (std::size_t k = 0; k < res.minimal->exterior.U.size(); ++k)
    dist = std::max(dist, std::abs(res.minimal->exterior.U[k] -
                                   res.mountain_pass->exterior.U[k]));
  CHECK(dist > 1e-3);

  // Residual against the independent oracle, at two resolutions.
  const double h1 = 1.0 / 501;
  const double r1 = oracle_exterior_residual(res.minimal->exterior, 3, 0.0,
                                             5.0, 10.0);
  opt.M = 1000;
  opt.want_mountain_pass = false;
  auto res2 = exterior_solve(s, opt);
  const double h2 = 1.0 / 1001;
  const double r2 = oracle_exterior_residual(res2.minimal->exterior, 3, 0.0,
                                             5.0, 10.0);
  INFO("residuals " << r1 << " -> " << r2);
  CHECK(r1 <= 50.0 * h1 * h1);
  CHECK(r2 <= 50.0 * h2 * h2);
  CHECK(r1 / r2 == Catch::Approx(4.0).epsilon(0.5));

  // Decay law: U R^{N-2} constant within 1% for R >= 10.
  const auto& prof = res2.minimal->exterior;
  for (std::size_t k = 0; k < prof.R.size(); ++k)
    if (prof.R[k] >= 10.0)
      CHECK(prof.U[k] * prof.R[k] ==
            Catch::Approx(prof.limit_value).epsilon(0.01));
}

TEST_CASE("exterior solve: large a reports no solution") {
  ExteriorSpec s{3, 0.0, 5.0, 2.0};
  ExteriorOptions opt;
  opt.M = 300;
  opt.want_mountain_pass = false;
  auto res = exterior_solve(s, opt);
  CHECK_FALSE(res.minimal.has_value());
  CHECK(res.note.find("no solution") != std::string::npos);
}

TEST_CASE("exterior solve: ground state in the Ni range for a = 0") {
  ExteriorSpec s{3, 0.0, 6.0, 0.0};
  ExteriorOptions opt;
  opt.M = 400;
  auto res = exterior_solve(s, opt);
  REQUIRE(res.mountain_pass.has_value());
  const auto& prof = res.mountain_pass->exterior;
  for (double v : prof.U) CHECK(v >= 0.0);
  CHECK(prof.U[prof.U.size() / 2] > 0.0);
  CHECK(oracle_exterior_residual(prof, 3, 0.0, 6.0, 10.0) <= 1e-2);
}

TEST_CASE("exterior solve rejects alpha_eff < 0") {
  ExteriorSpec s{4, -3.0, 2.0, 0.1};  // alpha_eff = -6+(-3)+4 = -5
  CHECK_THROWS(exterior_solve(s));
}
