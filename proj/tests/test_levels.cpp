#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "henonlab/levels.hpp"

using namespace henonlab;

TEST_CASE("level limit: gaps shrink toward the lambda = 0 level") {
  LevelOptions opt;
  opt.M_radial = 400;
  opt.estimate_tolerance = false;
  opt.mp.grad_tol = 1e-9;
  const auto tab =
      level_limit_lambda_zero(3, 1.0, 3.0, {1e-2, 1e-3, 1e-4}, opt);
  REQUIRE(tab.rows.size() == 3);
  CHECK(tab.level_zero > 0.0);
  for (const auto& row : tab.rows) {
    CHECK(row.converged);
    CHECK(row.level > 0.0);
    // Paper-style perturbation control at the computed solution.
    CHECK(row.perturbation <= row.perturbation_bound * (1.0 + 1e-9));
  }
  CHECK(tab.rows[1].gap_to_zero < tab.rows[0].gap_to_zero);
  CHECK(tab.rows[2].gap_to_zero < tab.rows[1].gap_to_zero);

  // The reported zero level is the direct lambda = 0 computation.
  ProblemSpec s;
  s.N = 3;
  s.alpha = 1.0;
  s.p = 3.0;
  s.lambda = 0.0;
  LevelEntry direct = class_level(s.validate(), opt);
  CHECK(direct.converged);
  CHECK(direct.level == Catch::Approx(tab.level_zero).epsilon(1e-6));
}

TEST_CASE("level limit rejects a non-decreasing lambda list") {
  LevelOptions opt;
  opt.M_radial = 400;
  CHECK_THROWS(level_limit_lambda_zero(3, 1.0, 3.0, {1e-3, 1e-2}, opt));
}

TEST_CASE("level report: radial vs axial separation appears with the weight") {
  LevelOptions opt;
  opt.M_radial = 500;
  opt.Mr = 64;
  opt.Mt = 32;
  opt.mp.grad_tol = 1e-8;

  // Strong weight: the axial pass drops below the radial one.
  const auto rep = level_ordering_report(2, 8.0, 1e-2, 3.0, {}, opt);
  REQUIRE(rep.entries.size() == 2);
  const auto& rad = rep.entries[0];
  const auto& ax = rep.entries[1];
  CHECK(rad.cls == "radial");
  CHECK(ax.cls == "axial");
  CHECK(rad.converged);
  CHECK(ax.converged);
  CHECK(rad.level > 0.0);
  CHECK(ax.level > 0.0);
  REQUIRE(rep.level_localmin.has_value());
  CHECK(*rep.level_localmin < 0.0);
  INFO("radial " << rad.level << " +- " << rad.tolerance << ", axial "
                 << ax.level << " +- " << ax.tolerance);
  CHECK(ax.level < rad.level);
  REQUIRE(rep.pairwise_gaps.size() == 1);
  CHECK(rep.pairwise_gaps[0].separated);
  CHECK(ax.nonradiality > 1e-4 * std::abs(ax.level));
  CHECK(rep.distinct_count >= 3);
}

TEST_CASE("level report: unweighted problem shows no splitting") {
  LevelOptions opt;
  opt.M_radial = 500;
  opt.Mr = 64;
  opt.Mt = 32;
  opt.mp.grad_tol = 1e-8;
  const auto rep = level_ordering_report(2, 0.0, 1e-2, 3.0, {}, opt);
  REQUIRE(rep.entries.size() == 2);
  const auto& rad = rep.entries[0];
  const auto& ax = rep.entries[1];
  CHECK(rad.converged);
  CHECK(ax.converged);
  INFO("radial " << rad.level << " +- " << rad.tolerance << ", axial "
                 << ax.level << " +- " << ax.tolerance);
  CHECK(std::abs(rad.level - ax.level) <=
        3.0 * (rad.tolerance + ax.tolerance));
  CHECK_FALSE(rep.pairwise_gaps[0].separated);
}
