#pragma once

// Mountain-pass levels per symmetry class at fixed (alpha, lambda), the
// lambda -> 0 level limit, and the level-ordering report used as the
// multiplicity certificate: solutions in different classes are distinct
// whenever their critical levels are separated by more than the estimated
// level tolerance. Level uncertainties are estimated by coarse-grid
// Richardson differences plus the path-vs-polish gap.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "henonlab/branch.hpp"
#include "henonlab/mountain_pass.hpp"
#include "henonlab/symmetry2d.hpp"

namespace henonlab {

struct LevelEntry {
  std::string cls;  // "radial", "axial", "partial"
  std::optional<int> l;
  double level = 0.0;
  double tolerance = 0.0;
  double residual_sup = 0.0;
  double nonradiality = 0.0;
  bool converged = false;
  bool degenerate_ring = false;  // level collapse at the local-min level
};

struct LevelReport {
  int N = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  double p = 0.0;
  std::optional<double> level_localmin;
  std::vector<LevelEntry> entries;

  struct Gap {
    std::string a, b;
    double gap = 0.0;
    double threshold = 0.0;  // 3x the combined level tolerance
    bool separated = false;
  };
  std::vector<Gap> pairwise_gaps;

  // Size of the largest set of mutually separated entries (local minimum
  // included when present): the desk-scale multiplicity count.
  int distinct_count = 0;
};

struct LevelOptions {
  int M_radial = 1600;
  int Mr = 96;
  int Mt = 48;
  MPConfig mp{};
  bool estimate_tolerance = true;  // coarse-grid Richardson re-run
  double bump_radius = -1.0;       // < 0: use sqrt(alpha/(alpha+2))
  double bump_width = -1.0;        // < 0: use max(16, alpha)
};

namespace detail {

// Radial local minimum at lambda > 0 (from the minimal branch), or the zero
// field at lambda = 0.
inline LocalMinResult radial_local_min(const ProblemSpec& spec,
                                       const RadialOperator& op) {
  const RadialGrid& g = op.grid();
  if (spec.lambda == 0.0) {
    RadialField zero(g);
    return local_min_refine(spec, zero, op);
  }
  RadialField e = op.solve(RadialField::sample(
      g, [&](double r) { return std::pow(r, spec.alpha); }));
  auto min_res = monotone_iterate(spec, op, spec.lambda * e, nullptr);
  if (min_res.status != MonotoneStatus::Converged)
    throw std::runtime_error("radial_local_min: minimal branch did not converge");
  return local_min_refine(spec, spec.a * min_res.record->field, op);
}

inline double radial_mp_level_once(const ProblemSpec& spec, int M,
                                   const MPConfig& cfg, LevelEntry& entry,
                                   std::optional<double>* localmin_level) {
  RadialGrid g(M, spec.N);
  RadialOperator op(g, spec.N);
  RadialMPProblem prob{&op, spec};
  auto lm = radial_local_min(spec, op);
  if (!lm.record) throw std::runtime_error("radial level: no local minimum");
  if (localmin_level) *localmin_level = lm.record->energy;

  RadialField base = lm.record->field;
  if (spec.lambda == 0.0)
    base = RadialField::sample(g, [](double r) { return 1.0 - r * r; });
  const double target = lm.record->energy - 1.0;
  const double R = scale_until_below(prob, base, target);
  auto mp = mp_find(prob, lm.record->field, R * base, cfg);
  entry.converged = mp.status == MPStatus::Converged;
  entry.degenerate_ring = mp.status == MPStatus::LevelCollapse;
  entry.residual_sup = mp.residual_sup;
  entry.tolerance = std::abs(mp.level_path - mp.level);
  return mp.level;
}

struct TwoDLevelSetup {
  ProblemSpec spec;
  int Mr, Mt;
};

inline double mp_level_2d_once(const TwoDLevelSetup& s, const MPConfig& cfg,
                               double bump_radius, double bump_width,
                               LevelEntry& entry) {
  const ProblemSpec& spec = s.spec;
  PolarGrid2D g2 = spec.symmetry == Symmetry::Axial
                       ? PolarGrid2D::axial(s.Mr, s.Mt, spec.N)
                       : PolarGrid2D::quarter(s.Mr, s.Mt, spec.N, *spec.l);
  PolarOperator2D op2(g2);
  Polar2DMPProblem prob{&op2, spec};

  // Start endpoint: the radial local minimum embedded and re-polished in
  // the 2-D class (at lambda = 0 it is the zero field).
  RadialGrid gr(s.Mr, spec.N);
  RadialOperator opr(gr, spec.N);
  ProblemSpec rad = spec;
  rad.symmetry = Symmetry::Radial;
  rad.l.reset();
  rad = rad.validate();
  auto lm = radial_local_min(rad, opr);
  if (!lm.record) throw std::runtime_error("2-D level: no local minimum");
  Field2D start = Field2D::embed_radial(g2, lm.record->field);
  if (spec.lambda > 0.0 && !newton_refine_2d(start, spec, op2, cfg.grad_tol))
    throw std::runtime_error("2-D level: local minimum did not re-polish");
  const double J_start = prob.energy(start);

  // Far endpoint: a symmetry-breaking boundary bump scaled just below
  // J(start) - 1. The angular offset places it inside the class's wedge.
  const double r0 =
      bump_radius > 0.0 ? bump_radius
                        : std::sqrt(spec.alpha / (spec.alpha + 2.0) + 1e-12);
  const double k = bump_width > 0.0 ? bump_width : std::max(16.0, spec.alpha);
  Field2D bump = Field2D::sample(g2, [&](double r, double t) {
    const double d2 = r * r + r0 * r0 - 2.0 * r * r0 * std::cos(t);
    return (1.0 - r * r) * std::exp(-k * d2);
  });
  const double R = scale_until_below(prob, bump, J_start - 1.0);
  auto mp = mp_find(prob, start, R * bump, cfg);
  entry.converged = mp.status == MPStatus::Converged;
  entry.degenerate_ring = mp.status == MPStatus::LevelCollapse;
  entry.residual_sup = mp.residual_sup;
  entry.nonradiality = mp.saddle.nonradiality();
  entry.tolerance = std::abs(mp.level_path - mp.level);
  return mp.level;
}

}  // namespace detail

// Mountain-pass level of one symmetry class, with a Richardson tolerance
// estimate from a half-resolution re-run.
inline LevelEntry class_level(const ProblemSpec& spec_in,
                              const LevelOptions& opt,
                              std::optional<double>* localmin_level = nullptr) {
  const ProblemSpec spec = spec_in.validated ? spec_in : spec_in.validate();
  LevelEntry entry;
  entry.cls = to_string(spec.symmetry);
  entry.l = spec.l;
  if (spec.symmetry == Symmetry::Radial) {
    entry.level = detail::radial_mp_level_once(spec, opt.M_radial, opt.mp,
                                               entry, localmin_level);
    if (opt.estimate_tolerance && entry.converged) {
      LevelEntry coarse;
      const double lc = detail::radial_mp_level_once(
          spec, opt.M_radial / 2, opt.mp, coarse, nullptr);
      entry.tolerance =
          std::max(entry.tolerance, std::abs(entry.level - lc) / 3.0);
    }
  } else {
    detail::TwoDLevelSetup s{spec, opt.Mr, opt.Mt};
    entry.level = detail::mp_level_2d_once(s, opt.mp, opt.bump_radius,
                                           opt.bump_width, entry);
    if (opt.estimate_tolerance && entry.converged) {
      LevelEntry coarse;
      detail::TwoDLevelSetup sc{spec, opt.Mr / 2, opt.Mt / 2};
      const double lc = detail::mp_level_2d_once(sc, opt.mp, opt.bump_radius,
                                                 opt.bump_width, coarse);
      entry.tolerance =
          std::max(entry.tolerance, std::abs(entry.level - lc) / 3.0);
    }
  }
  entry.tolerance = std::max(entry.tolerance, 1e-10 * std::abs(entry.level));
  return entry;
}

// Levels across the requested classes plus the local-minimum level; all
// pairwise gaps are flagged against 3x the combined tolerance.
inline LevelReport level_ordering_report(int N, double alpha, double lambda,
                                         double p,
                                         const std::vector<int>& l_list,
                                         const LevelOptions& opt = {}) {
  LevelReport rep;
  rep.N = N;
  rep.alpha = alpha;
  rep.lambda = lambda;
  rep.p = p;

  ProblemSpec rad;
  rad.N = N;
  rad.alpha = alpha;
  rad.p = p;
  rad.lambda = lambda;
  std::optional<double> lm_level;
  rep.entries.push_back(class_level(rad.validate(), opt, &lm_level));
  rep.level_localmin = lm_level;

  if (N >= 2) {
    ProblemSpec ax = rad;
    ax.symmetry = Symmetry::Axial;
    rep.entries.push_back(class_level(ax.validate(), opt));
  }
  for (int l : l_list) {
    ProblemSpec part = rad;
    part.symmetry = Symmetry::Partial;
    part.l = l;
    rep.entries.push_back(class_level(part.validate(), opt));
  }

  auto name = [](const LevelEntry& e) {
    return e.l ? e.cls + "(" + std::to_string(*e.l) + ")" : e.cls;
  };
  const int n = static_cast<int>(rep.entries.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LevelReport::Gap gp;
      gp.a = name(rep.entries[i]);
      gp.b = name(rep.entries[j]);
      gp.gap = std::abs(rep.entries[i].level - rep.entries[j].level);
      gp.threshold =
          3.0 * (rep.entries[i].tolerance + rep.entries[j].tolerance);
      gp.separated = rep.entries[i].converged && rep.entries[j].converged &&
                     gp.gap > gp.threshold;
      rep.pairwise_gaps.push_back(gp);
    }

  // Largest mutually separated subset (greedy over the small entry count),
  // plus the local minimum, whose negative level is separated from every
  // positive mountain-pass level by construction.
  int best = 0;
  const int total = n;
  for (int mask = 1; mask < (1 << total); ++mask) {
    bool ok = true;
    for (int i = 0; i < total && ok; ++i)
      if (mask & (1 << i)) {
        if (!rep.entries[i].converged) ok = false;
        for (int j = i + 1; j < total && ok; ++j)
          if (mask & (1 << j)) {
            const double gap =
                std::abs(rep.entries[i].level - rep.entries[j].level);
            const double thr = 3.0 * (rep.entries[i].tolerance +
                                      rep.entries[j].tolerance);
            if (gap <= thr) ok = false;
          }
      }
    if (ok) best = std::max(best, __builtin_popcount(static_cast<unsigned>(mask)));
  }
  rep.distinct_count = best + (rep.level_localmin ? 1 : 0);
  return rep;
}

// ---------------------------------------------------------------------------
// lambda -> 0 level convergence.

struct LevelLimitRow {
  double lambda = 0.0;
  double level = 0.0;
  double gap_to_zero = 0.0;
  // Perturbation-control check |J_lambda(V) - J_0(V)| <= paper bound,
  // evaluated at the computed mountain-pass solution V.
  double perturbation = 0.0;
  double perturbation_bound = 0.0;
  bool converged = false;
};

struct LevelLimitTable {
  int N = 0;
  double alpha = 0.0, p = 0.0;
  double level_zero = 0.0;
  std::vector<LevelLimitRow> rows;
};

inline LevelLimitTable level_limit_lambda_zero(int N, double alpha, double p,
                                               const std::vector<double>& lambdas,
                                               const LevelOptions& opt = {}) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1]))
      throw std::invalid_argument("level_limit: lambda list must decrease");
  LevelLimitTable tab;
  tab.N = N;
  tab.alpha = alpha;
  tab.p = p;

  RadialGrid g(opt.M_radial, N);
  RadialOperator op(g, N);

  auto level_at = [&](double lam, RadialField* solution, bool* ok) {
    ProblemSpec s;
    s.N = N;
    s.alpha = alpha;
    s.p = p;
    s.lambda = lam;
    const auto spec = s.validate();
    RadialMPProblem prob{&op, spec};
    auto lm = detail::radial_local_min(spec, op);
    if (!lm.record) throw std::runtime_error("level_limit: no local minimum");
    RadialField base = lm.record->field;
    if (lam == 0.0)
      base = RadialField::sample(g, [](double r) { return 1.0 - r * r; });
    const double R = scale_until_below(prob, base, lm.record->energy - 1.0);
    auto mp = mp_find(prob, lm.record->field, R * base, opt.mp);
    if (solution) *solution = mp.saddle;
    if (ok) *ok = mp.status == MPStatus::Converged;
    return mp.level;
  };

  bool ok0 = false;
  tab.level_zero = level_at(0.0, nullptr, &ok0);
  if (!ok0) throw std::runtime_error("level_limit: lambda = 0 level failed");

  for (double lam : lambdas) {
    LevelLimitRow row;
    row.lambda = lam;
    RadialField V;
    row.level = level_at(lam, &V, &row.converged);
    row.gap_to_zero = std::abs(row.level - tab.level_zero);

    ProblemSpec s;
    s.N = N;
    s.alpha = alpha;
    s.p = p;
    s.lambda = lam;
    const auto spec = s.validate();
    ProblemSpec s0 = spec;
    s0.lambda = 0.0;
    const auto spec0 = s0.validate();
    row.perturbation =
        std::abs(energy_radial(V, spec, op) - energy_radial(V, spec0, op));
    const double omega = sphere_area(N);
    double vp = 0.0;
    for (int i = 0; i <= g.interior_nodes(); ++i)
      vp += g.weight(i) * std::pow(g.r(i), alpha) *
            std::pow(std::abs(V[i]), p);
    vp *= omega;
    row.perturbation_bound =
        std::pow(2.0, p - 1.0) * spec.a *
        (vp + std::pow(spec.a, p) * weighted_ball_volume(N, alpha));
    tab.rows.push_back(row);
  }
  return tab;
}

}  // namespace henonlab
