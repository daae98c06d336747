#pragma once

// Kelvin correspondence between the exterior problem
//   -Delta U = U^p / |x|^beta  outside the unit ball, U = a on the boundary,
//   U -> 0 at infinity,
// and the Henon-type ball problem: under U(x) = u(x/|x|^2) |x|^{2-N} the
// exterior problem becomes -Delta u = |x|^{alpha_eff} u^p in B with
// alpha_eff = -N - 2 + beta + p(N-2) and u = a on the boundary. Everything
// routes through the ball solvers; the exterior grid is the reciprocal image
// of the ball grid, so the map itself introduces no interpolation error.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "henonlab/branch.hpp"
#include "henonlab/mountain_pass.hpp"

namespace henonlab {

struct ExteriorSpec {
  int N = 3;
  double beta = 0.0;
  double p = 2.0;
  double a = 0.0;

  void validate() const {
    if (N < 3) throw std::invalid_argument("ExteriorSpec: N < 3 (Kelvin exponent 2-N degenerates)");
    if (p <= 0.0) throw std::invalid_argument("ExteriorSpec: p <= 0");
    if (a < 0.0) throw std::invalid_argument("ExteriorSpec: a < 0");
  }
};

inline double kelvin_exponent(int N, double beta, double p) {
  if (N < 3) throw std::invalid_argument("kelvin_exponent: N < 3");
  return -N - 2.0 + beta + p * (N - 2.0);
}

// Exterior radial profile on the reciprocal grid R_k = 1/r_k (increasing),
// with the decay constant lim U(R) R^{N-2} = u(0).
struct ExteriorProfile {
  int N = 3;
  std::vector<double> R;
  std::vector<double> U;
  double limit_value = 0.0;  // u(0), by quadratic extrapolation
};

inline ExteriorProfile kelvin_push(const RadialField& u, int N) {
  if (N < 3) throw std::invalid_argument("kelvin_push: N < 3");
  const RadialGrid& g = u.grid();
  ExteriorProfile out;
  out.N = N;
  const int M = g.interior_nodes();
  out.R.reserve(M + 1);
  out.U.reserve(M + 1);
  for (int i = M + 1; i >= 1; --i) {
    const double r = g.r(i);
    out.R.push_back(1.0 / r);
    out.U.push_back(u[i] * std::pow(r, N - 2.0));
  }
  out.limit_value = u.extrapolate_center();
  return out;
}

// Inverse map back onto the ball grid nodes (exact at the sample points).
inline RadialField kelvin_pull(const ExteriorProfile& prof,
                               const RadialGrid& g) {
  const int M = g.interior_nodes();
  if (static_cast<int>(prof.R.size()) != M + 1)
    throw std::invalid_argument("kelvin_pull: node count mismatch");
  RadialField u(g);
  for (int k = 0; k < static_cast<int>(prof.R.size()); ++k) {
    const int i = M + 1 - k;
    u[i] = prof.U[k] * std::pow(prof.R[k], prof.N - 2.0);
  }
  u[0] = prof.limit_value;
  return u;
}

// Exterior residual sup | -Delta U - U^p / R^beta | by quadratic-fit finite
// differences on the (non-uniform) reciprocal grid, sampled over
// R in [R_lo, R_hi].
inline double exterior_residual_sup(const ExteriorProfile& prof,
                                    const ExteriorSpec& spec, double R_lo,
                                    double R_hi) {
  const int n = static_cast<int>(prof.R.size());
  double worst = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    const double R = prof.R[k];
    if (R < R_lo || R > R_hi) continue;
    const double hm = prof.R[k] - prof.R[k - 1];
    const double hp = prof.R[k + 1] - prof.R[k];
    const double Um = prof.U[k - 1], U0 = prof.U[k], Up = prof.U[k + 1];
    const double d2 =
        2.0 * (hm * Up + hp * Um - (hm + hp) * U0) / (hm * hp * (hm + hp));
    const double d1 =
        (hm * hm * Up - hp * hp * Um + (hp * hp - hm * hm) * U0) /
        (hm * hp * (hm + hp));
    const double lap = d2 + (spec.N - 1) * d1 / R;
    const double res =
        -lap - std::pow(U0, spec.p) / std::pow(R, spec.beta);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Regime classification echoing the exterior-problem case list.

struct KelvinRegimes {
  double alpha_eff = 0.0;
  std::vector<std::string> applicable;
};

inline KelvinRegimes kelvin_classify(const ExteriorSpec& spec) {
  spec.validate();
  const int N = spec.N;
  const double beta = spec.beta, p = spec.p;
  KelvinRegimes out;
  out.alpha_eff = kelvin_exponent(N, beta, p);
  if (spec.a == 0.0) {
    if (beta <= 0.0 && p > (N + 2.0 - 2.0 * beta) / (N - 2.0))
      out.applicable.push_back(
          "a=0 (i): beta <= 0, p > (N+2-2beta)/(N-2): one positive radial solution");
    if (beta > 0.0 && beta <= 0.5 * (N + 2.0) &&
        p >= (N + 2.0 - beta) / (N - 2.0) && p != 1.0)
      out.applicable.push_back(
          "a=0 (ii): 0 < beta <= (N+2)/2, p >= (N+2-beta)/(N-2): one positive radial solution");
    if (beta > 0.5 * (N + 2.0) && p != 1.0)
      out.applicable.push_back(
          "a=0 (iii): beta > (N+2)/2: one positive radial solution for all p != 1");
    if (p > 1.0 && p < two_star(N) - 1.0 && beta > 0.0)
      out.applicable.push_back(
          "a=0 (v): 1 < p < 2*-1, beta > 0 large: at least [N/2]+1 non rotational equivalent solutions");
  } else {
    if (p > 1.0 && beta >= N + 2.0 - p * (N - 2.0))
      out.applicable.push_back(
          "a>0 (i): solution iff a is suitably small");
    if (beta <= 0.0 && p > (N + 2.0 - 2.0 * beta) / (N - 2.0))
      out.applicable.push_back(
          "a>0 (ii): at least two radial solutions for a suitably small");
    if (beta > 0.0 && p > 1.0 && p < two_star(N) - 1.0)
      out.applicable.push_back(
          "a>0 (iii): beta > 0 large: multiple positive solutions for a suitably small");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exterior solve through the ball problem.

struct ExteriorSolution {
  SolutionRecord ball;          // v-variable record on the ball
  RadialField u_ball;           // u = v + a (boundary value a)
  ExteriorProfile exterior;
  double exterior_residual = 0.0;  // FD residual over R in [1, 10]
};

struct ExteriorResult {
  ExteriorSpec spec;
  double alpha_eff = 0.0;
  double lambda_equivalent = 0.0;
  KelvinRegimes regimes;
  std::optional<ExteriorSolution> minimal;
  std::optional<ExteriorSolution> mountain_pass;
  std::string note;  // diagnostics, e.g. beyond-threshold classification
};

struct ExteriorOptions {
  int M = 1000;
  MPConfig mp{};
  bool want_mountain_pass = true;
};

inline ExteriorResult exterior_solve(const ExteriorSpec& espec,
                                     const ExteriorOptions& opt = {}) {
  espec.validate();
  ExteriorResult out;
  out.spec = espec;
  out.alpha_eff = kelvin_exponent(espec.N, espec.beta, espec.p);
  out.regimes = kelvin_classify(espec);
  if (out.alpha_eff < 0.0)
    throw std::invalid_argument(
        "exterior_solve: alpha_eff < 0 (outside the Henon-ball range; "
        "see the a=0 regime list for the fast-decay cases)");
  if (espec.p <= 1.0)
    throw std::invalid_argument(
        "exterior_solve: p <= 1 has no lambda-equivalent ball problem");

  const int N = espec.N;
  const double alpha = out.alpha_eff;
  const double p = espec.p;
  RadialGrid g(opt.M, N);
  RadialOperator op(g, N);

  auto push_record = [&](const SolutionRecord& rec) {
    ExteriorSolution sol;
    sol.ball = rec;
    sol.u_ball = rec.field;
    for (int i = 0; i < sol.u_ball.size(); ++i) sol.u_ball[i] += espec.a;
    sol.exterior = kelvin_push(sol.u_ball, N);
    sol.exterior_residual = exterior_residual_sup(sol.exterior, espec, 1.0, 10.0);
    return sol;
  };

  if (espec.a == 0.0) {
    // Ground state of the lambda = 0 functional via the mountain pass.
    ProblemSpec s;
    s.N = N;
    s.alpha = alpha;
    s.p = p;
    s.lambda = 0.0;
    const auto spec = s.validate();
    RadialMPProblem prob{&op, spec};
    RadialField zero(g);
    RadialField bump = RadialField::sample(g, [](double r) { return 1.0 - r * r; });
    const double R = scale_until_below(prob, bump, -1.0);
    auto mp = mp_find(prob, zero, R * bump, opt.mp);
    if (mp.status != MPStatus::Converged)
      throw std::runtime_error("exterior_solve: ground state did not converge");
    SolutionRecord rec;
    rec.spec = spec;
    rec.field = mp.saddle;
    rec.energy = mp.level;
    rec.residual_sup = mp.residual_sup;
    rec.classification = SolutionClass::MountainPass;
    out.mountain_pass = push_record(rec);
    out.lambda_equivalent = 0.0;
    return out;
  }

  const double lambda = std::pow(espec.a, p - 1.0);
  out.lambda_equivalent = lambda;
  ProblemSpec s;
  s.N = N;
  s.alpha = alpha;
  s.p = p;
  s.lambda = lambda;
  const auto spec = s.validate();

  RadialField e = op.solve(RadialField::sample(
      g, [&](double r) { return std::pow(r, alpha); }));
  MonotoneOptions mono;
  mono.check_barriers = false;
  mono.cap = 20000;
  auto min_res = monotone_iterate(spec, op, lambda * e, nullptr, mono);
  if (min_res.status != MonotoneStatus::Converged) {
    out.note =
        "no solution: monotone iteration diverged (a beyond the smallness "
        "threshold; lambda-equivalent above the extinction bracket)";
    return out;
  }
  // Record in v variables: u = a(w+1) = v + a.
  SolutionRecord vrec = *min_res.record;
  for (int i = 0; i < vrec.field.size(); ++i) vrec.field[i] *= spec.a;
  vrec.residual_sup = gradient_radial(vrec.field, spec, op).sup_norm();
  out.minimal = push_record(vrec);

  if (opt.want_mountain_pass) {
    try {
      auto second = mp_second_radial(spec, op, min_res.record->field, opt.mp);
      if (second.status == MPStatus::Converged)
        out.mountain_pass = push_record(second.mountain_pass);
      else
        out.note += "mountain pass did not converge at this lambda; ";
    } catch (const std::exception& ex) {
      out.note += std::string("mountain pass skipped: ") + ex.what() + "; ";
    }
  }
  return out;
}

}  // namespace henonlab
