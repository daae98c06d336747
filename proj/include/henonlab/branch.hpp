#pragma once

// Minimal-solution branch of -Delta w = lambda |x|^alpha (1+w)^p via
// sub/supersolution monotone iteration, bisection bracketing of the
// extinction threshold lambda_*, and the small-lambda asymptotic diagnostics
// w / (lambda e_alpha) -> 1.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "henonlab/closed_forms.hpp"
#include "henonlab/grid.hpp"
#include "henonlab/problem.hpp"
#include "henonlab/radial_operator.hpp"
#include "henonlab/record.hpp"

namespace henonlab {

enum class MonotoneStatus {
  Converged,       // sup increment below tolerance
  SlowConverging,  // iteration cap hit while increments still shrink
  Diverged,        // sup-norm cutoff exceeded, or increments grow
  BarrierViolated  // monotonicity or the upper bound failed (bad barrier pair)
};

struct MonotoneResult {
  MonotoneStatus status = MonotoneStatus::Diverged;
  std::optional<SolutionRecord> record;
  int iterations = 0;
  double final_sup = 0.0;
  double last_increment = 0.0;
};

struct MonotoneOptions {
  double tol = 1e-10;
  int cap = 10000;
  double blowup_cutoff = 1e6;
  bool check_barriers = true;
};

// w-form residual sup: | A w - lambda r^alpha (1+w)^p |_inf over DOF nodes.
inline double w_residual_sup(const RadialOperator& op, const ProblemSpec& spec,
                             const RadialField& w) {
  const RadialGrid& g = op.grid();
  RadialField res = op.apply(w);
  double sup = 0.0;
  for (int i = 0; i <= g.interior_nodes(); ++i) {
    const double f = spec.lambda * std::pow(g.r(i), spec.alpha) *
                     std::pow(1.0 + w[i], spec.p);
    sup = std::max(sup, std::abs(res[i] - f));
  }
  return sup;
}

// Monotone iteration w_{k+1} = A^{-1}( lambda r^alpha (1+w_k)^p ) from a
// discrete subsolution, optionally boxed by a discrete supersolution.
inline MonotoneResult monotone_iterate(const ProblemSpec& spec_in,
                                       const RadialOperator& op,
                                       const RadialField& lower,
                                       const RadialField* upper,
                                       const MonotoneOptions& opt = {}) {
  const ProblemSpec spec = spec_in.validated ? spec_in : spec_in.validate();
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  const double slack = 1e-12;

  auto forcing = [&](const RadialField& w) {
    RadialField f(g);
    for (int i = 0; i <= M; ++i)
      f[i] = spec.lambda * std::pow(g.r(i), spec.alpha) *
             std::pow(1.0 + w[i], spec.p);
    return f;
  };

  MonotoneResult out;
  if (opt.check_barriers) {
    RadialField alow = op.apply(lower);
    RadialField flow = forcing(lower);
    for (int i = 0; i <= M; ++i) {
      if (alow[i] > flow[i] + slack * (1.0 + std::abs(flow[i]))) {
        out.status = MonotoneStatus::BarrierViolated;
        return out;
      }
      if (upper && lower[i] > (*upper)[i] + slack) {
        out.status = MonotoneStatus::BarrierViolated;
        return out;
      }
    }
    if (upper) {
      RadialField aup = op.apply(*upper);
      RadialField fup = forcing(*upper);
      for (int i = 0; i <= M; ++i)
        if (aup[i] < fup[i] - slack * (1.0 + std::abs(fup[i]))) {
          out.status = MonotoneStatus::BarrierViolated;
          return out;
        }
    }
  }

  RadialField w = lower;
  double prev_inc = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.cap; ++it) {
    RadialField next = op.solve(forcing(w));
    double inc = 0.0;
    for (int i = 0; i <= M; ++i) {
      const double d = next[i] - w[i];
      if (d < -slack * (1.0 + std::abs(w[i]))) {
        out.status = MonotoneStatus::BarrierViolated;
        out.iterations = it;
        return out;
      }
      inc = std::max(inc, d);
      if (upper && next[i] > (*upper)[i] + slack * (1.0 + (*upper)[i])) {
        out.status = MonotoneStatus::BarrierViolated;
        out.iterations = it;
        return out;
      }
    }
    w = next;
    out.iterations = it;
    out.final_sup = w.sup_norm();
    out.last_increment = inc;
    if (out.final_sup > opt.blowup_cutoff) {
      out.status = MonotoneStatus::Diverged;
      return out;
    }
    if (inc <= opt.tol) {
      SolutionRecord rec;
      rec.spec = spec;
      rec.field = w;
      rec.classification = SolutionClass::Minimal;
      rec.iterations = it;
      rec.residual_sup = w_residual_sup(op, spec, w);
      // Energy of the equivalent v = a*w variable.
      RadialField v = spec.a * w;
      rec.energy = energy_radial(v, spec, op);
      out.record = std::move(rec);
      out.status = MonotoneStatus::Converged;
      return out;
    }
    if (it > 16 && inc > prev_inc * (1.0 + 1e-12) && out.final_sup > 1.0) {
      out.status = MonotoneStatus::Diverged;
      return out;
    }
    prev_inc = inc;
  }
  out.status = out.last_increment < std::numeric_limits<double>::infinity() &&
                       out.last_increment > 0.0 && out.last_increment < 1.0
                   ? MonotoneStatus::SlowConverging
                   : MonotoneStatus::Diverged;
  return out;
}

// Discrete supersolution test for lambda^{1/k} e_alpha (Lemma-style barrier):
// lambda^{1/k} r^alpha >= lambda r^alpha (1 + lambda^{1/k} e_alpha)^p nodewise.
inline bool upper_solution_check(const ProblemSpec& spec_in,
                                 const RadialOperator& op, int k) {
  if (k < 2) throw std::invalid_argument("upper_solution_check: k < 2");
  const ProblemSpec spec = spec_in.validated ? spec_in : spec_in.validate();
  const RadialGrid& g = op.grid();
  const double lam = spec.lambda;
  if (lam == 0.0) return true;
  const double root = std::pow(lam, 1.0 / k);
  RadialField e = op.solve(RadialField::sample(
      g, [&](double r) { return std::pow(r, spec.alpha); }));
  for (int i = 0; i <= g.interior_nodes(); ++i) {
    const double ralpha = std::pow(g.r(i), spec.alpha);
    if (root * ralpha < lam * ralpha * std::pow(1.0 + root * e[i], spec.p))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Branch tracing

struct BranchRow {
  double lambda = 0.0;
  double sup_norm = 0.0;
  double energy = 0.0;
  double ratio = 0.0;  // max | w/(lambda e_alpha) - 1 |
  int iterations = 0;
  SolutionRecord record;
};

struct BranchTable {
  int N = 0;
  double alpha = 0.0;
  double p = 0.0;
  std::vector<BranchRow> rows;
  std::optional<std::pair<double, double>> lambda_star_bracket;
  bool truncated = false;  // a row failed to converge; later rows dropped
};

inline double asymptotic_ratio(const SolutionRecord& rec,
                               const RadialOperator& op) {
  if (rec.classification != SolutionClass::Minimal || rec.spec.lambda <= 0.0)
    throw std::invalid_argument("asymptotic_ratio: needs a minimal record, lambda > 0");
  const RadialGrid& g = op.grid();
  RadialField e = op.solve(RadialField::sample(
      g, [&](double r) { return std::pow(r, rec.spec.alpha); }));
  double m = 0.0;
  for (int i = 0; i <= g.interior_nodes(); ++i)
    m = std::max(m, std::abs(rec.field[i] / (rec.spec.lambda * e[i]) - 1.0));
  return m;
}

struct BranchOptions {
  MonotoneOptions monotone;
  int upper_barrier_k = 2;
};

inline BranchTable trace_minimal_branch(int N, double alpha, double p,
                                        const std::vector<double>& lambda_grid,
                                        const RadialOperator& op,
                                        const BranchOptions& opt = {}) {
  BranchTable table;
  table.N = N;
  table.alpha = alpha;
  table.p = p;
  if (lambda_grid.empty()) return table;
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1]))
      throw std::invalid_argument("trace_minimal_branch: grid not increasing");

  const RadialGrid& g = op.grid();
  RadialField e = op.solve(RadialField::sample(
      g, [&](double r) { return std::pow(r, alpha); }));
  const double e_max = e.sup_norm();
  const double lemma_bound = lambda_star_lower_bound(N, alpha, p);

  std::optional<RadialField> continuation;
  for (double lam : lambda_grid) {
    ProblemSpec spec;
    spec.N = N;
    spec.alpha = alpha;
    spec.p = p;
    spec.lambda = lam;
    spec = spec.validate();

    RadialField lower = continuation ? *continuation : lam * e;
    std::optional<RadialField> upper;
    if (lam <= lemma_bound) {
      upper = (1.0 / ((p - 1.0) * e_max)) * e;
    } else if (upper_solution_check(spec, op, opt.upper_barrier_k)) {
      upper = std::pow(lam, 1.0 / opt.upper_barrier_k) * e;
    }
    MonotoneResult res = monotone_iterate(spec, op, lower,
                                          upper ? &*upper : nullptr,
                                          opt.monotone);
    if (res.status != MonotoneStatus::Converged) {
      table.truncated = true;
      break;
    }
    BranchRow row;
    row.lambda = lam;
    row.record = *res.record;
    row.sup_norm = res.record->field.sup_norm();
    row.energy = res.record->energy;
    row.iterations = res.record->iterations;
    row.ratio = asymptotic_ratio(*res.record, op);
    continuation = res.record->field;
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Extinction threshold bracket by bisection between the certified analytic
// existence bound and the eigenvalue nonexistence bound.

struct LambdaStarOptions {
  double tol = 1e-3;  // bracket width relative to the initial interval
  MonotoneOptions monotone{1e-10, 20000, 1e6, false};
};

inline std::pair<double, double> estimate_lambda_star(
    int N, double alpha, double p, const RadialOperator& op,
    const LambdaStarOptions& opt = {}) {
  if (opt.tol <= 0.0) throw std::invalid_argument("estimate_lambda_star: tol <= 0");
  const RadialGrid& g = op.grid();
  RadialField e = op.solve(RadialField::sample(
      g, [&](double r) { return std::pow(r, alpha); }));
  const EigenPair ep = principal_eigenpair(op, alpha);
  const LambdaStarBounds bounds =
      lambda_star_bounds(N, alpha, p, ep.lambda_1_alpha);

  auto solvable = [&](double lam) {
    ProblemSpec spec;
    spec.N = N;
    spec.alpha = alpha;
    spec.p = p;
    spec.lambda = lam;
    spec = spec.validate();
    MonotoneResult r = monotone_iterate(spec, op, lam * e, nullptr, opt.monotone);
    return r.status == MonotoneStatus::Converged ||
           r.status == MonotoneStatus::SlowConverging;
  };

  double lo = bounds.lower;
  double hi = bounds.upper;
  if (!solvable(lo))
    throw std::runtime_error(
        "estimate_lambda_star: certified lower bound failed to converge "
        "(grid too coarse?)");
  const double width0 = hi - lo;
  while (hi - lo > opt.tol * width0) {
    const double mid = 0.5 * (lo + hi);
    if (solvable(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace henonlab
