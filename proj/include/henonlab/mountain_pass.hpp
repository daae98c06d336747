#pragma once

// Path-deformation mountain-pass engine over any discretized functional
// exposing energy / preconditioned descent / a path metric, plus the radial
// drivers: local-minimum refinement inside a barrier interval and the second
// radial solution at small lambda.
//
// One deformation sweep (i) descends every interior path node one damped
// step, (ii) re-tensions the path by cumulative-arclength resampling, and
// (iii) tries a Newton polish of the path maximizer once its residual is
// small; a polished critical point is accepted only if its level stays
// inside the bracket [endpoint max + margin, current path max].

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "henonlab/radial_operator.hpp"
#include "henonlab/record.hpp"

namespace henonlab {

struct MPConfig {
  int path_nodes = 21;
  double descent_step = 1.0;
  int max_deformations = 4000;
  double grad_tol = 1e-8;
  int polish_every = 5;
  double collapse_margin = 1e-11;  // relative to the energy scale on the path
};

enum class MPStatus { Converged, LevelCollapse, CapExceeded };

template <class FieldT>
struct MountainPassOutcome {
  MPStatus status = MPStatus::CapExceeded;
  FieldT saddle;
  double level = 0.0;       // energy of the polished saddle
  double level_path = 0.0;  // max energy along the final path
  double residual_sup = 0.0;
  int sweeps = 0;
};

namespace detail {

template <class P, class FieldT>
std::vector<FieldT> resample_path(P& prob, const std::vector<FieldT>& path) {
  const int n = static_cast<int>(path.size());
  std::vector<double> s(n, 0.0);
  for (int i = 1; i < n; ++i)
    s[i] = s[i - 1] + prob.path_dist(path[i - 1], path[i]);
  if (s[n - 1] <= 0.0) return path;
  std::vector<FieldT> out;
  out.reserve(n);
  out.push_back(path.front());
  for (int j = 1; j < n - 1; ++j) {
    const double target = s[n - 1] * j / (n - 1);
    int k = 0;
    while (k < n - 2 && s[k + 1] < target) ++k;
    const double seg = s[k + 1] - s[k];
    const double t = seg > 0.0 ? (target - s[k]) / seg : 0.0;
    out.push_back(path[k] + t * (path[k + 1] - path[k]));
  }
  out.push_back(path.back());
  return out;
}

}  // namespace detail

// P must provide: Field, energy(f), descent(f) -> {dir, slope, res_sup},
// residual_sup(f), path_dist(a,b), newton_polish(f&, tol, iters) -> bool.
template <class P>
MountainPassOutcome<typename P::Field> mp_find(P& prob,
                                               const typename P::Field& end_a,
                                               const typename P::Field& end_b,
                                               const MPConfig& cfg) {
  using Field = typename P::Field;
  if (cfg.path_nodes < 8) throw std::invalid_argument("mp_find: path_nodes < 8");
  if (cfg.descent_step <= 0.0)
    throw std::invalid_argument("mp_find: descent_step <= 0");
  const double Ja = prob.energy(end_a);
  const double Jb = prob.energy(end_b);
  if (Jb > Ja + 1e-12 * (1.0 + std::abs(Ja)))
    throw std::invalid_argument("mp_find: J(endpoint_b) must not exceed J(endpoint_a)");
  const double end_max = std::max(Ja, Jb);

  std::vector<Field> path;
  path.reserve(cfg.path_nodes);
  for (int j = 0; j < cfg.path_nodes; ++j) {
    const double t = static_cast<double>(j) / (cfg.path_nodes - 1);
    path.push_back(end_a + t * (end_b - end_a));
  }

  MountainPassOutcome<Field> out;
  out.saddle = end_a;
  std::vector<double> J(cfg.path_nodes);
  int argmax = 0;
  for (int j = 0; j < cfg.path_nodes; ++j) {
    J[j] = prob.energy(path[j]);
    if (J[j] > J[argmax]) argmax = j;
  }
  double max_J = J[argmax];
  const double scale0 = std::abs(max_J - end_max) + std::abs(max_J) + 1.0;
  // Monotone inf-max bound: descent sweeps never raise the path maximum,
  // so the smallest post-descent maximum seen so far bounds the level.
  double level_bound = max_J;
  int flat_sweeps = 0;

  for (int sweep = 1; sweep <= cfg.max_deformations; ++sweep) {
    out.sweeps = sweep;
    // Descend every interior node one damped step. The move is capped by
    // the local inter-node spacing: a node hopping across a ridge thinner
    // than the path resolution would silently lose the pass. Nodes already
    // below the lower endpoint level are past the pass and stay put.
    for (int j = 1; j < cfg.path_nodes - 1; ++j) {
      if (J[j] <= std::min(Ja, Jb)) continue;
      auto d = prob.descent(path[j]);
      if (d.slope <= 0.0) continue;
      const double seg = 0.5 * (prob.path_dist(path[j - 1], path[j]) +
                                prob.path_dist(path[j], path[j + 1]));
      const double dir_len = prob.path_dist(path[j], path[j] + d.dir);
      double tau = cfg.descent_step;
      if (dir_len > 0.0) tau = std::min(tau, 0.5 * seg / dir_len);
      for (int back = 0; back < 30; ++back) {
        Field trial = path[j] - tau * d.dir;
        const double Jt = prob.energy(trial);
        if (Jt <= J[j] - 1e-4 * tau * d.slope) {
          path[j] = std::move(trial);
          J[j] = Jt;
          break;
        }
        tau *= 0.5;
      }
    }
    level_bound = std::min(level_bound, *std::max_element(J.begin(), J.end()));

    // Re-parametrize by cumulative arclength. This resamples the same
    // polyline, so nodal maxima may move back up toward the true crossing
    // height; the deformation bound above is what decreases monotonically.
    path = detail::resample_path(prob, path);
    argmax = 0;
    for (int j = 0; j < cfg.path_nodes; ++j) {
      J[j] = prob.energy(path[j]);
      if (J[j] > J[argmax]) argmax = j;
    }
    max_J = J[argmax];

    if (max_J <= end_max + cfg.collapse_margin * scale0) {
      if (++flat_sweeps >= 10) {
        out.status = MPStatus::LevelCollapse;
        out.level_path = max_J;
        out.level = max_J;
        out.saddle = path[argmax];
        out.residual_sup = prob.residual_sup(path[argmax]);
        return out;
      }
    } else {
      flat_sweeps = 0;
    }

    const double res_at_max = prob.residual_sup(path[argmax]);
    if (sweep % cfg.polish_every == 0 || res_at_max <= cfg.grad_tol) {
      typename P::Field candidate = path[argmax];
      if (prob.newton_polish(candidate, cfg.grad_tol, 60)) {
        const double Jc = prob.energy(candidate);
        const bool above_ends = Jc > end_max + cfg.collapse_margin * scale0;
        const bool below_bound = Jc <= level_bound + 1e-6 * scale0;
        if (above_ends && below_bound) {
          out.status = MPStatus::Converged;
          out.saddle = std::move(candidate);
          out.level = Jc;
          out.level_path = level_bound;
          out.residual_sup = prob.residual_sup(out.saddle);
          return out;
        }
      }
    }
  }
  out.status = MPStatus::CapExceeded;
  out.level_path = level_bound;
  out.level = max_J;
  out.saddle = path[argmax];
  out.residual_sup = prob.residual_sup(path[argmax]);
  return out;
}

// Doubles R until J(R * base) drops below `target`, then bisects so the far
// endpoint lands just under it; a wildly overshooting endpoint would stretch
// the path and degrade the ridge resolution.
template <class P>
double scale_until_below(P& prob, const typename P::Field& base,
                         double target) {
  double hi = 2.0;
  while (prob.energy(hi * base) >= target) {
    hi *= 2.0;
    if (hi > 1e12)
      throw std::runtime_error("mountain pass: could not find a low endpoint");
  }
  double lo = hi / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prob.energy(mid * base) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Radial functional handle for the engine.

struct RadialMPProblem {
  using Field = RadialField;
  const RadialOperator* op;
  ProblemSpec spec;

  struct Descent {
    Field dir;
    double slope;
    double res_sup;
  };

  double energy(const Field& v) const { return energy_radial(v, spec, *op); }

  Descent descent(const Field& v) const {
    RadialField res = gradient_radial(v, spec, *op);
    RadialField dir = op->solve(res);
    const double omega = sphere_area(op->grid().dimension());
    return {dir, omega * op->pairing(res, dir), res.sup_norm()};
  }

  double residual_sup(const Field& v) const {
    return gradient_radial(v, spec, *op).sup_norm();
  }

  double path_dist(const Field& a, const Field& b) const {
    RadialField d = a - b;
    return std::sqrt(op->form(d, d));
  }

  bool newton_polish(Field& v, double tol, int iters) const {
    return newton_refine_radial(v, spec, *op, tol, iters);
  }
};

// ---------------------------------------------------------------------------
// Local-minimum refinement (damped preconditioned descent inside a barrier
// interval, Newton-finished).

struct LocalMinOptions {
  double grad_tol = 1e-10;
  int max_iter = 20000;
  double barrier_slack = 1e-9;
};

struct LocalMinResult {
  std::optional<SolutionRecord> record;
  bool escaped_barrier = false;
  int iterations = 0;
};

inline LocalMinResult local_min_refine(const ProblemSpec& spec_in,
                                       const RadialField& start,
                                       const RadialOperator& op,
                                       const RadialField* barrier_upper = nullptr,
                                       const LocalMinOptions& opt = {}) {
  const ProblemSpec spec = spec_in.validated ? spec_in : spec_in.validate();
  RadialMPProblem prob{&op, spec};
  const int M = op.grid().interior_nodes();
  RadialField v = start;
  double J = prob.energy(v);

  LocalMinResult out;
  auto inside = [&](const RadialField& f) {
    if (!barrier_upper) return true;
    for (int i = 0; i <= M; ++i)
      if (f[i] < -opt.barrier_slack ||
          f[i] > (*barrier_upper)[i] + opt.barrier_slack)
        return false;
    return true;
  };
  if (!inside(v)) {
    out.escaped_barrier = true;
    return out;
  }

  int it = 0;
  for (; it < opt.max_iter; ++it) {
    auto d = prob.descent(v);
    if (d.res_sup <= std::max(opt.grad_tol, 1e-3 * opt.grad_tol) &&
        newton_refine_radial(v, spec, op, opt.grad_tol))
      break;
    if (d.slope <= 0.0) break;
    double tau = 1.0;
    bool moved = false;
    for (int back = 0; back < 40; ++back) {
      RadialField trial = v - tau * d.dir;
      const double Jt = prob.energy(trial);
      if (Jt <= J - 1e-4 * tau * d.slope) {
        v = std::move(trial);
        J = Jt;
        moved = true;
        break;
      }
      tau *= 0.5;
    }
    if (!inside(v)) {
      out.escaped_barrier = true;
      out.iterations = it + 1;
      return out;
    }
    if (!moved) {
      // Descent stalled; hand over to Newton.
      if (!newton_refine_radial(v, spec, op, opt.grad_tol)) return out;
      break;
    }
    if (prob.residual_sup(v) <= 1e-2 &&
        newton_refine_radial(v, spec, op, opt.grad_tol) && inside(v))
      break;
  }
  out.iterations = it + 1;
  if (!inside(v)) {
    out.escaped_barrier = true;
    return out;
  }

  SolutionRecord rec;
  rec.spec = spec;
  rec.field = v;
  rec.energy = prob.energy(v);
  rec.residual_sup = prob.residual_sup(v);
  rec.classification = SolutionClass::LocalMin;
  rec.iterations = out.iterations;
  if (rec.residual_sup > opt.grad_tol) return out;  // record empty: no convergence
  if (spec.lambda > 0.0 && !(rec.energy < 0.0)) return out;
  out.record = std::move(rec);
  return out;
}

// Second radial solution at small lambda: mountain pass between the local
// minimum and a far endpoint R * vtilde with J(R vtilde) pushed well below.
struct SecondRadialResult {
  SolutionRecord local_min;
  SolutionRecord mountain_pass;
  double level = 0.0;
  double level_path = 0.0;
  MPStatus status = MPStatus::CapExceeded;
};

inline SecondRadialResult mp_second_radial(const ProblemSpec& spec_in,
                                           const RadialOperator& op,
                                           const RadialField& minimal_w,
                                           const MPConfig& cfg = {}) {
  const ProblemSpec spec = spec_in.validated ? spec_in : spec_in.validate();
  RadialMPProblem prob{&op, spec};

  RadialField start = spec.a * minimal_w;
  LocalMinResult lm = local_min_refine(spec, start, op);
  if (!lm.record) throw std::runtime_error("mp_second_radial: no local minimum");
  const RadialField& vtilde = lm.record->field;

  const double J0 = lm.record->energy;
  const double R =
      scale_until_below(prob, vtilde, J0 - 1.0);
  RadialField far = R * vtilde;

  auto mp = mp_find(prob, vtilde, far, cfg);
  SecondRadialResult out;
  out.local_min = *lm.record;
  out.status = mp.status;
  out.level = mp.level;
  out.level_path = mp.level_path;
  if (mp.status == MPStatus::Converged) {
    SolutionRecord rec;
    rec.spec = spec;
    rec.field = mp.saddle;
    rec.energy = mp.level;
    rec.residual_sup = mp.residual_sup;
    rec.classification = SolutionClass::MountainPass;
    rec.iterations = mp.sweeps;
    out.mountain_pass = std::move(rec);
  }
  return out;
}

}  // namespace henonlab
