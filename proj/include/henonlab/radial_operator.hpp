#pragma once

// Finite-difference machinery for the radial reduction of -Delta on the
// unit ball: conservative tridiagonal assembly (an irreducibly diagonally
// dominant M-matrix, so the discrete comparison principle holds), O(M)
// tridiagonal solves, the principal eigenpair of the |x|^alpha-weighted
// problem, and the radial energy functional with its discrete gradient.
//
// The operator is built from the quadratic form
//   Q(u,v) = sum_i c_i (u_{i+1}-u_i)(v_{i+1}-v_i),  c_i = r_{i+1/2}^{N-1}/h,
// scaled by the nodal weights of RadialGrid. This makes the matrix exactly
// self-adjoint in the weighted nodal pairing, so discrete energies and
// discrete gradients are consistent to roundoff, and reproduces the
// regularized center stencil -Delta u ~ 2N(u_0 - u_1)/h^2.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "henonlab/grid.hpp"
#include "henonlab/problem.hpp"

namespace henonlab {

inline double signed_power(double x, double p) {
  return std::copysign(std::pow(std::abs(x), p), x);
}

// Solves a general tridiagonal system with partial pivoting (needed for
// indefinite Newton systems at saddle points). Diagonals are row-indexed:
// sub[i] multiplies x[i-1], super[i] multiplies x[i+1].
inline std::vector<double> solve_tridiagonal_pivot(std::vector<double> sub,
                                                   std::vector<double> diag,
                                                   std::vector<double> super,
                                                   std::vector<double> rhs) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> extra(n, 0.0);  // second superdiagonal from row swaps
  for (int k = 0; k < n - 1; ++k) {
    if (std::abs(sub[k + 1]) > std::abs(diag[k])) {
      std::swap(diag[k], sub[k + 1]);
      std::swap(super[k], diag[k + 1]);
      std::swap(extra[k], super[k + 1]);
      std::swap(rhs[k], rhs[k + 1]);
    }
    if (diag[k] == 0.0) throw std::runtime_error("tridiagonal: singular pivot");
    const double m = sub[k + 1] / diag[k];
    diag[k + 1] -= m * super[k];
    super[k + 1] -= m * extra[k];
    rhs[k + 1] -= m * rhs[k];
  }
  if (diag[n - 1] == 0.0) throw std::runtime_error("tridiagonal: singular pivot");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  if (n >= 2) x[n - 2] = (rhs[n - 2] - super[n - 2] * x[n - 1]) / diag[n - 2];
  for (int i = n - 3; i >= 0; --i)
    x[i] = (rhs[i] - super[i] * x[i + 1] - extra[i] * x[i + 2]) / diag[i];
  return x;
}

class RadialOperator {
 public:
  RadialOperator(const RadialGrid& grid, int N) : grid_(&grid), N_(N) {
    if (N != grid.dimension())
      throw std::invalid_argument("RadialOperator: N mismatch with grid");
    if (grid.interior_nodes() < 8)
      throw std::invalid_argument("RadialOperator: need M >= 8");
    const int M = grid.interior_nodes();
    const double h = grid.h();
    cond_.resize(M + 1);
    for (int i = 0; i <= M; ++i)
      cond_[i] = std::pow((i + 0.5) * h, N - 1) / h;

    sub_.assign(M + 1, 0.0);
    diag_.assign(M + 1, 0.0);
    super_.assign(M + 1, 0.0);
    diag_[0] = cond_[0] / grid.weight(0);
    super_[0] = -cond_[0] / grid.weight(0);
    for (int i = 1; i <= M; ++i) {
      const double w = grid.weight(i);
      sub_[i] = -cond_[i - 1] / w;
      super_[i] = -cond_[i] / w;
      diag_[i] = (cond_[i - 1] + cond_[i]) / w;
    }
    // row M couples to the Dirichlet node; super_[M] is kept for apply()
    // against stored boundary values but dropped in solves.
  }

  const RadialGrid& grid() const { return *grid_; }
  int dimension() const { return N_; }
  int dof_count() const { return grid_->interior_nodes() + 1; }

  double sub(int i) const { return sub_[i]; }
  double diag(int i) const { return diag_[i]; }
  double super(int i) const { return super_[i]; }

  // (A u)_i on DOF nodes i = 0..M; the output boundary entry is zero.
  RadialField apply(const RadialField& u) const {
    const int M = grid_->interior_nodes();
    RadialField out(*grid_);
    out[0] = diag_[0] * u[0] + super_[0] * u[1];
    for (int i = 1; i <= M; ++i)
      out[i] = sub_[i] * u[i - 1] + diag_[i] * u[i] + super_[i] * u[i + 1];
    return out;
  }

  // Solves A u = rhs on the DOF nodes with u(1) = 0; Thomas elimination
  // (stable without pivoting for this M-matrix).
  RadialField solve(const RadialField& rhs) const {
    const int M = grid_->interior_nodes();
    const int n = M + 1;
    std::vector<double> c(n), d(n);
    double beta = diag_[0];
    if (beta == 0.0) throw std::runtime_error("solve_linear: singular pivot");
    c[0] = super_[0] / beta;
    d[0] = rhs[0] / beta;
    for (int i = 1; i < n; ++i) {
      beta = diag_[i] - sub_[i] * c[i - 1];
      if (beta == 0.0) throw std::runtime_error("solve_linear: singular pivot");
      c[i] = (i < n - 1 ? super_[i] : 0.0) / beta;
      d[i] = (rhs[i] - sub_[i] * d[i - 1]) / beta;
    }
    RadialField u(*grid_);
    u[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = d[i] - c[i] * u[i + 1];
    u[M + 1] = 0.0;
    return u;
  }

  // Quadratic form Q(u,v) = \int_0^1 u' v' r^{N-1} dr (no surface factor);
  // exact discrete counterpart of the assembled matrix.
  double form(const RadialField& u, const RadialField& v) const {
    const int M = grid_->interior_nodes();
    double acc = 0.0;
    for (int i = 0; i <= M; ++i)
      acc += cond_[i] * (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
    return acc;
  }

  // Weighted nodal pairing over DOF nodes (no surface factor).
  double pairing(const RadialField& u, const RadialField& v) const {
    const int M = grid_->interior_nodes();
    double acc = 0.0;
    for (int i = 0; i <= M; ++i) acc += grid_->weight(i) * u[i] * v[i];
    return acc;
  }

  // Full H^1_0-type gradient seminorm \int_B |grad u|^2 dx.
  double dirichlet_energy(const RadialField& u) const {
    return sphere_area(N_) * form(u, u);
  }

  // Solves (A - diag(d)) x = rhs with Dirichlet closure, pivoted (the shift
  // may make the matrix indefinite).
  RadialField solve_shifted(const std::vector<double>& d,
                            const RadialField& rhs) const {
    const int M = grid_->interior_nodes();
    const int n = M + 1;
    std::vector<double> s(sub_.begin(), sub_.begin() + n);
    std::vector<double> di(diag_.begin(), diag_.begin() + n);
    std::vector<double> su(super_.begin(), super_.begin() + n);
    su[n - 1] = 0.0;
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
      di[i] -= d[i];
      b[i] = rhs[i];
    }
    auto x = solve_tridiagonal_pivot(s, di, su, b);
    RadialField out(*grid_);
    for (int i = 0; i < n; ++i) out[i] = x[i];
    out[M + 1] = 0.0;
    return out;
  }

 private:
  const RadialGrid* grid_;
  int N_;
  std::vector<double> cond_;
  std::vector<double> sub_, diag_, super_;
};

inline RadialOperator assemble_radial_operator(const RadialGrid& grid, int N) {
  return RadialOperator(grid, N);
}

inline RadialField solve_linear(const RadialOperator& op,
                                const RadialField& rhs) {
  return op.solve(rhs);
}

// ---------------------------------------------------------------------------
// Principal eigenpair of -Delta phi = lambda |x|^alpha phi (radial, Dirichlet)

struct EigenPair {
  double lambda_1_alpha = 0.0;
  RadialField phi;
};

inline EigenPair principal_eigenpair(const RadialOperator& op, double alpha,
                                     double tol = 1e-10, int max_iter = 5000) {
  if (tol <= 0.0) throw std::invalid_argument("principal_eigenpair: tol <= 0");
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  const double omega = sphere_area(g.dimension());

  auto weighted_mass = [&](const RadialField& u, const RadialField& v) {
    double acc = 0.0;
    for (int i = 0; i <= M; ++i)
      acc += g.weight(i) * std::pow(g.r(i), alpha) * u[i] * v[i];
    return omega * acc;
  };

  RadialField phi = RadialField::sample(g, [](double r) { return 1.0 - r * r; });
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    RadialField wphi(g);
    for (int i = 0; i <= M; ++i)
      wphi[i] = std::pow(g.r(i), alpha) * phi[i];
    RadialField next = op.solve(wphi);
    const double nrm = std::sqrt(weighted_mass(next, next));
    if (!(nrm > 0.0)) throw std::runtime_error("principal_eigenpair: breakdown");
    for (int i = 0; i <= M; ++i) next[i] /= nrm;
    const double lam = omega * op.form(next, next) / weighted_mass(next, next);
    const bool done = it > 0 && std::abs(lam - lambda) <= tol * std::abs(lam);
    lambda = lam;
    phi = next;
    if (done) {
      if (phi[0] < 0.0)
        for (int i = 0; i <= M; ++i) phi[i] = -phi[i];
      const double renorm = std::sqrt(weighted_mass(phi, phi));
      for (int i = 0; i <= M; ++i) phi[i] /= renorm;
      return EigenPair{lambda, phi};
    }
  }
  throw std::runtime_error("principal_eigenpair: no convergence within cap");
}

// ---------------------------------------------------------------------------
// Radial energy functional J(v) = 1/2 \int |grad v|^2
//                               - 1/(p+1) \int |x|^alpha |v+a|^{p+1}
// with a^{p-1} = lambda. The constant part of the potential (its value at
// v = 0) is integrated analytically, so the same number is shared bit-exactly
// by every symmetry class; the nodal quadrature only sees the v-dependent
// remainder, which vanishes on the Dirichlet boundary.

inline double energy_radial(const RadialField& v, const ProblemSpec& spec,
                            const RadialOperator& op) {
  if (spec.symmetry != Symmetry::Radial)
    throw std::invalid_argument("energy_radial: spec not radial");
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  const double a = spec.a;
  const double p = spec.p;
  const double omega = sphere_area(g.dimension());
  const double a_pow = std::pow(a, p + 1.0);
  double pot = 0.0;
  for (int i = 0; i <= M; ++i)
    pot += g.weight(i) * std::pow(g.r(i), spec.alpha) *
           (std::pow(std::abs(v[i] + a), p + 1.0) - a_pow);
  const double const_part =
      a_pow / (p + 1.0) * weighted_ball_volume(g.dimension(), spec.alpha);
  return omega * (0.5 * op.form(v, v) - pot / (p + 1.0)) - const_part;
}

// Strong-form residual (A v)_i - r_i^alpha |v_i+a|^{p-1}(v_i+a) on the DOF
// nodes; it is the gradient of energy_radial in the weighted nodal pairing
// scaled by omega_N.
inline RadialField gradient_radial(const RadialField& v,
                                   const ProblemSpec& spec,
                                   const RadialOperator& op) {
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  RadialField res = op.apply(v);
  for (int i = 0; i <= M; ++i)
    res[i] -= std::pow(g.r(i), spec.alpha) * signed_power(v[i] + spec.a, spec.p);
  res[M + 1] = 0.0;
  return res;
}

inline double residual_sup(const RadialField& res) { return res.sup_norm(); }

// Damped Newton refinement of a critical point of the radial functional.
// Returns true when the residual sup-norm reaches tol.
inline bool newton_refine_radial(RadialField& v, const ProblemSpec& spec,
                                 const RadialOperator& op, double tol,
                                 int max_iter = 60) {
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  double res_norm = residual_sup(gradient_radial(v, spec, op));
  for (int it = 0; it < max_iter; ++it) {
    if (res_norm <= tol) return true;
    RadialField res = gradient_radial(v, spec, op);
    std::vector<double> shift(M + 1);
    for (int i = 0; i <= M; ++i)
      shift[i] = std::pow(g.r(i), spec.alpha) * spec.p *
                 std::pow(std::abs(v[i] + spec.a), spec.p - 1.0);
    RadialField delta = op.solve_shifted(shift, res);
    double step = 1.0;
    for (int back = 0; back < 40; ++back) {
      RadialField trial = v - step * delta;
      const double trial_norm = residual_sup(gradient_radial(trial, spec, op));
      if (trial_norm < res_norm) {
        v = trial;
        res_norm = trial_norm;
        break;
      }
      step *= 0.5;
      if (back == 39) return false;
    }
  }
  return res_norm <= tol;
}

// ---------------------------------------------------------------------------
// Discrete minimization of the critical weighted Rayleigh quotient
//   R(v) = \int |grad v|^2 / ( \int |x|^alpha |v|^{2*_alpha} )^{2/2*_alpha},
// the second, independent route to S_alpha (the first is quadrature of the
// closed-form extremal in closed_forms.hpp).

inline double rayleigh_quotient_critical(const RadialOperator& op, double alpha,
                                         const RadialField& v) {
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  const double q = two_star_alpha(g.dimension(), alpha);
  const double omega = sphere_area(g.dimension());
  double den = 0.0;
  for (int i = 0; i <= M; ++i)
    den += g.weight(i) * std::pow(g.r(i), alpha) * std::pow(std::abs(v[i]), q);
  den = std::pow(omega * den, 2.0 / q);
  return omega * op.form(v, v) / den;
}

inline double rayleigh_minimize_critical(const RadialOperator& op, double alpha,
                                         int max_iter = 4000,
                                         double rel_tol = 1e-11) {
  const RadialGrid& g = op.grid();
  const int M = g.interior_nodes();
  const double q = two_star_alpha(g.dimension(), alpha);

  // Start from a concentrated truncated extremal; the minimizing sequence
  // concentrates and the grid picks its own optimal scale.
  RadialField v = RadialField::sample(g, [&](double r) {
    return (1.0 - r * r) * bubble_profile(r / 0.15, g.dimension(), alpha);
  });
  double R = rayleigh_quotient_critical(op, alpha, v);
  double tau = 0.5;
  for (int it = 0; it < max_iter; ++it) {
    // Preconditioned gradient of R at the current scale-invariant iterate.
    RadialField res(g);
    const double omega = sphere_area(g.dimension());
    double den = 0.0;
    for (int i = 0; i <= M; ++i)
      den += g.weight(i) * std::pow(g.r(i), alpha) * std::pow(std::abs(v[i]), q);
    const double mu = op.form(v, v) / den;  // Lagrange multiplier scale
    (void)omega;
    RadialField av = op.apply(v);
    for (int i = 0; i <= M; ++i)
      res[i] = av[i] - mu * std::pow(g.r(i), alpha) * signed_power(v[i], q - 1.0);
    RadialField dir = op.solve(res);
    bool improved = false;
    for (int back = 0; back < 30; ++back) {
      RadialField trial = v - tau * dir;
      const double Rt = rayleigh_quotient_critical(op, alpha, trial);
      if (Rt < R) {
        const double drop = (R - Rt) / R;
        v = trial;
        R = Rt;
        improved = true;
        if (back == 0) tau = std::min(1.0, tau * 1.3);
        if (drop < rel_tol && it > 50) return R;
        break;
      }
      tau *= 0.5;
    }
    if (!improved) return R;
  }
  return R;
}

}  // namespace henonlab
