#pragma once

// 2-D discretizations of the symmetry classes that reduce the ball problem
// to two variables:
//   - axial / Schwarz-foliated: (r, theta) on [0,1] x [0,pi], measure
//     r^{N-1} sin^{N-2}(theta), surface constant |S^{N-2}|;
//   - partially symmetric O(l) x O(N-l): polar coordinates on the quarter
//     disk, (rho, phi) on [0,1] x [0,pi/2], measure
//     rho^{N-1} cos^{l-1}(phi) sin^{N-l-1}(phi), constant |S^{l-1}||S^{N-l-1}|.
// Both share one tensor grid: radial weights/conductances identical to the
// 1-D radial module (so radial profiles reproduce radial energies and
// residuals to roundoff), angular weights integrated per cell by Gauss
// panels, a single collapsed center DOF, Dirichlet at r = 1, and natural
// (reflection) closures at the angular ends where the weight vanishes.
// The assembled form is a symmetric M-matrix, so the discrete comparison
// principle carries over.

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "henonlab/grid.hpp"
#include "henonlab/problem.hpp"
#include "henonlab/quadrature.hpp"
#include "henonlab/record.hpp"

namespace henonlab {

enum class AngularClass { Axial, Partial };

class PolarGrid2D {
 public:
  // Axial grid.
  static PolarGrid2D axial(int Mr, int Mtheta, int N) {
    if (N < 2) throw std::invalid_argument("axial grid: N < 2");
    return PolarGrid2D(Mr, Mtheta, N, M_PI, 0, N - 2, sphere_area(N - 1),
                       AngularClass::Axial, 0);
  }

  // Quarter-disk grid for the O(l) x O(N-l) class.
  static PolarGrid2D quarter(int Mrho, int Mphi, int N, int l) {
    if (!(N >= 4 && 2 <= N - l && N - l <= l))
      throw std::invalid_argument("quarter grid: need N >= 4, 2 <= N-l <= l");
    return PolarGrid2D(Mrho, Mphi, N, 0.5 * M_PI, l - 1, N - l - 1,
                       sphere_area(l) * sphere_area(N - l),
                       AngularClass::Partial, l);
  }

  int radial_nodes() const { return Mr_; }
  int angular_intervals() const { return Mt_; }
  int dimension() const { return N_; }
  AngularClass angular_class() const { return class_; }
  int l() const { return l_; }
  double hr() const { return radial_.h(); }
  double ht() const { return ht_; }
  double r(int i) const { return radial_.r(i); }
  double theta(int j) const { return j * ht_; }
  double surface_constant() const { return surface_; }
  const RadialGrid& radial() const { return radial_; }

  // DOF layout: ring nodes (i = 1..Mr, j = 0..Mt), then the center.
  int index(int i, int j) const { return (i - 1) * (Mt_ + 1) + j; }
  int center_index() const { return Mr_ * (Mt_ + 1); }
  int dof_count() const { return Mr_ * (Mt_ + 1) + 1; }

  double radial_weight(int i) const { return radial_.weight(i); }
  double angular_weight(int j) const { return wt_[j]; }
  double angular_total() const { return wt_total_; }
  double angular_edge(int j) const { return ct_[j]; }  // \int over theta edge
  double node_weight(int i, int j) const { return radial_.weight(i) * wt_[j]; }
  double center_weight() const { return radial_.weight(0) * wt_total_; }

  // Full weighted measure: surface * sum(node weights) == \int_B dx-ish.
  double measure_check() const {
    double acc = center_weight();
    for (int i = 1; i <= Mr_; ++i)
      for (int j = 0; j <= Mt_; ++j) acc += node_weight(i, j);
    // Dirichlet ring half-cells are excluded; callers compare with the
    // analytic ball volume minus an O(h) shell when needed.
    return surface_ * acc;
  }

 private:
  PolarGrid2D(int Mr, int Mt, int N, double theta_max, int cos_pow,
              int sin_pow, double surface, AngularClass cls, int l)
      : Mr_(Mr),
        Mt_(Mt),
        N_(N),
        l_(l),
        class_(cls),
        theta_max_(theta_max),
        surface_(surface),
        radial_(Mr, N),
        ht_(theta_max / Mt) {
    if (Mr < 8) throw std::invalid_argument("PolarGrid2D: Mr < 8");
    if (Mt < 8) throw std::invalid_argument("PolarGrid2D: Mt < 8");
    auto gfun = [&](double t) {
      return std::pow(std::cos(t), cos_pow) * std::pow(std::sin(t), sin_pow);
    };
    wt_.resize(Mt + 1);
    for (int j = 0; j <= Mt; ++j) {
      const double lo = std::max(0.0, (j - 0.5) * ht_);
      const double hi = std::min(theta_max, (j + 0.5) * ht_);
      wt_[j] = gauss_composite(gfun, lo, hi, 2);
    }
    ct_.resize(Mt);
    for (int j = 0; j < Mt; ++j)
      ct_[j] = gauss_composite(gfun, j * ht_, (j + 1) * ht_, 2);
    wt_total_ = 0.0;
    for (double w : wt_) wt_total_ += w;
  }

  int Mr_, Mt_, N_, l_;
  AngularClass class_;
  double theta_max_;
  double surface_;
  RadialGrid radial_;
  double ht_;
  std::vector<double> wt_, ct_;
  double wt_total_ = 0.0;
};

// Node values over a PolarGrid2D (DOFs only; the Dirichlet ring is 0).
class Field2D {
 public:
  Field2D() : grid_(nullptr) {}
  explicit Field2D(const PolarGrid2D& g)
      : grid_(&g), values_(g.dof_count(), 0.0) {}

  const PolarGrid2D& grid() const { return *grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int k) const { return values_[k]; }
  double& operator[](int k) { return values_[k]; }
  double at(int i, int j) const { return values_[grid_->index(i, j)]; }
  double& at(int i, int j) { return values_[grid_->index(i, j)]; }
  double center() const { return values_[grid_->center_index()]; }
  double& center() { return values_[grid_->center_index()]; }
  const std::vector<double>& values() const { return values_; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  template <class F>
  static Field2D sample(const PolarGrid2D& g, F&& f) {
    Field2D out(g);
    for (int i = 1; i <= g.radial_nodes(); ++i)
      for (int j = 0; j <= g.angular_intervals(); ++j)
        out.at(i, j) = f(g.r(i), g.theta(j));
    out.center() = f(0.0, 0.0);
    return out;
  }

  static Field2D embed_radial(const PolarGrid2D& g, const RadialField& u) {
    if (u.grid().interior_nodes() != g.radial_nodes() ||
        u.grid().dimension() != g.dimension())
      throw std::invalid_argument("embed_radial: incompatible grids");
    Field2D out(g);
    for (int i = 1; i <= g.radial_nodes(); ++i)
      for (int j = 0; j <= g.angular_intervals(); ++j) out.at(i, j) = u[i];
    out.center() = u[0];
    return out;
  }

  // Angular-average radial profile and the sup deviation from it; the
  // deviation is the non-radiality certificate for symmetry breaking.
  double nonradiality() const {
    const auto& g = *grid_;
    double dev = 0.0;
    for (int i = 1; i <= g.radial_nodes(); ++i) {
      double mean = 0.0;
      for (int j = 0; j <= g.angular_intervals(); ++j)
        mean += g.angular_weight(j) * at(i, j);
      mean /= g.angular_total();
      for (int j = 0; j <= g.angular_intervals(); ++j)
        dev = std::max(dev, std::abs(at(i, j) - mean));
    }
    return dev;
  }

 private:
  const PolarGrid2D* grid_;
  std::vector<double> values_;
};

inline Field2D operator*(double s, const Field2D& f) {
  Field2D out = f;
  for (int k = 0; k < out.size(); ++k) out[k] *= s;
  return out;
}
inline Field2D operator+(const Field2D& a, const Field2D& b) {
  Field2D out = a;
  for (int k = 0; k < out.size(); ++k) out[k] += b[k];
  return out;
}
inline Field2D operator-(const Field2D& a, const Field2D& b) {
  Field2D out = a;
  for (int k = 0; k < out.size(); ++k) out[k] -= b[k];
  return out;
}

class PolarOperator2D {
 public:
  explicit PolarOperator2D(const PolarGrid2D& grid) : grid_(&grid) {
    const int Mr = grid.radial_nodes();
    const int Mt = grid.angular_intervals();
    const int n = grid.dof_count();
    const double hr = grid.hr();
    const double ht = grid.ht();
    const int N = grid.dimension();

    weights_.resize(n);
    for (int i = 1; i <= Mr; ++i)
      for (int j = 0; j <= Mt; ++j)
        weights_[grid.index(i, j)] = grid.node_weight(i, j);
    weights_[grid.center_index()] = grid.center_weight();

    auto gcond = [&](int i) { return std::pow((i + 0.5) * hr, N - 1) / hr; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n);
    auto add_edge = [&](int a, int b, double c) {
      trip.emplace_back(a, a, c);
      trip.emplace_back(b, b, c);
      trip.emplace_back(a, b, -c);
      trip.emplace_back(b, a, -c);
    };
    // Radial edges (center <-> first ring <-> ... <-> Dirichlet).
    for (int j = 0; j <= Mt; ++j) {
      const double wt = grid.angular_weight(j);
      add_edge(grid.center_index(), grid.index(1, j), wt * gcond(0));
      for (int i = 1; i < Mr; ++i)
        add_edge(grid.index(i, j), grid.index(i + 1, j), wt * gcond(i));
      // Dirichlet edge contributes to the diagonal only.
      trip.emplace_back(grid.index(Mr, j), grid.index(Mr, j), wt * gcond(Mr));
    }
    // Angular edges with the 1/r^2 metric factor.
    for (int i = 1; i <= Mr; ++i) {
      const double wr2 = std::pow(grid.r(i), N - 3) * hr;
      for (int j = 0; j < Mt; ++j)
        add_edge(grid.index(i, j), grid.index(i, j + 1),
                 wr2 * grid.angular_edge(j) / (ht * ht));
    }
    S_.resize(n, n);
    S_.setFromTriplets(trip.begin(), trip.end());
    S_.makeCompressed();
    llt_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    llt_->compute(S_);
    if (llt_->info() != Eigen::Success)
      throw std::runtime_error("PolarOperator2D: factorization failed");
  }

  const PolarGrid2D& grid() const { return *grid_; }
  double weight(int k) const { return weights_[k]; }

  // Quadratic (Dirichlet) form without the surface constant.
  double form(const Field2D& u, const Field2D& v) const {
    Eigen::Map<const Eigen::VectorXd> uv(u.values().data(), u.size());
    Eigen::Map<const Eigen::VectorXd> vv(v.values().data(), v.size());
    return uv.dot(S_ * vv);
  }

  double pairing(const Field2D& u, const Field2D& v) const {
    double acc = 0.0;
    for (int k = 0; k < u.size(); ++k) acc += weights_[k] * u[k] * v[k];
    return acc;
  }

  // (A u)_k = (S u)_k / w_k, the strong-form operator rows.
  Field2D apply(const Field2D& u) const {
    Eigen::Map<const Eigen::VectorXd> uv(u.values().data(), u.size());
    Eigen::VectorXd su = S_ * uv;
    Field2D out(*grid_);
    for (int k = 0; k < out.size(); ++k) out[k] = su[k] / weights_[k];
    return out;
  }

  // Solves A u = rhs (i.e. S u = W rhs); SPD Cholesky, factored once.
  Field2D solve(const Field2D& rhs) const {
    Eigen::VectorXd b(rhs.size());
    for (int k = 0; k < rhs.size(); ++k) b[k] = weights_[k] * rhs[k];
    Eigen::VectorXd x = llt_->solve(b);
    Field2D out(*grid_);
    for (int k = 0; k < out.size(); ++k) out[k] = x[k];
    return out;
  }

  // Solves (A - diag(d)) x = rhs, pivoted sparse LU (indefinite shifts).
  Field2D solve_shifted(const std::vector<double>& d, const Field2D& rhs) const {
    Eigen::SparseMatrix<double> M = S_;
    for (int k = 0; k < static_cast<int>(d.size()); ++k)
      M.coeffRef(k, k) -= weights_[k] * d[k];
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("solve_shifted: LU failed");
    Eigen::VectorXd b(rhs.size());
    for (int k = 0; k < rhs.size(); ++k) b[k] = weights_[k] * rhs[k];
    Eigen::VectorXd x = lu.solve(b);
    Field2D out(*grid_);
    for (int k = 0; k < out.size(); ++k) out[k] = x[k];
    return out;
  }

 private:
  const PolarGrid2D* grid_;
  Eigen::SparseMatrix<double> S_;
  std::vector<double> weights_;
  std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
};

inline PolarOperator2D assemble_axial_operator(const PolarGrid2D& grid, int N) {
  if (grid.angular_class() != AngularClass::Axial || grid.dimension() != N)
    throw std::invalid_argument("assemble_axial_operator: wrong grid");
  return PolarOperator2D(grid);
}

inline PolarOperator2D assemble_quarter_operator(const PolarGrid2D& grid, int l,
                                                 int N) {
  if (grid.angular_class() != AngularClass::Partial || grid.dimension() != N ||
      grid.l() != l)
    throw std::invalid_argument("assemble_quarter_operator: wrong grid");
  return PolarOperator2D(grid);
}

// ---------------------------------------------------------------------------
// Energy, gradient, Newton for the 2-D classes (same renormalized potential
// as the radial module, so the v = 0 value is shared bit-exactly).

inline void check_class(const ProblemSpec& spec, const PolarGrid2D& g) {
  if (spec.symmetry == Symmetry::Partial) {
    if (g.angular_class() != AngularClass::Partial || !spec.l ||
        g.l() != *spec.l)
      throw std::invalid_argument("spec/grid symmetry class mismatch");
  } else if (spec.symmetry == Symmetry::Axial) {
    if (g.angular_class() != AngularClass::Axial)
      throw std::invalid_argument("spec/grid symmetry class mismatch");
  } else {
    throw std::invalid_argument("2-D energy needs a partial or axial spec");
  }
}

inline double energy_2d(const Field2D& v, const ProblemSpec& spec,
                        const PolarOperator2D& op) {
  const PolarGrid2D& g = op.grid();
  check_class(spec, g);
  const double a = spec.a;
  const double p = spec.p;
  const double a_pow = std::pow(a, p + 1.0);
  double pot = 0.0;
  for (int i = 1; i <= g.radial_nodes(); ++i) {
    const double ralpha = std::pow(g.r(i), spec.alpha);
    for (int j = 0; j <= g.angular_intervals(); ++j)
      pot += g.node_weight(i, j) * ralpha *
             (std::pow(std::abs(v.at(i, j) + a), p + 1.0) - a_pow);
  }
  pot += g.center_weight() * std::pow(0.0, spec.alpha) *
         (std::pow(std::abs(v.center() + a), p + 1.0) - a_pow);
  const double const_part =
      a_pow / (p + 1.0) * weighted_ball_volume(g.dimension(), spec.alpha);
  return g.surface_constant() * (0.5 * op.form(v, v) - pot / (p + 1.0)) -
         const_part;
}

inline Field2D gradient_2d(const Field2D& v, const ProblemSpec& spec,
                           const PolarOperator2D& op) {
  const PolarGrid2D& g = op.grid();
  Field2D res = op.apply(v);
  for (int i = 1; i <= g.radial_nodes(); ++i) {
    const double ralpha = std::pow(g.r(i), spec.alpha);
    for (int j = 0; j <= g.angular_intervals(); ++j)
      res.at(i, j) -= ralpha * signed_power(v.at(i, j) + spec.a, spec.p);
  }
  res.center() -=
      std::pow(0.0, spec.alpha) * signed_power(v.center() + spec.a, spec.p);
  return res;
}

inline bool newton_refine_2d(Field2D& v, const ProblemSpec& spec,
                             const PolarOperator2D& op, double tol,
                             int max_iter = 40) {
  const PolarGrid2D& g = op.grid();
  double res_norm = gradient_2d(v, spec, op).sup_norm();
  for (int it = 0; it < max_iter; ++it) {
    if (res_norm <= tol) return true;
    Field2D res = gradient_2d(v, spec, op);
    std::vector<double> shift(v.size());
    for (int i = 1; i <= g.radial_nodes(); ++i)
      for (int j = 0; j <= g.angular_intervals(); ++j)
        shift[g.index(i, j)] = std::pow(g.r(i), spec.alpha) * spec.p *
                               std::pow(std::abs(v.at(i, j) + spec.a),
                                        spec.p - 1.0);
    shift[g.center_index()] = std::pow(0.0, spec.alpha) * spec.p *
                              std::pow(std::abs(v.center() + spec.a),
                                       spec.p - 1.0);
    Field2D delta = op.solve_shifted(shift, res);
    double step = 1.0;
    bool moved = false;
    for (int back = 0; back < 40; ++back) {
      Field2D trial = v - step * delta;
      const double trial_norm = gradient_2d(trial, spec, op).sup_norm();
      if (trial_norm < res_norm) {
        v = trial;
        res_norm = trial_norm;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return false;
  }
  return res_norm <= tol;
}

// Per-class public energy names.
inline double energy_partial(const Field2D& v, const ProblemSpec& spec,
                             const PolarOperator2D& op) {
  if (spec.symmetry != Symmetry::Partial)
    throw std::invalid_argument("energy_partial: spec not partial");
  return energy_2d(v, spec, op);
}

inline double energy_axial(const Field2D& v, const ProblemSpec& spec,
                           const PolarOperator2D& op) {
  if (spec.symmetry != Symmetry::Axial)
    throw std::invalid_argument("energy_axial: spec not axial");
  return energy_2d(v, spec, op);
}

// Smallest eigenvalue of the weighted pencil S phi = lambda W r^alpha phi
// (inverse power iteration; used by subspace-inclusion checks).
inline double principal_eigenvalue_2d(const PolarOperator2D& op, double alpha,
                                      double tol = 1e-10, int cap = 5000) {
  const PolarGrid2D& g = op.grid();
  Field2D phi = Field2D::sample(
      g, [](double r, double) { return 1.0 - r * r; });
  auto mass = [&](const Field2D& u, const Field2D& w) {
    double acc = 0.0;
    for (int i = 1; i <= g.radial_nodes(); ++i) {
      const double ra = std::pow(g.r(i), alpha);
      for (int j = 0; j <= g.angular_intervals(); ++j)
        acc += g.node_weight(i, j) * ra * u.at(i, j) * w.at(i, j);
    }
    acc += g.center_weight() * std::pow(0.0, alpha) * u.center() * w.center();
    return acc;
  };
  double lambda = 0.0;
  for (int it = 0; it < cap; ++it) {
    Field2D wphi(g);
    for (int i = 1; i <= g.radial_nodes(); ++i) {
      const double ra = std::pow(g.r(i), alpha);
      for (int j = 0; j <= g.angular_intervals(); ++j)
        wphi.at(i, j) = ra * phi.at(i, j);
    }
    wphi.center() = std::pow(0.0, alpha) * phi.center();
    Field2D next = op.solve(wphi);
    const double nrm = std::sqrt(mass(next, next));
    for (int k = 0; k < next.size(); ++k) next[k] /= nrm;
    const double lam = op.form(next, next) / mass(next, next);
    const bool done = it > 0 && std::abs(lam - lambda) <= tol * std::abs(lam);
    lambda = lam;
    phi = next;
    if (done) return lambda;
  }
  throw std::runtime_error("principal_eigenvalue_2d: no convergence");
}

// ---------------------------------------------------------------------------
// Mountain-pass functional handle over a 2-D class.

struct Polar2DMPProblem {
  using Field = Field2D;
  const PolarOperator2D* op;
  ProblemSpec spec;

  struct Descent {
    Field dir;
    double slope;
    double res_sup;
  };

  double energy(const Field& v) const { return energy_2d(v, spec, *op); }

  Descent descent(const Field& v) const {
    Field2D res = gradient_2d(v, spec, *op);
    Field2D dir = op->solve(res);
    return {dir, op->grid().surface_constant() * op->pairing(res, dir),
            res.sup_norm()};
  }

  double residual_sup(const Field& v) const {
    return gradient_2d(v, spec, *op).sup_norm();
  }

  double path_dist(const Field& a, const Field& b) const {
    Field2D d = a - b;
    return std::sqrt(op->form(d, d));
  }

  bool newton_polish(Field& v, double tol, int iters) const {
    return newton_refine_2d(v, spec, *op, tol, iters);
  }
};

using SolutionRecord2D = SolutionRecordT<Field2D>;

}  // namespace henonlab
