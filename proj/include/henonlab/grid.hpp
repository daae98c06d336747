#pragma once

// Uniform radial grid on [0, 1] and node-sampled fields, with the weighted
// quadrature (surface factor omega_N r^{N-1}) shared by every radial solver.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace henonlab {

// Surface area of the unit sphere S^{n-1} in R^n; sphere_area(1) = 2,
// sphere_area(2) = 2*pi, sphere_area(3) = 4*pi.
inline double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n < 1");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

// Volume of the weighted ball: \int_B |x|^alpha dx = omega_N / (N + alpha).
inline double weighted_ball_volume(int N, double alpha) {
  return sphere_area(N) / (N + alpha);
}

// Nodes r_i = i*h, i = 0..M+1, h = 1/(M+1). r_0 = 0 is the center,
// r_{M+1} = 1 carries the Dirichlet condition; degrees of freedom are
// i = 0..M.
class RadialGrid {
 public:
  RadialGrid(int interior_nodes, int dimension)
      : M_(interior_nodes), N_(dimension), h_(1.0 / (interior_nodes + 1)) {
    if (interior_nodes < 2)
      throw std::invalid_argument("RadialGrid: need at least 2 interior nodes");
    if (dimension < 1) throw std::invalid_argument("RadialGrid: N < 1");
    weights_.resize(M_ + 2);
    // Half-cell volume at the center (exact integral of r^{N-1} over
    // [0, h/2]); this is the unique node-0 weight that makes the assembled
    // radial operator self-adjoint in the nodal pairing.
    weights_[0] = std::pow(0.5 * h_, N_) / N_;
    // Interior weights are the weighted trapezoid values h r_i^{N-1} plus an
    // O(h^2) correction chosen so that the conservative flux stencil divided
    // by these weights reproduces -Delta exactly on quadratics:
    //   w_i = [2 r_i h (g_i - g_{i-1}) + h^2 (g_i + g_{i-1})] / (2N),
    // with edge conductances g_i = r_{i+1/2}^{N-1} / h. For N = 1, 2 this
    // collapses to the plain trapezoid weight.
    auto g = [&](int i) { return std::pow((i + 0.5) * h_, N_ - 1) / h_; };
    for (int i = 1; i <= M_; ++i)
      weights_[i] = (2.0 * r(i) * h_ * (g(i) - g(i - 1)) +
                     h_ * h_ * (g(i) + g(i - 1))) /
                    (2.0 * N_);
    weights_[M_ + 1] = 0.5 * h_;  // trapezoid half-weight, r = 1
  }

  int interior_nodes() const { return M_; }
  int dimension() const { return N_; }
  double h() const { return h_; }
  int node_count() const { return M_ + 2; }
  double r(int i) const { return i * h_; }

  // Nodal quadrature weight for \int_0^1 f(r) r^{N-1} dr (no surface factor).
  double weight(int i) const { return weights_[i]; }

  // \int_B f(|x|) dx ~= omega_N * sum w_i f_i over all nodes.
  double integrate(const std::vector<double>& nodal) const {
    double acc = 0.0;
    for (int i = 0; i <= M_ + 1; ++i) acc += weights_[i] * nodal[i];
    return sphere_area(N_) * acc;
  }

  bool same_as(const RadialGrid& o) const {
    return M_ == o.M_ && N_ == o.N_;
  }

 private:
  int M_;
  int N_;
  double h_;
  std::vector<double> weights_;
};

// Node values over a RadialGrid, including the Dirichlet node at r = 1.
class RadialField {
 public:
  RadialField() : grid_(nullptr) {}  // empty placeholder, assign before use

  explicit RadialField(const RadialGrid& grid)
      : grid_(&grid), values_(grid.node_count(), 0.0) {}

  RadialField(const RadialGrid& grid, std::vector<double> values)
      : grid_(&grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid.node_count())
      throw std::invalid_argument("RadialField: value count != node count");
  }

  template <class F>
  static RadialField sample(const RadialGrid& grid, F&& f) {
    RadialField out(grid);
    for (int i = 0; i < grid.node_count(); ++i) out.values_[i] = f(grid.r(i));
    return out;
  }

  const RadialGrid& grid() const { return *grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double boundary_value() const { return values_.back(); }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  // Center value by quadratic extrapolation from the first three interior
  // nodes (radial regularity u'(0) = 0 makes the even fit appropriate).
  double extrapolate_center() const {
    // Fit u(r) = c0 + c2 r^2 through (r1,u1), (r2,u2); average with node 0.
    const double u1 = values_[1], u2 = values_[2];
    const double r1 = grid_->r(1), r2 = grid_->r(2);
    const double c2 = (u2 - u1) / (r2 * r2 - r1 * r1);
    return u1 - c2 * r1 * r1;
  }

  // Weighted integral \int_B f(u(|x|), |x|) dx with nodal evaluation.
  template <class F>
  double integrate(F&& f) const {
    std::vector<double> nodal(values_.size());
    for (int i = 0; i < size(); ++i) nodal[i] = f(values_[i], grid_->r(i));
    return grid_->integrate(nodal);
  }

 private:
  const RadialGrid* grid_;
  std::vector<double> values_;
};

inline RadialField operator*(double s, const RadialField& f) {
  RadialField out = f;
  for (double& v : out.values()) v *= s;
  return out;
}

inline RadialField operator+(const RadialField& a, const RadialField& b) {
  RadialField out = a;
  for (int i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

inline RadialField operator-(const RadialField& a, const RadialField& b) {
  RadialField out = a;
  for (int i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

}  // namespace henonlab
