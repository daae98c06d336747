#pragma once

// 1-D quadrature helpers: fixed Gauss-Legendre panels, geometric panel
// subdivision for integrands with a sharp interior scale, and the algebraic
// substitution s = r/(1+r) for integrals over [0, inf).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace henonlab {

// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussRule8 {
  static constexpr std::array<double, 8> nodes = {
      -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
      -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
      0.7966664774136267,  0.9602898564975362};
  static constexpr std::array<double, 8> weights = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
      0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
};

template <class F>
double gauss_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t k = 0; k < GaussRule8::nodes.size(); ++k)
    acc += GaussRule8::weights[k] * f(mid + hal * GaussRule8::nodes[k]);
  return acc * hal;
}

// Composite Gauss over [a, b] with n equal panels.
template <class F>
double gauss_composite(F&& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("gauss_composite: panels < 1");
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i)
    acc += gauss_panel(f, a + i * h, a + (i + 1) * h);
  return acc;
}

// Composite Gauss over [r0, b] on geometrically graded panels, plus one
// closing panel [0, r0]. Resolves integrands whose active scale may sit
// anywhere between r0 and b (bubble profiles with small concentration ε).
template <class F>
double gauss_graded(F&& f, double b, double r0 = 1e-8, double ratio = 1.07) {
  double acc = gauss_panel(f, 0.0, r0);
  double lo = r0;
  while (lo < b) {
    double hi = std::min(lo * ratio, b);
    if (hi - lo < 1e-300) break;
    acc += gauss_panel(f, lo, hi);
    lo = hi;
  }
  return acc;
}

// Integral of g over [0, inf) via the substitution s = r/(1+r),
// r = s/(1-s), dr = ds/(1-s)^2, with composite Gauss on [0, 1).
template <class F>
double integral_halfline(F&& g, int panels = 512) {
  auto sub = [&](double s) {
    const double om = 1.0 - s;
    const double r = s / om;
    return g(r) / (om * om);
  };
  // The last panel edge stops short of s = 1; the integrand decays
  // algebraically so the truncated mass is below double precision for the
  // profiles used here (tail exponent >= 2).
  return gauss_composite(sub, 0.0, 1.0 - 1e-12, panels);
}

}  // namespace henonlab
