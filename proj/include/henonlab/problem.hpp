#pragma once

// Problem definitions shared by every solver: the (N, alpha, p, lambda,
// symmetry) tuple, its validation against the admissible exponent windows,
// and JSON round-tripping.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "henonlab/closed_forms.hpp"

namespace henonlab {

enum class Symmetry { Radial, Partial, Axial };

inline std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::Radial: return "radial";
    case Symmetry::Partial: return "partial";
    case Symmetry::Axial: return "axial";
  }
  return "?";
}

inline Symmetry symmetry_from_string(const std::string& s) {
  if (s == "radial") return Symmetry::Radial;
  if (s == "partial") return Symmetry::Partial;
  if (s == "axial") return Symmetry::Axial;
  throw std::invalid_argument("unknown symmetry: " + s);
}

// a^{p-1} = lambda; a is the boundary value of the equivalent inhomogeneous
// problem.
inline double a_from_lambda(double lambda, double p) {
  if (lambda < 0.0) throw std::invalid_argument("a_from_lambda: lambda < 0");
  if (p <= 1.0) throw std::invalid_argument("a_from_lambda: p <= 1");
  return std::pow(lambda, 1.0 / (p - 1.0));
}

struct ProblemSpec {
  int N = 3;
  double alpha = 0.0;
  double p = 3.0;
  double lambda = 0.0;
  Symmetry symmetry = Symmetry::Radial;
  std::optional<int> l;  // O(l) x O(N-l) split, Partial only

  // Derived quantities, attached by validate().
  double a = 0.0;
  double two_star = 0.0;
  double two_star_alpha = 0.0;
  std::optional<double> two_l;
  bool radial_subcritical = false;    // p <= 2*_alpha - 1 (N >= 3)
  bool partial_alpha_admissible = false;  // conservative alpha_0 flag

  bool validated = false;

  ProblemSpec validate() const;
};

// Displayed lower bound for alpha in the partially symmetric regularity
// window; the sharp alpha_0(N, l, p) is not explicit, so this conservative
// max{...} is exposed as a flag rather than enforced.
inline double partial_alpha_floor(int N) {
  return std::max((N + 2.0) * (N + 2.0) / (2.0 * (N - 2.0)),
                  ((N - 2.0) * (N - 2.0) + 5.0) / (N - 3.0));
}

inline ProblemSpec ProblemSpec::validate() const {
  ProblemSpec s = *this;
  if (s.N < 1) throw std::invalid_argument("spec: N < 1");
  if (s.alpha < 0.0) throw std::invalid_argument("spec: alpha < 0");
  if (s.p <= 1.0) throw std::invalid_argument("spec: p must exceed 1");
  if (s.lambda < 0.0) throw std::invalid_argument("spec: lambda < 0");

  s.a = a_from_lambda(s.lambda, s.p);
  s.two_star = henonlab::two_star(s.N);
  s.two_star_alpha = henonlab::two_star_alpha(s.N, s.alpha);

  switch (s.symmetry) {
    case Symmetry::Radial:
      if (s.l) throw std::invalid_argument("spec: l given for radial symmetry");
      if (s.N >= 3) {
        s.radial_subcritical = s.p <= s.two_star_alpha - 1.0;
        if (!s.radial_subcritical)
          throw std::invalid_argument(
              "spec: p beyond 2*_alpha - 1 (supercritical for the radial class)");
      } else {
        s.radial_subcritical = true;
      }
      break;
    case Symmetry::Partial: {
      if (!s.l) throw std::invalid_argument("spec: partial symmetry needs l");
      const int l = *s.l;
      if (s.N < 4 || !(2 <= s.N - l && s.N - l <= l))
        throw std::invalid_argument("spec: partial symmetry needs N >= 4 and 2 <= N-l <= l");
      s.two_l = two_l_exponent(l);
      if (!(s.p < *s.two_l - 1.0))
        throw std::invalid_argument("spec: p beyond 2_l - 1 for the partial class");
      s.partial_alpha_admissible = s.alpha > partial_alpha_floor(s.N);
      break;
    }
    case Symmetry::Axial:
      if (s.l) throw std::invalid_argument("spec: l given for axial symmetry");
      if (s.N < 2) throw std::invalid_argument("spec: axial symmetry needs N >= 2");
      if (s.N >= 3 && !(s.p < s.two_star - 1.0))
        throw std::invalid_argument("spec: p beyond 2* - 1 for the axial class");
      break;
  }
  s.validated = true;
  return s;
}

inline void to_json(nlohmann::json& j, const ProblemSpec& s) {
  j = nlohmann::json{{"N", s.N},
                     {"alpha", s.alpha},
                     {"p", s.p},
                     {"lambda", s.lambda},
                     {"symmetry", to_string(s.symmetry)}};
  if (s.l) j["l"] = *s.l;
}

inline void from_json(const nlohmann::json& j, ProblemSpec& s) {
  s = ProblemSpec{};
  j.at("N").get_to(s.N);
  j.at("alpha").get_to(s.alpha);
  j.at("p").get_to(s.p);
  j.at("lambda").get_to(s.lambda);
  s.symmetry = symmetry_from_string(j.at("symmetry").get<std::string>());
  if (j.contains("l")) s.l = j.at("l").get<int>();
}

}  // namespace henonlab
