#pragma once

#include <string>

#include "henonlab/grid.hpp"
#include "henonlab/problem.hpp"

namespace henonlab {

enum class SolutionClass { Minimal, LocalMin, MountainPass };

inline std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Minimal: return "minimal";
    case SolutionClass::LocalMin: return "local-min";
    case SolutionClass::MountainPass: return "mountain-pass";
  }
  return "?";
}

// A converged solution with its energy, residual certificate and provenance.
template <class FieldT>
struct SolutionRecordT {
  ProblemSpec spec;
  FieldT field;
  double energy = 0.0;
  double residual_sup = 0.0;
  SolutionClass classification = SolutionClass::Minimal;
  int iterations = 0;
};

using SolutionRecord = SolutionRecordT<RadialField>;

}  // namespace henonlab
