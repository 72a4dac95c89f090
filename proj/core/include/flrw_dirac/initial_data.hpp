#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "flrw_dirac/field.hpp"

namespace flrw {

enum class InitialFamily {
  gaussian,        // v * A exp(-|x-c|^2/w^2)
  random_gaussian, // as gaussian with v drawn from the seed
  plane_wave,      // gaussian envelope times exp(i k x1)
  lm_bump,         // (g, 0, g, 0) with a gaussian g
  majorana_bump,   // (0, i g, g, 0) with a gaussian g
  compact_bump     // v * A exp(1 - 1/(1 - r^2/R^2)) inside r < R
};

std::string to_string(InitialFamily f);
InitialFamily initial_family_from_string(const std::string& s);

struct InitialDataSpec {
  InitialFamily family = InitialFamily::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  Spinor components{cplx{1.0, 0.0}, cplx{}, cplx{}, cplx{}};
  double wavenumber = 0.0;
  /// Forces the (g, 0, g, 0) pattern on gaussian-type families.
  bool lm_constrained = false;
  std::uint64_t seed = 0;

  void validate() const;
};

SpinorField make_initial_data(const InitialDataSpec& spec, const Grid& grid,
                              double t_start);

}  // namespace flrw
