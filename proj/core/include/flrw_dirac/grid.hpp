#pragma once

#include <array>
#include <cstddef>

namespace flrw {

/// Periodic grid on [-L/2, L/2)^dim. For dim = 1 fields depend on x1 only.
struct Grid {
  int dim = 1;
  int n = 64;
  double box_length = 1.0;

  void validate() const;

  std::size_t points() const;
  double spacing() const { return box_length / n; }
  /// h^dim, the quadrature weight of one grid point.
  double cell_volume() const;
  double coordinate(int i) const { return -0.5 * box_length + i * spacing(); }
  /// Physical coordinates (x1, x2, x3) of a flat index; unused axes are 0.
  std::array<double, 3> position(std::size_t idx) const;
  std::array<int, 3> unravel(std::size_t idx) const;

  /// Angular wavenumber 2*pi*k/L of FFT index i, k in [-n/2, n/2).
  double wavenumber(int i) const;
  /// As wavenumber() but zero at the Nyquist index.
  double derivative_wavenumber(int i) const;
  /// Full wave vector of a flat Fourier index.
  std::array<double, 3> wavevector(std::size_t idx, bool derivative = false) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

}  // namespace flrw
