#include "flrw_dirac/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flrw {

void Grid::validate() const {
  if (dim != 1 && dim != 3) throw std::invalid_argument("grid.dim must be 1 or 3");
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid.n must be a power of two and at least 8");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("grid.box_length must be positive");
}

std::size_t Grid::points() const {
  std::size_t p = 1;
  for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(n);
  return p;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim); }

std::array<int, 3> Grid::unravel(std::size_t idx) const {
  if (dim == 1) return {static_cast<int>(idx), 0, 0};
  const std::size_t nn = static_cast<std::size_t>(n);
  return {static_cast<int>(idx / (nn * nn)), static_cast<int>((idx / nn) % nn),
          static_cast<int>(idx % nn)};
}

std::array<double, 3> Grid::position(std::size_t idx) const {
  const auto ijk = unravel(idx);
  if (dim == 1) return {coordinate(ijk[0]), 0.0, 0.0};
  return {coordinate(ijk[0]), coordinate(ijk[1]), coordinate(ijk[2])};
}

double Grid::wavenumber(int i) const {
  const int k = i < n / 2 ? i : i - n;
  return 2.0 * std::numbers::pi * k / box_length;
}

double Grid::derivative_wavenumber(int i) const {
  return i == n / 2 ? 0.0 : wavenumber(i);
}

std::array<double, 3> Grid::wavevector(std::size_t idx, bool derivative) const {
  const auto ijk = unravel(idx);
  auto w = [&](int i) { return derivative ? derivative_wavenumber(i) : wavenumber(i); };
  if (dim == 1) return {w(ijk[0]), 0.0, 0.0};
  return {w(ijk[0]), w(ijk[1]), w(ijk[2])};
}

}  // namespace flrw
