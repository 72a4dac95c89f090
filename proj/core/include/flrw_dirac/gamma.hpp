#pragma once

// Dirac-representation gamma matrices and small dense 4x4 complex algebra.

#include <array>
#include <complex>
#include <cstddef>

namespace flrw {

using cplx = std::complex<double>;
using Spinor = std::array<cplx, 4>;

inline constexpr cplx kI{0.0, 1.0};

using Mat2C = std::array<std::array<cplx, 2>, 2>;

struct Mat4C {
  std::array<std::array<cplx, 4>, 4> e{};

  static Mat4C zero() { return {}; }
  static Mat4C identity();
  static Mat4C diagonal(cplx d0, cplx d1, cplx d2, cplx d3);
  /// Assembles [[a, b], [c, d]] from 2x2 blocks.
  static Mat4C from_blocks(const Mat2C& a, const Mat2C& b, const Mat2C& c,
                           const Mat2C& d);

  cplx& operator()(std::size_t r, std::size_t c) { return e[r][c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return e[r][c]; }

  Mat4C transpose() const;
  Mat4C adjoint() const;
  Mat4C conj() const;
  bool is_finite() const;

  Mat4C& operator+=(const Mat4C& o);
  Mat4C& operator-=(const Mat4C& o);
  Mat4C& operator*=(cplx s);

  friend Mat4C operator+(Mat4C a, const Mat4C& b) { return a += b; }
  friend Mat4C operator-(Mat4C a, const Mat4C& b) { return a -= b; }
  friend Mat4C operator*(Mat4C a, cplx s) { return a *= s; }
  friend Mat4C operator*(cplx s, Mat4C a) { return a *= s; }
  friend Mat4C operator*(const Mat4C& a, const Mat4C& b);
  friend bool operator==(const Mat4C&, const Mat4C&) = default;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Mat4C& a, const Mat4C& b);

struct GammaBasis {
  Mat4C g0, g1, g2, g3, g5;
  Mat4C alpha1, alpha2, alpha3;
  Mat4C gammaU, gammaL;
  std::array<Mat2C, 3> sigma;

  /// gamma^mu for mu = 0..3.
  const Mat4C& gamma(int mu) const;
  /// alpha^j = gamma^0 gamma^j for j = 1..3.
  const Mat4C& alpha(int j) const;
};

/// Every entry is an integer or +-i literal, so the Clifford identities hold
/// bit-exactly.
GammaBasis build_basis();

/// Shared immutable instance of build_basis().
const GammaBasis& basis();

Mat4C anticommutator(const Mat4C& a, const Mat4C& b);

Spinor apply(const Mat4C& a, const Spinor& s);

/// Minkowski metric diag(1,-1,-1,-1).
constexpr double minkowski(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

inline double norm_sq(const Spinor& s) {
  return std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]) + std::norm(s[3]);
}

}  // namespace flrw
