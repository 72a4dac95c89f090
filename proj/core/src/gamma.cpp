#include "flrw_dirac/gamma.hpp"

#include <cmath>
#include <stdexcept>

namespace flrw {

Mat4C Mat4C::identity() { return diagonal(1.0, 1.0, 1.0, 1.0); }

Mat4C Mat4C::diagonal(cplx d0, cplx d1, cplx d2, cplx d3) {
  Mat4C m;
  m.e[0][0] = d0;
  m.e[1][1] = d1;
  m.e[2][2] = d2;
  m.e[3][3] = d3;
  return m;
}

Mat4C Mat4C::from_blocks(const Mat2C& a, const Mat2C& b, const Mat2C& c,
                         const Mat2C& d) {
  Mat4C m;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      m.e[i][j] = a[i][j];
      m.e[i][j + 2] = b[i][j];
      m.e[i + 2][j] = c[i][j];
      m.e[i + 2][j + 2] = d[i][j];
    }
  }
  return m;
}

Mat4C Mat4C::transpose() const {
  Mat4C t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t.e[j][i] = e[i][j];
  return t;
}

Mat4C Mat4C::adjoint() const {
  Mat4C t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t.e[j][i] = std::conj(e[i][j]);
  return t;
}

Mat4C Mat4C::conj() const {
  Mat4C t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t.e[i][j] = std::conj(e[i][j]);
  return t;
}

bool Mat4C::is_finite() const {
  for (const auto& row : e)
    for (const auto& v : row)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Mat4C& Mat4C::operator+=(const Mat4C& o) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) e[i][j] += o.e[i][j];
  return *this;
}

Mat4C& Mat4C::operator-=(const Mat4C& o) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) e[i][j] -= o.e[i][j];
  return *this;
}

Mat4C& Mat4C::operator*=(cplx s) {
  for (auto& row : e)
    for (auto& v : row) v *= s;
  return *this;
}

Mat4C operator*(const Mat4C& a, const Mat4C& b) {
  Mat4C p;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const cplx aik = a.e[i][k];
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < 4; ++j) p.e[i][j] += aik * b.e[k][j];
    }
  return p;
}

double max_abs_diff(const Mat4C& a, const Mat4C& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      m = std::max(m, std::abs(a.e[i][j] - b.e[i][j]));
  return m;
}

const Mat4C& GammaBasis::gamma(int mu) const {
  switch (mu) {
    case 0: return g0;
    case 1: return g1;
    case 2: return g2;
    case 3: return g3;
    default: throw std::out_of_range("gamma index must be 0..3");
  }
}

const Mat4C& GammaBasis::alpha(int j) const {
  switch (j) {
    case 1: return alpha1;
    case 2: return alpha2;
    case 3: return alpha3;
    default: throw std::out_of_range("alpha index must be 1..3");
  }
}

GammaBasis build_basis() {
  const cplx one{1.0, 0.0};
  const cplx i{0.0, 1.0};
  const Mat2C O{};
  const Mat2C I2{{{one, 0.0}, {0.0, one}}};
  const Mat2C mI2{{{-one, 0.0}, {0.0, -one}}};
  const Mat2C s1{{{0.0, one}, {one, 0.0}}};
  const Mat2C s2{{{0.0, -i}, {i, 0.0}}};
  const Mat2C s3{{{one, 0.0}, {0.0, -one}}};
  auto neg = [](Mat2C m) {
    for (auto& row : m)
      for (auto& v : row) v = -v;
    return m;
  };

  GammaBasis b;
  b.sigma = {s1, s2, s3};
  b.g0 = Mat4C::from_blocks(I2, O, O, mI2);
  b.g1 = Mat4C::from_blocks(O, s1, neg(s1), O);
  b.g2 = Mat4C::from_blocks(O, s2, neg(s2), O);
  b.g3 = Mat4C::from_blocks(O, s3, neg(s3), O);
  b.g5 = Mat4C::from_blocks(O, mI2, mI2, O);
  b.alpha1 = Mat4C::from_blocks(O, s1, s1, O);
  b.alpha2 = Mat4C::from_blocks(O, s2, s2, O);
  b.alpha3 = Mat4C::from_blocks(O, s3, s3, O);
  b.gammaU = Mat4C::from_blocks(I2, O, O, O);
  b.gammaL = Mat4C::from_blocks(O, O, O, I2);
  return b;
}

const GammaBasis& basis() {
  static const GammaBasis b = build_basis();
  return b;
}

Mat4C anticommutator(const Mat4C& a, const Mat4C& b) { return a * b + b * a; }

Spinor apply(const Mat4C& a, const Spinor& s) {
  Spinor r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i] += a.e[i][j] * s[j];
  return r;
}

}  // namespace flrw
