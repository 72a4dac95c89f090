#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace flrw {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
const QuadratureRule& gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [a, b] with equal panels.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

/// Maps the reference rule onto [a, b].
QuadratureRule mapped_rule(const QuadratureRule& ref, double a, double b);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive bisection with a 10-point Gauss-Legendre rule; a panel is
/// accepted when its value agrees with the sum over its halves within
/// max(abs_tol * width / total_width, rel_tol * |value|).
template <class T>
T integrate_adaptive(const std::function<T(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 0.0, int max_depth = 40) {
  if (a == b) return T{};
  const auto& rule = gauss_legendre(10);
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    T acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * f(c + h * rule.nodes[i]);
    return acc * h;
  };
  const double total = std::abs(b - a);
  std::function<T(double, double, T, int)> rec = [&](double lo, double hi, T whole,
                                                     int depth) -> T {
    const double mid = 0.5 * (lo + hi);
    const T left = panel(lo, mid);
    const T right = panel(mid, hi);
    const T both = left + right;
    const double err = std::abs(both - whole);
    const double tol =
        std::max(abs_tol * std::abs(hi - lo) / total, rel_tol * std::abs(both));
    if (err <= tol) return both;
    if (depth >= max_depth)
      throw QuadratureError("adaptive quadrature did not converge");
    return rec(lo, mid, left, depth + 1) + rec(mid, hi, right, depth + 1);
  };
  return rec(a, b, panel(a, b), 0);
}

/// Cumulative integral of sampled data using, on each interval, the exact
/// integral of the cubic through the four nearest samples (fourth order on
/// smooth data). Falls back to lower degree when fewer samples exist.
std::vector<double> cumulative_integral(const std::vector<double>& t,
                                        const std::vector<double>& y);

}  // namespace flrw
