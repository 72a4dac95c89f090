#include "flrw_dirac/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace flrw {

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (slot) return *slot;
  auto rule = std::make_unique<QuadratureRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule->nodes[i] = -z;
    rule->nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  slot = std::move(rule);
  return *slot;
}

QuadratureRule mapped_rule(const QuadratureRule& ref, double a, double b) {
  QuadratureRule r;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  r.nodes.reserve(ref.nodes.size());
  r.weights.reserve(ref.nodes.size());
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    r.nodes.push_back(c + h * ref.nodes[i]);
    r.weights.push_back(h * ref.weights[i]);
  }
  return r;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("panel count must be positive");
  const auto& ref = gauss_legendre(order);
  QuadratureRule out;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const auto r = mapped_rule(ref, a + p * w, a + (p + 1) * w);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

std::vector<double> cumulative_integral(const std::vector<double>& t,
                                        const std::vector<double>& y) {
  if (t.size() != y.size()) throw std::invalid_argument("series length mismatch");
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  const auto& g = gauss_legendre(3);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Stencil of up to four samples around [t_i, t_{i+1}].
    std::size_t lo = i > 0 ? i - 1 : 0;
    std::size_t hi = std::min(n - 1, lo + 3);
    if (hi - lo < 3 && lo > 0) lo = hi >= 3 ? hi - 3 : 0;
    const double a = t[i], b = t[i + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double x = c + h * g.nodes[q];
      double p = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) {
        double l = 1.0;
        for (std::size_t k = lo; k <= hi; ++k)
          if (k != j) l *= (x - t[k]) / (t[j] - t[k]);
        p += l * y[j];
      }
      acc += g.weights[q] * p;
    }
    out[i + 1] = out[i] + acc * h;
  }
  return out;
}

}  // namespace flrw
