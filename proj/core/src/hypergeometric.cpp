#include "flrw_dirac/hypergeometric.hpp"

#include <algorithm>
#include <cmath>

namespace flrw {

std::complex<double> hyp2f1(const Hyp2F1Params& p, double z_max, int max_terms) {
  using C = std::complex<double>;
  const double az = std::abs(p.z);
  if (!(az <= z_max)) throw Hyp2F1Error("hyp2f1: |z| exceeds the series guard");
  if (p.c.imag() == 0.0 && p.c.real() <= 0.0 && std::floor(p.c.real()) == p.c.real())
    throw Hyp2F1Error("hyp2f1: c is a nonpositive integer");
  if (az == 0.0) return {1.0, 0.0};

  C term{1.0, 0.0};
  C sum{1.0, 0.0};
  int quiet = 0;
  for (int n = 0; n < max_terms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (p.a + dn) * (p.b + dn) / ((p.c + dn) * (dn + 1.0)) * p.z;
    sum += term;
    if (term == C{}) return sum;
    // The term ratio tends monotonically to |z| for large n, so the larger
    // of the current ratio and |z| bounds all later ratios.
    const double ratio = std::max(
        az, std::abs((p.a + dn + 1.0) * (p.b + dn + 1.0) /
                     ((p.c + dn + 1.0) * (dn + 2.0))) * az);
    if (ratio < 1.0) {
      const double tail = std::abs(term) * ratio / (1.0 - ratio);
      if (tail <= 1e-17 * std::abs(sum)) {
        if (++quiet >= 2) return sum;
      } else {
        quiet = 0;
      }
    }
  }
  throw Hyp2F1Error("hyp2f1: series did not converge");
}

std::complex<double> hyp2f1_derivative(const Hyp2F1Params& p, double z_max) {
  const Hyp2F1Params q{p.a + 1.0, p.b + 1.0, p.c + 1.0, p.z};
  return p.a * p.b / p.c * hyp2f1(q, z_max);
}

}  // namespace flrw
