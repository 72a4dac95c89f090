#pragma once

#include <complex>
#include <stdexcept>

namespace flrw {

class Hyp2F1Error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Hyp2F1Params {
  std::complex<double> a;
  std::complex<double> b;
  std::complex<double> c;
  std::complex<double> z;
};

inline constexpr double kHyp2F1ZMax = 0.95;

/// Gauss series summed until the geometric tail bound falls below 1e-16
/// relative. Throws Hyp2F1Error for |z| > z_max, c a nonpositive integer, or
/// no convergence within max_terms.
std::complex<double> hyp2f1(const Hyp2F1Params& p, double z_max = kHyp2F1ZMax,
                            int max_terms = 20000);

/// d/dz F(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z).
std::complex<double> hyp2f1_derivative(const Hyp2F1Params& p,
                                       double z_max = kHyp2F1ZMax);

}  // namespace flrw
