#pragma once

#include <complex>
#include <memory>

#include "flrw_dirac/grid.hpp"

namespace flrw {

/// Unnormalized in-place DFT over a grid, batched over `howmany` contiguous
/// blocks of grid.points() values. Plans are shared through a process-wide
/// cache; execute() is safe to call concurrently.
class FftPlan {
 public:
  FftPlan(const Grid& grid, int howmany = 1);

  void forward(std::complex<double>* data) const;
  /// Inverse transform without the 1/N factor.
  void backward(std::complex<double>* data) const;

  int howmany() const { return howmany_; }

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
  int howmany_;
};

}  // namespace flrw
