#include "flrw_dirac/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace flrw {

struct FftPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using Key = std::tuple<int, int, int>;

std::shared_ptr<const FftPlan::Impl> make_plan(const Grid& g, int howmany) {
  static std::map<Key, std::shared_ptr<const FftPlan::Impl>> cache;
  std::lock_guard lock(planner_mutex());
  const Key key{g.dim, g.n, howmany};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int dims[3] = {g.n, g.n, g.n};
  const int total = static_cast<int>(g.points());
  std::vector<fftw_complex> scratch(static_cast<std::size_t>(total) * howmany);
  auto impl = std::make_shared<FftPlan::Impl>();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  impl->fwd = fftw_plan_many_dft(g.dim, dims, howmany, scratch.data(), nullptr, 1,
                                 total, scratch.data(), nullptr, 1, total,
                                 FFTW_FORWARD, flags);
  impl->bwd = fftw_plan_many_dft(g.dim, dims, howmany, scratch.data(), nullptr, 1,
                                 total, scratch.data(), nullptr, 1, total,
                                 FFTW_BACKWARD, flags);
  cache.emplace(key, impl);
  return impl;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

FftPlan::FftPlan(const Grid& grid, int howmany)
    : impl_(make_plan(grid, howmany)), howmany_(howmany) {}

void FftPlan::forward(std::complex<double>* data) const {
  fftw_execute_dft(impl_->fwd, as_fftw(data), as_fftw(data));
}

void FftPlan::backward(std::complex<double>* data) const {
  fftw_execute_dft(impl_->bwd, as_fftw(data), as_fftw(data));
}

}  // namespace flrw
