#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

namespace mckean::spectral::detail {

using cplx = std::complex<double>;

/// Process-wide cache of FFTW plans. Planning is serialized; execution through
/// fftw_execute_dft on caller-owned buffers is thread-safe.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second.get();

    const std::size_t total = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
    std::vector<cplx> scratch_in(total), scratch_out(total);
    int dims[2] = {n, n};
    fftw_plan p = fftw_plan_dft(dim, dims, reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, PlanPtr(p));
    return p;
  }

private:
  struct PlanDeleter {
    void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
  };
  using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, PlanPtr> plans_;
};

/// Unnormalized forward DFT: out_k = sum_n in_n exp(-2πi k·n/N).
inline void forward(int dim, int n, std::span<const cplx> in, std::span<cplx> out) {
  fftw_plan p = PlanCache::instance().get(dim, n, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

/// Normalized inverse DFT (divides by N^d).
inline void inverse(int dim, int n, std::span<const cplx> in, std::span<cplx> out) {
  fftw_plan p = PlanCache::instance().get(dim, n, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& c : out) c *= scale;
}

} // namespace mckean::spectral::detail
