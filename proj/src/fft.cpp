#include "epr/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace epr::fft {

namespace {

// FFTW_ESTIMATE keeps plans independent of timing measurements, so results
// are reproducible run to run. FFTW_UNALIGNED lets one plan serve any buffer.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags)};
    plans_.emplace(n, p);
    return p;
  }

private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void forward(std::span<cplx> data) {
  auto plan = cache().get(data.size()).forward;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void inverse(std::span<cplx> data) {
  auto plan = cache().get(data.size()).backward;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace epr::fft
