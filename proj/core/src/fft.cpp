#include "specwave/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace specwave {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.empty()) return;
  if (!is_power_of_two(data.size()))
    throw std::invalid_argument("fft_inplace: size must be a power of two");

  // FFTW planning is not thread-safe; execution on a fresh plan is.
  static std::mutex plan_mutex;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr,
                            inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fftw_plan_dft_1d failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace specwave
