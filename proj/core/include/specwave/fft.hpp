#pragma once

#include <complex>
#include <vector>

namespace specwave {

/// In-place complex FFT (FFTW backend). Size must be a power of two here;
/// everything in this project pads to powers of two. The inverse transform
/// is unnormalized (like FFTW): ifft(fft(x)) == n * x.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace specwave
