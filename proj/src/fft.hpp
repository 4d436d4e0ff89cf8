#pragma once

#include <complex>
#include <vector>

namespace amc {

using cdouble = std::complex<double>;

// In-place complex FFT. Power-of-two lengths use iterative radix-2
// Cooley-Tukey; every other length goes through Bluestein's chirp-z
// algorithm, so any N >= 1 is accepted.
void fft(std::vector<cdouble>& data, bool inverse = false);

std::vector<cdouble> fft_real(const std::vector<double>& x);

}  // namespace amc
