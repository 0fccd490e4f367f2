#pragma once

// Shared FFTW plan cache. Plan creation/destruction is serialized; execution
// uses the new-array interface on caller-owned buffers, which is safe across
// threads on distinct data.

#include <complex>
#include <vector>

namespace miura::fft {

// In-place complex DFT of length n. sign = -1 is FFTW_FORWARD (e^{-2pi i jk/n}),
// sign = +1 is FFTW_BACKWARD (e^{+2pi i jk/n}). Unnormalized.
void dft(std::vector<std::complex<double>>& data, int sign);

// Real-to-complex forward of length n (out has n/2+1 bins), and its inverse.
// c2r destroys `in`; both unnormalized (r2c followed by c2r multiplies by n).
void r2c(const std::vector<double>& in, std::vector<std::complex<double>>& out);
void c2r(std::vector<std::complex<double>>& in, std::vector<double>& out);

} // namespace miura::fft
