#pragma once

#include <complex>
#include <vector>

namespace boxgap::fftconv {

// In-place iterative radix-2 transform; the length must be a power of two.
// The inverse includes the 1/n normalization.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// 3-D transform of a flattened [n0][n1][n2] array, last axis fastest; each
// extent must be a power of two.
void fft3(std::vector<std::complex<double>>& a, int n0, int n1, int n2, bool inverse);

// Circular convolution of two real arrays on the same [n0][n1][n2] torus.
std::vector<double> circular_convolve3(const std::vector<double>& a, const std::vector<double>& b,
                                       int n0, int n1, int n2);

}  // namespace boxgap::fftconv
