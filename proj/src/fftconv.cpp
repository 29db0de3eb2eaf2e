#include "boxgap/fftconv.hpp"

#include <cmath>
#include <stdexcept>

namespace boxgap::fftconv {

namespace {

bool power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_line(std::complex<double>* a, int n, bool inverse) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / len * (inverse ? 1.0 : -1.0);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  if (!power_of_two(a.size())) throw std::invalid_argument("fft: length must be a power of two");
  fft_line(a.data(), int(a.size()), inverse);
  if (inverse)
    for (auto& v : a) v /= double(a.size());
}

void fft3(std::vector<std::complex<double>>& a, int n0, int n1, int n2, bool inverse) {
  if (!power_of_two(size_t(n0)) || !power_of_two(size_t(n1)) || !power_of_two(size_t(n2)))
    throw std::invalid_argument("fft3: extents must be powers of two");
  if (a.size() != size_t(n0) * n1 * n2) throw std::invalid_argument("fft3: size mismatch");

  // last axis: contiguous lines
  for (long long line = 0; line < (long long)n0 * n1; ++line)
    fft_line(a.data() + line * n2, n2, inverse);

  // middle axis: stride n2
  std::vector<std::complex<double>> buf(std::max(n0, n1));
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i2 = 0; i2 < n2; ++i2) {
      std::complex<double>* base = a.data() + (long long)i0 * n1 * n2 + i2;
      for (int i1 = 0; i1 < n1; ++i1) buf[i1] = base[(long long)i1 * n2];
      fft_line(buf.data(), n1, inverse);
      for (int i1 = 0; i1 < n1; ++i1) base[(long long)i1 * n2] = buf[i1];
    }

  // first axis: stride n1*n2
  const long long s0 = (long long)n1 * n2;
  for (long long rest = 0; rest < s0; ++rest) {
    std::complex<double>* base = a.data() + rest;
    for (int i0 = 0; i0 < n0; ++i0) buf[i0] = base[i0 * s0];
    fft_line(buf.data(), n0, inverse);
    for (int i0 = 0; i0 < n0; ++i0) base[i0 * s0] = buf[i0];
  }

  if (inverse) {
    const double scale = 1.0 / (double(n0) * n1 * n2);
    for (auto& v : a) v *= scale;
  }
}

std::vector<double> circular_convolve3(const std::vector<double>& a, const std::vector<double>& b,
                                       int n0, int n1, int n2) {
  const size_t nn = size_t(n0) * n1 * n2;
  if (a.size() != nn || b.size() != nn)
    throw std::invalid_argument("circular_convolve3: size mismatch");
  std::vector<std::complex<double>> fa(a.begin(), a.end());
  fft3(fa, n0, n1, n2, false);
  {
    std::vector<std::complex<double>> fb(b.begin(), b.end());
    fft3(fb, n0, n1, n2, false);
    for (size_t i = 0; i < nn; ++i) fa[i] *= fb[i];
  }
  fft3(fa, n0, n1, n2, true);
  std::vector<double> out(nn);
  for (size_t i = 0; i < nn; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace boxgap::fftconv
