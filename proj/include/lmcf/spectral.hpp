#pragma once

// Fourier-domain plumbing: per-channel 2-D DFTs and the kernel correlation
// operators that diagonalize circulant sample matrices.
//
// Convention: the forward transform is unnormalized and the inverse carries
// the 1/(W*H) factor, so idft2(dft2(x)) == x.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "lmcf/error.hpp"
#include "lmcf/grid.hpp"

namespace lmcf {

using SpectralMap = ComplexGrid;
using SpectralSurface = ComplexGrid;  // single channel

namespace detail {

// Eigen::FFT caches twiddles per length; one instance per thread keeps the
// pure functions below safe to call concurrently.
inline Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// In-place 2-D transform of one width x height plane.
inline void transform_plane(std::complex<double>* plane, int width, int height, bool inverse) {
  auto& fft = thread_fft();
  thread_local std::vector<std::complex<double>> in, out;
  const auto run = [&](int n) {
    if (inverse) fft.inv(out.data(), in.data(), n); else fft.fwd(out.data(), in.data(), n);
  };
  if (width > 1) {
    in.resize(width);
    out.resize(width);
    for (int y = 0; y < height; ++y) {
      std::complex<double>* row = plane + static_cast<std::size_t>(y) * width;
      std::copy(row, row + width, in.begin());
      run(width);
      std::copy(out.begin(), out.end(), row);
    }
  }
  if (height > 1) {
    in.resize(height);
    out.resize(height);
    for (int x = 0; x < width; ++x) {
      for (int y = 0; y < height; ++y) in[y] = plane[static_cast<std::size_t>(y) * width + x];
      run(height);
      for (int y = 0; y < height; ++y) plane[static_cast<std::size_t>(y) * width + x] = out[y];
    }
  }
}

inline void check_same_shape(const SpectralMap& a, const SpectralMap& b) {
  if (!a.same_shape(b)) throw InvalidInput("spectral maps differ in shape");
}

}  // namespace detail

// Real channels are transformed in pairs: one complex FFT of a + i*b, split by
// A[k] = (Z[k] + conj(Z[-k])) / 2 and B[k] = (Z[k] - conj(Z[-k])) / 2i.
inline SpectralMap dft2(const RealGrid& map) {
  const int W = map.width(), H = map.height(), D = map.channels();
  SpectralMap out(W, H, D);
  for (double v : map.values())
    if (!std::isfinite(v)) throw InvalidInput("dft2: non-finite input entry");
  std::vector<std::complex<double>> z(map.plane_size());
  for (int c = 0; c < D; c += 2) {
    auto a = map.channel(c);
    auto dst_a = out.channel(c);
    if (c + 1 == D) {
      std::copy(a.begin(), a.end(), dst_a.begin());
      detail::transform_plane(dst_a.data(), W, H, false);
      break;
    }
    auto b = map.channel(c + 1);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = {a[i], b[i]};
    detail::transform_plane(z.data(), W, H, false);
    auto dst_b = out.channel(c + 1);
    for (int y = 0; y < H; ++y) {
      const int ny = y == 0 ? 0 : H - y;
      for (int x = 0; x < W; ++x) {
        const int nx = x == 0 ? 0 : W - x;
        const std::complex<double> p = z[static_cast<std::size_t>(y) * W + x];
        const std::complex<double> q = std::conj(z[static_cast<std::size_t>(ny) * W + nx]);
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        dst_a[i] = 0.5 * (p + q);
        const std::complex<double> d = 0.5 * (p - q);
        dst_b[i] = {d.imag(), -d.real()};
      }
    }
  }
  return out;
}

// Complex-to-complex inverse, no realness check.
inline ComplexGrid idft2_complex(const SpectralMap& smap) {
  ComplexGrid out = smap;
  for (int c = 0; c < out.channels(); ++c)
    detail::transform_plane(out.channel(c).data(), out.width(), out.height(), true);
  return out;
}

// Real part of the inverse transform. The imaginary residual must stay below
// `tolerance` relative to max(1, max |real part|); a larger residual means the
// spectrum was not conjugate-symmetric and throws NumericalError.
inline RealGrid idft2(const SpectralMap& smap, double tolerance = 1e-8) {
  const ComplexGrid full = idft2_complex(smap);
  RealGrid out(full.width(), full.height(), full.channels());
  auto src = full.values();
  auto dst = out.values();
  double max_real = 1.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i].real();
    max_real = std::max(max_real, std::abs(src[i].real()));
    max_imag = std::max(max_imag, std::abs(src[i].imag()));
  }
  if (max_imag > tolerance * max_real)
    throw NumericalError("idft2: imaginary residual " + std::to_string(max_imag) +
                         " exceeds tolerance for a real-valued result");
  return out;
}

// Spectrum of the channel-summed circular cross-correlation
//   g[w,h] = sum_d sum_n a_d[n] * b_d[n + (w,h)],
// i.e. sum_d conj(A_d) * B_d.
inline SpectralSurface linear_kernel_corr(const SpectralMap& a, const SpectralMap& b) {
  detail::check_same_shape(a, b);
  SpectralSurface out(a.width(), a.height(), 1);
  auto acc = out.channel(0);
  for (int c = 0; c < a.channels(); ++c) {
    auto pa = a.channel(c);
    auto pb = b.channel(c);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(pa[i]) * pb[i];
  }
  return out;
}

// Squared Frobenius norm of the spatial map behind a spectrum (Parseval).
inline double spectral_energy(const SpectralMap& a) {
  double sum = 0.0;
  for (const auto& v : a.values()) sum += std::norm(v);
  return sum / static_cast<double>(a.plane_size());
}

// Spectrum of the Gaussian kernel vector
//   k[w,h] = exp(-(|a|^2 + |b|^2 - 2 g[w,h]) / (sigma_k^2 * W * H * D)).
// The squared distance is clamped at zero, so every spatial entry is in (0, 1].
inline SpectralSurface gaussian_kernel_corr(const SpectralMap& a, const SpectralMap& b,
                                            double sigma_k) {
  detail::check_same_shape(a, b);
  if (!(sigma_k > 0.0)) throw InvalidInput("gaussian_kernel_corr: sigma_k must be positive");
  const RealGrid cross = idft2(linear_kernel_corr(a, b));
  const double norms = spectral_energy(a) + spectral_energy(b);
  const double scale = sigma_k * sigma_k * static_cast<double>(a.plane_size()) * a.channels();
  RealGrid k(a.width(), a.height(), 1);
  auto src = cross.values();
  auto dst = k.values();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = std::exp(-std::max(0.0, norms - 2.0 * src[i]) / scale);
  return dft2(k);
}

}  // namespace lmcf
