#pragma once

// Direct (FFT-based) higher-order spectral estimators: segmented tapered
// spectra, auto- and cross-bispectrum, bicoherence, and the non-redundant
// bifrequency region.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hoseeg/error.hpp"

namespace hoseeg {

enum class Taper { hann, rectangular };

struct SegmentPlan {
  Eigen::Index nfft = 256;
  double overlap = 0.5;  // fraction of nfft shared by consecutive segments
  Taper window = Taper::hann;
  bool remove_mean = true;
  /// Allow a signal shorter than nfft; it becomes one zero-padded segment.
  bool zero_pad = false;

  Eigen::Index hop() const {
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(nfft * (1.0 - overlap) + 1e-9)));
  }
};

/// Throws ConfigError unless nfft is a power of two >= 2 and overlap is in [0, 1).
inline void validate(const SegmentPlan& plan) {
  if (plan.nfft < 2 || (plan.nfft & (plan.nfft - 1)) != 0) throw ConfigError("nfft must be a power of two >= 2");
  if (!(plan.overlap >= 0.0 && plan.overlap < 1.0)) throw ConfigError("overlap must lie in [0, 1)");
}

/// Periodic Hann (or all-ones) taper of length n.
template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> taper(Taper kind, Eigen::Index n) {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w(i) = kind == Taper::hann
               ? Scalar(0.5) - Scalar(0.5) * std::cos(Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(i) / Scalar(n))
               : Scalar(1);
  return w;
}

/// One DFT row per tapered segment.
template <typename Scalar>
struct SegmentSpectra {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> spectra;  // K x nfft
  double fs_hz = 0.0;
  Scalar window_norm = Scalar(0);  // mean of taper^3

  Eigen::Index segments() const { return spectra.rows(); }
  Eigen::Index nfft() const { return spectra.cols(); }
};

inline Eigen::Index segment_count(Eigen::Index length, const SegmentPlan& plan) {
  if (length < plan.nfft) return plan.zero_pad && length > 0 ? 1 : 0;
  return (length - plan.nfft) / plan.hop() + 1;
}

template <typename Derived>
SegmentSpectra<typename Derived::Scalar> segment(const Eigen::MatrixBase<Derived>& signal, const SegmentPlan& plan,
                                                 double fs_hz) {
  using Scalar = typename Derived::Scalar;
  using Complex = std::complex<Scalar>;
  static_assert(!Eigen::NumTraits<Scalar>::IsComplex, "segment() takes a real signal");
  validate(plan);
  if (!(fs_hz > 0.0)) throw ConfigError("sampling rate must be positive");
  const Eigen::Index length = signal.size();
  if (length == 0) throw DataError("cannot segment an empty signal");
  if (length < plan.nfft && !plan.zero_pad)
    throw DataError("signal of " + std::to_string(length) + " samples is shorter than nfft = " +
                    std::to_string(plan.nfft));

  const Eigen::Index n = plan.nfft;
  const Eigen::Index k = segment_count(length, plan);
  const Eigen::Index hop = plan.hop();
  const Eigen::Index used = std::min(length, n);
  const auto w = taper<Scalar>(plan.window, n);

  SegmentSpectra<Scalar> out;
  out.fs_hz = fs_hz;
  out.window_norm = w.cube().mean();
  out.spectra.resize(k, n);

  Eigen::FFT<Scalar> fft;
  std::vector<Scalar> buf(static_cast<std::size_t>(n));
  std::vector<Complex> spec;
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index start = r * hop;
    Scalar mean = Scalar(0);
    if (plan.remove_mean) {
      for (Eigen::Index i = 0; i < used; ++i) mean += signal.derived().coeff(start + i);
      mean /= Scalar(used);
    }
    for (Eigen::Index i = 0; i < n; ++i)
      buf[static_cast<std::size_t>(i)] = i < used ? (signal.derived().coeff(start + i) - mean) * w(i) : Scalar(0);
    fft.fwd(spec, buf);
    for (Eigen::Index i = 0; i < n; ++i) out.spectra(r, i) = spec[static_cast<std::size_t>(i)];
  }
  return out;
}

enum class GridKind { bispectrum, cross_bispectrum, bicoherence };

/// nfft x nfft bifrequency grid indexed by DFT bins (k1, k2). Bins above
/// nfft/2 represent negative frequencies.
template <typename Scalar>
struct SpectralGrid {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> values;
  double fs_hz = 0.0;
  GridKind kind = GridKind::bispectrum;

  Eigen::Index nfft() const { return values.rows(); }
  /// Signed bin-center frequency of bin k (mod nfft).
  double frequency(Eigen::Index k) const {
    const Eigen::Index n = nfft();
    k = ((k % n) + n) % n;
    return static_cast<double>(k > n / 2 ? k - n : k) * fs_hz / static_cast<double>(n);
  }
};

namespace detail {

// (1/K) sum_r X_r(k1) X_r(k2) conj(Y_r(k1 + k2)), evaluated on k2 <= k1 and mirrored.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> triple_mean(const SegmentSpectra<Scalar>& sx,
                                                                               const SegmentSpectra<Scalar>& sy) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index n = sx.nfft();
  const Eigen::Index k = sx.segments();
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> grid = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto x = sx.spectra.row(r);
    const auto y = sy.spectra.row(r);
    for (Eigen::Index k1 = 0; k1 < n; ++k1) {
      const Complex x1 = x(k1);
      for (Eigen::Index k2 = 0; k2 <= k1; ++k2) {
        Eigen::Index s = k1 + k2;
        if (s >= n) s -= n;
        grid(k1, k2) += x1 * x(k2) * std::conj(y(s));
      }
    }
  }
  const Scalar inv_k = Scalar(1) / Scalar(k);
  for (Eigen::Index k1 = 0; k1 < n; ++k1)
    for (Eigen::Index k2 = 0; k2 <= k1; ++k2) {
      grid(k1, k2) *= inv_k;
      grid(k2, k1) = grid(k1, k2);
    }
  return grid;
}

}  // namespace detail

/// B_xxy(k1, k2) = (1/K) sum_r X_r(k1) X_r(k2) conj(Y_r(k1 + k2 mod nfft)).
template <typename Scalar>
SpectralGrid<Scalar> cross_bispectrum(const SegmentSpectra<Scalar>& sx, const SegmentSpectra<Scalar>& sy) {
  if (sx.segments() != sy.segments() || sx.nfft() != sy.nfft() || sx.fs_hz != sy.fs_hz)
    throw DataError("cross-bispectrum inputs differ in segment count, nfft or sampling rate");
  if (sx.segments() < 1) throw DataError("no segments");
  return SpectralGrid<Scalar>{detail::triple_mean(sx, sy), sx.fs_hz, GridKind::cross_bispectrum};
}

template <typename Scalar>
SpectralGrid<Scalar> bispectrum(const SegmentSpectra<Scalar>& s) {
  if (s.segments() < 1) throw DataError("no segments");
  return SpectralGrid<Scalar>{detail::triple_mean(s, s), s.fs_hz, GridKind::bispectrum};
}

/// b(k1, k2) = |B| / sqrt( E|X(k1) X(k2)|^2 * E|X(k1 + k2)|^2 ), stored as a
/// real value in [0, 1]. Bins whose denominator is below 1e-30 are 0.
template <typename Scalar>
SpectralGrid<Scalar> bicoherence(const SegmentSpectra<Scalar>& s) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index k = s.segments();
  if (k < 2) throw DataError("bicoherence needs at least 2 segments (have " + std::to_string(k) + ")");
  const Eigen::Index n = s.nfft();
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> sum = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pair_power = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> power = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto x = s.spectra.row(r);
    for (Eigen::Index i = 0; i < n; ++i) power(i) += std::norm(x(i));
    for (Eigen::Index k1 = 0; k1 < n; ++k1)
      for (Eigen::Index k2 = 0; k2 <= k1; ++k2) {
        Eigen::Index t = k1 + k2;
        if (t >= n) t -= n;
        const Complex p = x(k1) * x(k2);
        sum(k1, k2) += p * std::conj(x(t));
        pair_power(k1, k2) += std::norm(p);
      }
  }
  const Scalar inv_k = Scalar(1) / Scalar(k);
  SpectralGrid<Scalar> out{Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n), s.fs_hz,
                           GridKind::bicoherence};
  for (Eigen::Index k1 = 0; k1 < n; ++k1)
    for (Eigen::Index k2 = 0; k2 <= k1; ++k2) {
      Eigen::Index t = k1 + k2;
      if (t >= n) t -= n;
      const Scalar den = pair_power(k1, k2) * inv_k * power(t) * inv_k;
      Scalar b = Scalar(0);
      if (den >= Scalar(1e-30)) {
        const Scalar num = std::norm(sum(k1, k2) * inv_k);
        b = std::sqrt(std::min(Scalar(1), num / den));
      }
      out.values(k1, k2) = Complex(b, Scalar(0));
      out.values(k2, k1) = out.values(k1, k2);
    }
  return out;
}

struct BinPair {
  Eigen::Index k1 = 0;
  Eigen::Index k2 = 0;
  friend bool operator==(const BinPair&, const BinPair&) = default;
};

/// Non-redundant pairs 0 <= k2 <= k1, k1 + k2 <= nfft/2 whose bin-center
/// frequencies both lie in [low_hz, high_hz]. Ordered by k1, then k2.
std::vector<BinPair> principal_region(Eigen::Index nfft, double fs_hz, double low_hz, double high_hz);

/// Mean over segments of |X_r(k)|^2.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> power_spectrum(const SegmentSpectra<Scalar>& s) {
  return s.spectra.cwiseAbs2().colwise().mean().transpose();
}

/// Nearest DFT bin to a (non-negative) frequency.
inline Eigen::Index nearest_bin(double f_hz, Eigen::Index nfft, double fs_hz) {
  return static_cast<Eigen::Index>(std::llround(f_hz * static_cast<double>(nfft) / fs_hz));
}

/// Location of the largest |value| over a bin-pair list (first on ties).
template <typename Scalar>
BinPair argmax_magnitude(const SpectralGrid<Scalar>& grid, const std::vector<BinPair>& region) {
  if (region.empty()) throw DataError("empty region");
  BinPair best = region.front();
  Scalar best_mag = Scalar(-1);
  for (const BinPair& p : region) {
    const Scalar m = std::abs(grid.values(p.k1, p.k2));
    if (m > best_mag) {
      best_mag = m;
      best = p;
    }
  }
  return best;
}

}  // namespace hoseeg
