#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hoseeg {

/// Band-pass request. `order` is the analog low-pass prototype order; the
/// digital band-pass has 2*order poles.
struct FilterSpec {
  double low_hz = 1.0;
  double high_hz = 40.0;
  int order = 5;
  bool zero_phase = true;
};

/// Cascade of biquads, one row per section: [b0 b1 b2 a0 a1 a2] with a0 == 1.
struct SosFilter {
  Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor> sections;

  Eigen::Index section_count() const { return sections.rows(); }
  /// Digital filter order (number of poles).
  int order() const { return static_cast<int>(2 * sections.rows()); }

  static SosFilter identity();
};

/// Butterworth band-pass: analog prototype, low-pass to band-pass transform,
/// bilinear transform with both edges pre-warped. Throws ConfigError unless
/// 0 < low < high < fs/2 and order >= 1.
SosFilter design_bandpass(const FilterSpec& spec, double fs_hz);

/// H(e^{j 2 pi f / fs}) of the cascade.
std::complex<double> frequency_response(const SosFilter& filter, double f_hz, double fs_hz);

/// Transposed direct form II, zero initial state.
Eigen::VectorXd sosfilt(const SosFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Forward-backward filtering with odd reflection padding of 3*order samples
/// and step-response initial conditions. Throws DataError when the signal is
/// not longer than the padding.
Eigen::VectorXd filtfilt(const SosFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Samples of odd-reflection padding used on each side by filtfilt.
inline Eigen::Index filtfilt_padding(const SosFilter& filter) { return 3 * filter.order(); }

}  // namespace hoseeg
