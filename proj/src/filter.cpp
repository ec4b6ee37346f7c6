#include "hoseeg/filter.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "hoseeg/error.hpp"

namespace hoseeg {

namespace {

using cd = std::complex<double>;

struct Biquad {
  double b0, b1, b2, a1, a2;
};

// Denominator 1 - (z1 + z2) z^-1 + z1 z2 z^-2 for a pair closed under conjugation.
Biquad pole_pair(cd z1, cd z2) {
  return Biquad{1.0, 0.0, -1.0, -(z1 + z2).real(), (z1 * z2).real()};
}

cd bilinear(cd s, double fs2) { return (fs2 + s) / (fs2 - s); }

}  // namespace

SosFilter SosFilter::identity() {
  SosFilter f;
  f.sections.resize(1, 6);
  f.sections << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  return f;
}

SosFilter design_bandpass(const FilterSpec& spec, double fs_hz) {
  if (!(fs_hz > 0.0)) throw ConfigError("sampling rate must be positive");
  if (spec.order < 1) throw ConfigError("filter order must be >= 1");
  if (!(spec.low_hz > 0.0) || !(spec.low_hz < spec.high_hz) || !(spec.high_hz < fs_hz / 2.0))
    throw ConfigError("band edges must satisfy 0 < low < high < fs/2 (got " + std::to_string(spec.low_hz) + ", " +
                      std::to_string(spec.high_hz) + " at fs " + std::to_string(fs_hz) + ")");

  const double pi = std::numbers::pi;
  const double fs2 = 2.0 * fs_hz;
  const double w_low = fs2 * std::tan(pi * spec.low_hz / fs_hz);
  const double w_high = fs2 * std::tan(pi * spec.high_hz / fs_hz);
  const double bw = w_high - w_low;
  const double w0_sq = w_low * w_high;
  const int n = spec.order;

  // Each prototype pole p maps to the band-pass pair p*bw/2 +- sqrt((p*bw/2)^2 - w0^2).
  auto bandpass_poles = [&](cd p) {
    const cd half = p * bw / 2.0;
    const cd root = std::sqrt(half * half - w0_sq);
    return std::pair{half + root, half - root};
  };

  std::vector<Biquad> sections;
  cd gain_den = 1.0;
  auto account = [&](cd s) { gain_den *= (fs2 - s); };

  for (int k = 0; k < n; ++k) {
    const cd p = std::polar(1.0, pi * (2.0 * k + n + 1) / (2.0 * n));
    if (p.imag() < -1e-12) continue;  // handled through its conjugate
    auto [s1, s2] = bandpass_poles(p);
    if (std::abs(p.imag()) <= 1e-12) {
      // real prototype pole: its two band-pass poles form one real section
      sections.push_back(pole_pair(bilinear(s1, fs2), bilinear(s2, fs2)));
      account(s1);
      account(s2);
    } else {
      for (cd s : {s1, s2}) {
        sections.push_back(pole_pair(bilinear(s, fs2), bilinear(std::conj(s), fs2)));
        account(s);
        account(std::conj(s));
      }
    }
  }

  // Analog gain bw^n, n zeros at s = 0 (-> z = 1) and n at infinity (-> z = -1).
  const double gain = (std::pow(bw, n) * std::pow(fs2, n) / gain_den).real();

  SosFilter f;
  f.sections.resize(static_cast<Eigen::Index>(sections.size()), 6);
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const Biquad& q = sections[i];
    const double g = i == 0 ? gain : 1.0;
    f.sections.row(static_cast<Eigen::Index>(i)) << g * q.b0, g * q.b1, g * q.b2, 1.0, q.a1, q.a2;
  }
  return f;
}

std::complex<double> frequency_response(const SosFilter& filter, double f_hz, double fs_hz) {
  const cd zinv = std::polar(1.0, -2.0 * std::numbers::pi * f_hz / fs_hz);
  cd h = 1.0;
  for (Eigen::Index i = 0; i < filter.section_count(); ++i) {
    const auto s = filter.sections.row(i);
    h *= (s(0) + zinv * (s(1) + zinv * s(2))) / (s(3) + zinv * (s(4) + zinv * s(5)));
  }
  return h;
}

namespace {

// Filters in place; `state` holds two delays per section.
void run_sections(const SosFilter& filter, Eigen::Ref<Eigen::VectorXd> x, Eigen::MatrixX2d& state) {
  for (Eigen::Index i = 0; i < filter.section_count(); ++i) {
    const auto s = filter.sections.row(i);
    const double b0 = s(0) / s(3), b1 = s(1) / s(3), b2 = s(2) / s(3);
    const double a1 = s(4) / s(3), a2 = s(5) / s(3);
    double z1 = state(i, 0), z2 = state(i, 1);
    for (Eigen::Index t = 0; t < x.size(); ++t) {
      const double in = x(t);
      const double out = b0 * in + z1;
      z1 = b1 * in - a1 * out + z2;
      z2 = b2 * in - a2 * out;
      x(t) = out;
    }
    state(i, 0) = z1;
    state(i, 1) = z2;
  }
}

// Delay values for which a unit step input is already in steady state.
Eigen::MatrixX2d step_state(const SosFilter& filter) {
  Eigen::MatrixX2d zi(filter.section_count(), 2);
  double level = 1.0;  // input level reaching this section
  for (Eigen::Index i = 0; i < filter.section_count(); ++i) {
    const auto s = filter.sections.row(i);
    const double b0 = s(0) / s(3), b1 = s(1) / s(3), b2 = s(2) / s(3);
    const double a1 = s(4) / s(3), a2 = s(5) / s(3);
    const double dc = (b0 + b1 + b2) / (1.0 + a1 + a2);
    const double y = dc * level;
    const double z2 = b2 * level - a2 * y;
    const double z1 = b1 * level - a1 * y + z2;
    zi(i, 0) = z1;
    zi(i, 1) = z2;
    level = y;
  }
  return zi;
}

}  // namespace

Eigen::VectorXd sosfilt(const SosFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd y = x;
  Eigen::MatrixX2d state = Eigen::MatrixX2d::Zero(filter.section_count(), 2);
  run_sections(filter, y, state);
  return y;
}

Eigen::VectorXd filtfilt(const SosFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index pad = filtfilt_padding(filter);
  const Eigen::Index n = x.size();
  if (n <= pad)
    throw DataError("signal of " + std::to_string(n) + " samples is too short for zero-phase filtering (needs > " +
                    std::to_string(pad) + ")");

  Eigen::VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) {
    ext(i) = 2.0 * x(0) - x(pad - i);
    ext(n + pad + i) = 2.0 * x(n - 1) - x(n - 2 - i);
  }
  ext.segment(pad, n) = x;

  const Eigen::MatrixX2d zi = step_state(filter);
  Eigen::MatrixX2d state = zi * ext(0);
  run_sections(filter, ext, state);
  ext.reverseInPlace();
  state = zi * ext(0);
  run_sections(filter, ext, state);
  ext.reverseInPlace();
  return ext.segment(pad, n);
}

}  // namespace hoseeg
