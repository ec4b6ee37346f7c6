#pragma once

// Shared helpers for the test programs: naive reference transforms and
// scratch directories.

#include <Eigen/Dense>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

namespace testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* root = std::getenv("HOSEEG_TMP");
  std::filesystem::path p = root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() / "hoseeg_tests";
  p /= name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// O(n^2) DFT, X(k) = sum_t x(t) e^{-2 pi i k t / n}.
inline Eigen::VectorXcd naive_dft(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index t = 0; t < n; ++t)
      acc += x(t) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n));
    out(k) = acc;
  }
  return out;
}

/// Brute-force triple product over directly computed DFTs of consecutive
/// non-overlapping rectangular segments (no mean removal).
inline Eigen::MatrixXcd naive_bispectrum(const Eigen::VectorXd& x, Eigen::Index nfft, const Eigen::VectorXd* y = nullptr) {
  const Eigen::Index k = x.size() / nfft;
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(nfft, nfft);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::VectorXcd xr = naive_dft(x.segment(r * nfft, nfft));
    const Eigen::VectorXcd yr = y ? naive_dft(y->segment(r * nfft, nfft)) : xr;
    for (Eigen::Index k1 = 0; k1 < nfft; ++k1)
      for (Eigen::Index k2 = 0; k2 < nfft; ++k2) b(k1, k2) += xr(k1) * xr(k2) * std::conj(yr((k1 + k2) % nfft));
  }
  return b / static_cast<double>(k);
}

inline Eigen::VectorXd gaussian(Eigen::Index n, std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> d(0.0, sigma);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

}  // namespace testing
