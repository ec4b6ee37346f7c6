#include "hoseeg/hos.hpp"

namespace hoseeg {

std::vector<BinPair> principal_region(Eigen::Index nfft, double fs_hz, double low_hz, double high_hz) {
  if (nfft < 2 || !(fs_hz > 0.0)) throw ConfigError("principal region needs nfft >= 2 and fs > 0");
  if (!(low_hz >= 0.0 && low_hz < high_hz && high_hz <= fs_hz / 2.0))
    throw ConfigError("band must satisfy 0 <= low < high <= fs/2");
  const double df = fs_hz / static_cast<double>(nfft);
  const double eps = 1e-9 * df;
  auto inside = [&](Eigen::Index k) {
    const double f = static_cast<double>(k) * df;
    return f >= low_hz - eps && f <= high_hz + eps;
  };
  std::vector<BinPair> out;
  for (Eigen::Index k1 = 0; k1 <= nfft / 2; ++k1) {
    if (!inside(k1)) continue;
    for (Eigen::Index k2 = 0; k2 <= k1 && k1 + k2 <= nfft / 2; ++k2)
      if (inside(k2)) out.push_back({k1, k2});
  }
  if (out.empty()) throw DataError("bifrequency region is empty for the requested band");
  return out;
}

}  // namespace hoseeg
