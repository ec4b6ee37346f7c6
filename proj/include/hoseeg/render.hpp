#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>

#include "hoseeg/hos.hpp"

namespace hoseeg {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr int kPaletteLevels = 64;

/// Sequential (dark blue -> yellow) and cyclic (for phase) 64-level palettes.
const std::array<Rgb, kPaletteLevels>& sequential_palette();
const std::array<Rgb, kPaletteLevels>& cyclic_palette();

/// Palette level of `v` on [lo, hi]; 0 when the range collapses.
int quantize(double v, double lo, double hi);

std::string hex(Rgb c);

enum class GridStyle { heatmap, contour };

struct RenderedGrid {
  std::string svg;
  std::string csv;
  /// Display bins along each axis, ascending signed frequency.
  std::vector<Eigen::Index> bins;
  /// levels(i, j): palette level of the cell at (f1 = bins[i], f2 = bins[j]).
  Eigen::MatrixXi levels;
  Eigen::MatrixXd magnitude;
};

/// Bins whose |signed frequency| is within `limit_hz`, ordered by frequency.
std::vector<Eigen::Index> display_bins(Eigen::Index nfft, double fs_hz, double limit_hz);

/// Heatmap or iso-line rendering of |values| over the symmetric range
/// [-limit, limit]^2, with a CSV twin of exactly the cells drawn.
/// Throws DataError on an empty grid, ConfigError when limit > fs/2.
RenderedGrid render_grid(const SpectralGrid<double>& grid, GridStyle style, double freq_limit_hz);

/// Full-plane CSV: k1,k2,f1_hz,f2_hz,real,imag (bispectra) or
/// k1,k2,f1_hz,f2_hz,magnitude (bicoherence), restricted to |f| <= limit.
std::string grid_csv(const SpectralGrid<double>& grid, double freq_limit_hz);

}  // namespace hoseeg
