#include "hoseeg/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string_view>
#include <vector>

#include "hoseeg/error.hpp"
#include "hoseeg/text_io.hpp"

namespace hoseeg {

namespace {

template <std::size_t N>
std::array<Rgb, kPaletteLevels> interpolate(const std::array<Rgb, N>& anchors, bool cyclic) {
  std::array<Rgb, kPaletteLevels> out{};
  const int segments = cyclic ? static_cast<int>(N) : static_cast<int>(N) - 1;
  for (int i = 0; i < kPaletteLevels; ++i) {
    const int denom = cyclic ? kPaletteLevels : kPaletteLevels - 1;
    // position in units of anchor spacing, as an exact rational i * segments / denom
    const int num = i * segments;
    const int a = num / denom;
    const int rem = num % denom;
    const Rgb& lo = anchors[static_cast<std::size_t>(a) % N];
    const Rgb& hi = anchors[static_cast<std::size_t>(std::min(a + 1, cyclic ? a + 1 : segments)) % N];
    auto mix = [&](std::uint8_t x, std::uint8_t y) {
      return static_cast<std::uint8_t>((x * (denom - rem) + y * rem + denom / 2) / denom);
    };
    out[static_cast<std::size_t>(i)] = Rgb{mix(lo.r, hi.r), mix(lo.g, hi.g), mix(lo.b, hi.b)};
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string_view kind_title(GridKind kind) {
  switch (kind) {
    case GridKind::bispectrum: return "Bispectrum magnitude";
    case GridKind::cross_bispectrum: return "Cross-bispectrum magnitude";
    case GridKind::bicoherence: return "Bicoherence";
  }
  return "";
}

double cell_value(const SpectralGrid<double>& grid, Eigen::Index k1, Eigen::Index k2) {
  const auto v = grid.values(k1, k2);
  return grid.kind == GridKind::bicoherence ? v.real() : std::abs(v);
}

// Iso-line segments through a field sampled at cell centres (marching squares).
std::string iso_path(const Eigen::MatrixXd& field, double level, double x0, double y0, double cell) {
  const Eigen::Index n = field.rows();
  std::string d;
  // node (i, j) -> pixel centre; j grows upward on screen
  auto px = [&](double i) { return x0 + (i + 0.5) * cell; };
  auto py = [&](double j) { return y0 + (static_cast<double>(n) - 1.0 - j + 0.5) * cell; };
  auto lerp = [&](double a, double b) { return (level - a) / (b - a); };
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      const double v00 = field(i, j), v10 = field(i + 1, j), v11 = field(i + 1, j + 1), v01 = field(i, j + 1);
      const int code = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) | (v11 > level ? 4 : 0) | (v01 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const double fi = static_cast<double>(i), fj = static_cast<double>(j);
      // crossing points on the four edges: bottom, right, top, left
      const std::array<std::pair<double, double>, 4> e{{
          {fi + lerp(v00, v10), fj},
          {fi + 1.0, fj + lerp(v10, v11)},
          {fi + lerp(v01, v11), fj + 1.0},
          {fi, fj + lerp(v00, v01)},
      }};
      static constexpr std::array<std::array<int, 4>, 16> table{{
          {-1, -1, -1, -1}, {3, 0, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1},
          {1, 2, -1, -1},   {3, 0, 1, 2},   {0, 2, -1, -1}, {3, 2, -1, -1},
          {2, 3, -1, -1},   {2, 0, -1, -1}, {0, 1, 2, 3},   {2, 1, -1, -1},
          {1, 3, -1, -1},   {1, 0, -1, -1}, {0, 3, -1, -1}, {-1, -1, -1, -1},
      }};
      const auto& t = table[static_cast<std::size_t>(code)];
      for (int s = 0; s < 4 && t[static_cast<std::size_t>(s)] >= 0; s += 2) {
        const auto& a = e[static_cast<std::size_t>(t[static_cast<std::size_t>(s)])];
        const auto& b = e[static_cast<std::size_t>(t[static_cast<std::size_t>(s) + 1])];
        d += "M" + fmt(px(a.first)) + " " + fmt(py(a.second)) + "L" + fmt(px(b.first)) + " " + fmt(py(b.second));
      }
    }
  return d;
}

}  // namespace

const std::array<Rgb, kPaletteLevels>& sequential_palette() {
  static const auto palette = interpolate(
      std::array<Rgb, 10>{{{0x44, 0x01, 0x54}, {0x48, 0x28, 0x78}, {0x3e, 0x49, 0x89}, {0x31, 0x68, 0x8e},
                           {0x26, 0x82, 0x8e}, {0x1f, 0x9e, 0x89}, {0x35, 0xb7, 0x79}, {0x6e, 0xce, 0x58},
                           {0xb5, 0xde, 0x2b}, {0xfd, 0xe7, 0x25}}},
      false);
  return palette;
}

const std::array<Rgb, kPaletteLevels>& cyclic_palette() {
  static const auto palette = interpolate(
      std::array<Rgb, 8>{{{0xe2, 0xd9, 0xe2}, {0xa4, 0xbd, 0xcc}, {0x6a, 0x8c, 0xc0}, {0x5f, 0x4f, 0xa9},
                          {0x3f, 0x1a, 0x49}, {0x7b, 0x21, 0x40}, {0xb8, 0x5c, 0x44}, {0xd9, 0xa8, 0x88}}},
      true);
  return palette;
}

int quantize(double v, double lo, double hi) {
  if (!(hi > lo)) return 0;
  const double t = (v - lo) / (hi - lo);
  return std::clamp(static_cast<int>(std::floor(t * kPaletteLevels)), 0, kPaletteLevels - 1);
}

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::vector<Eigen::Index> display_bins(Eigen::Index nfft, double fs_hz, double limit_hz) {
  std::vector<std::pair<double, Eigen::Index>> f;
  const double df = fs_hz / static_cast<double>(nfft);
  for (Eigen::Index k = 0; k < nfft; ++k) {
    const double fk = static_cast<double>(k > nfft / 2 ? k - nfft : k) * df;
    if (std::abs(fk) <= limit_hz + 1e-9 * df) f.emplace_back(fk, k);
  }
  std::sort(f.begin(), f.end());
  std::vector<Eigen::Index> bins;
  for (const auto& p : f) bins.push_back(p.second);
  return bins;
}

std::string grid_csv(const SpectralGrid<double>& grid, double freq_limit_hz) {
  const auto bins = display_bins(grid.nfft(), grid.fs_hz, freq_limit_hz);
  const bool real_only = grid.kind == GridKind::bicoherence;
  std::string out = real_only ? "k1,k2,f1_hz,f2_hz,magnitude\n" : "k1,k2,f1_hz,f2_hz,real,imag\n";
  for (Eigen::Index k1 : bins)
    for (Eigen::Index k2 : bins) {
      out += std::to_string(k1) + "," + std::to_string(k2) + ",";
      text::append_number(out, grid.frequency(k1));
      out += ',';
      text::append_number(out, grid.frequency(k2));
      out += ',';
      const auto v = grid.values(k1, k2);
      text::append_number(out, v.real());
      if (!real_only) {
        out += ',';
        text::append_number(out, v.imag());
      }
      out += '\n';
    }
  return out;
}

RenderedGrid render_grid(const SpectralGrid<double>& grid, GridStyle style, double freq_limit_hz) {
  if (grid.nfft() == 0) throw DataError("cannot render an empty grid");
  if (!(freq_limit_hz > 0.0) || freq_limit_hz > grid.fs_hz / 2.0)
    throw ConfigError("frequency limit must lie in (0, fs/2]");

  RenderedGrid out;
  out.bins = display_bins(grid.nfft(), grid.fs_hz, freq_limit_hz);
  const auto n = static_cast<Eigen::Index>(out.bins.size());
  out.magnitude.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out.magnitude(i, j) = cell_value(grid, out.bins[static_cast<std::size_t>(i)], out.bins[static_cast<std::size_t>(j)]);
  const double lo = out.magnitude.minCoeff();
  const double hi = out.magnitude.maxCoeff();
  out.levels.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.levels(i, j) = quantize(out.magnitude(i, j), lo, hi);

  const auto& palette = sequential_palette();
  const double plot = 480.0, x0 = 70.0, y0 = 40.0;
  const double cell = plot / static_cast<double>(n);
  const double width = x0 + plot + 110.0, height = y0 + plot + 60.0;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + fmt(x0 + plot / 2) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\">" + std::string(kind_title(grid.kind)) + "</text>\n";

  if (style == GridStyle::heatmap) {
    svg += "<g shape-rendering=\"crispEdges\">\n";
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double x = x0 + static_cast<double>(i) * cell;
        const double y = y0 + static_cast<double>(n - 1 - j) * cell;
        svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(cell + 0.01) + "\" height=\"" +
               fmt(cell + 0.01) + "\" fill=\"" + hex(palette[static_cast<std::size_t>(out.levels(i, j))]) + "\"/>\n";
      }
    svg += "</g>\n";
  } else {
    constexpr int kIsoLines = 10;
    svg += "<g fill=\"none\" stroke-width=\"1.2\">\n";
    if (hi > lo)
      for (int l = 1; l < kIsoLines; ++l) {
        const double level = lo + (hi - lo) * l / kIsoLines;
        const std::string d = iso_path(out.magnitude, level, x0, y0, cell);
        if (d.empty()) continue;
        svg += "<path stroke=\"" + hex(palette[static_cast<std::size_t>(quantize(level, lo, hi))]) + "\" d=\"" + d +
               "\"/>\n";
      }
    svg += "</g>\n";
  }

  // frame, ticks every 10 Hz
  svg += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(plot) + "\" height=\"" + fmt(plot) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
  const double f_lo = grid.frequency(out.bins.front()), f_hi = grid.frequency(out.bins.back());
  const double span = f_hi - f_lo;
  auto pos = [&](double f) { return span > 0 ? (f - f_lo) / span : 0.5; };
  for (double f = std::ceil(f_lo / 10.0) * 10.0; f <= f_hi + 1e-9; f += 10.0) {
    const double x = x0 + cell / 2 + pos(f) * (plot - cell);
    const double y = y0 + plot - cell / 2 - pos(f) * (plot - cell);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y0 + plot) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(y0 + plot + 5) + "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y0 + plot + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + fmt(f) + "</text>\n";
    svg += "<line x1=\"" + fmt(x0 - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt(x0 - 8) + "\" y=\"" + fmt(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fmt(f) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(x0 + plot / 2) + "\" y=\"" + fmt(y0 + plot + 40) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">f1 (Hz)</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(y0 + plot / 2) + "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 " + fmt(y0 + plot / 2) + ")\">f2 (Hz)</text>\n";

  // colour bar
  const double bx = x0 + plot + 25.0, bh = plot / kPaletteLevels;
  for (int l = 0; l < kPaletteLevels; ++l)
    svg += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(y0 + plot - (l + 1) * bh) + "\" width=\"18\" height=\"" +
           fmt(bh + 0.01) + "\" fill=\"" + hex(palette[static_cast<std::size_t>(l)]) + "\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", hi);
  svg += "<text x=\"" + fmt(bx + 22) + "\" y=\"" + fmt(y0 + 10) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         buf + "</text>\n";
  std::snprintf(buf, sizeof buf, "%.3g", lo);
  svg += "<text x=\"" + fmt(bx + 22) + "\" y=\"" + fmt(y0 + plot) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         buf + "</text>\n";
  svg += "</svg>\n";

  out.svg = std::move(svg);
  out.csv = grid_csv(grid, freq_limit_hz);
  return out;
}

}  // namespace hoseeg
