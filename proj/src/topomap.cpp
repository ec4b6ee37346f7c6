#include "hoseeg/topomap.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include "hoseeg/error.hpp"
#include "hoseeg/render.hpp"
#include "hoseeg/text_io.hpp"

namespace hoseeg {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Cell centre of grid index i along an axis spanning [-1, 1].
double grid_coord(int i) { return -1.0 + (2.0 * i + 1.0) / kTopoGrid; }

}  // namespace

std::string to_string(TopoQuantity q) { return q == TopoQuantity::magnitude ? "magnitude" : "phase"; }

TopoLayout default_layout() {
  return TopoLayout{{
      {"Fz", 0.0, 0.40},
      {"C3", -0.40, 0.0},
      {"Cz", 0.0, 0.0},
      {"C4", 0.40, 0.0},
      {"Pz", 0.0, -0.40},
      {"PO7", -0.55, -0.62},
      {"Oz", 0.0, -0.80},
      {"PO8", 0.55, -0.62},
  }};
}

void validate(const TopoLayout& layout) {
  if (layout.electrodes.empty()) throw ConfigError("layout has no electrodes");
  std::set<std::string> names;
  for (const Electrode& e : layout.electrodes) {
    if (!names.insert(e.name).second) throw ConfigError("duplicate electrode '" + e.name + "'");
    if (e.x * e.x + e.y * e.y > 1.0) throw ConfigError("electrode '" + e.name + "' lies outside the unit disk");
  }
}

double idw(const TopoLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& values, double x, double y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < layout.electrodes.size(); ++i) {
    const Electrode& e = layout.electrodes[i];
    const double d2 = (x - e.x) * (x - e.x) + (y - e.y) * (y - e.y);
    if (d2 == 0.0) return values(static_cast<Eigen::Index>(i));
    const double w = 1.0 / d2;
    num += w * values(static_cast<Eigen::Index>(i));
    den += w;
  }
  return num / den;
}

double idw_phase(const TopoLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& phases, double x, double y) {
  double c = 0.0, s = 0.0;
  for (std::size_t i = 0; i < layout.electrodes.size(); ++i) {
    const Electrode& e = layout.electrodes[i];
    const double d2 = (x - e.x) * (x - e.x) + (y - e.y) * (y - e.y);
    const double phi = phases(static_cast<Eigen::Index>(i));
    if (d2 == 0.0) return phi;
    c += std::cos(phi) / d2;
    s += std::sin(phi) / d2;
  }
  double a = std::atan2(s, c);
  if (a <= -std::numbers::pi) a = std::numbers::pi;
  return a;
}

Eigen::VectorXcd diagonal_bispectrum(const Epoch& epoch, double fs_hz, double t_center_s, const TopoOptions& options) {
  const double half = options.window_s / 2.0;
  const auto begin = static_cast<Eigen::Index>(std::llround((t_center_s - half) * fs_hz));
  const auto len = static_cast<Eigen::Index>(std::llround(options.window_s * fs_hz));
  if (t_center_s - half < -1e-9 || begin < 0 || begin + len > epoch.data.cols())
    throw DataError("topomap window at " + fmt(t_center_s) + " s does not fit inside the epoch");
  SegmentPlan plan = options.plan;
  plan.zero_pad = true;
  if (len > plan.nfft) throw ConfigError("topomap window is longer than nfft");
  const Eigen::Index k = nearest_bin(options.f_hz, plan.nfft, fs_hz);
  if (2 * k >= plan.nfft) throw ConfigError("topomap frequency too high for nfft");
  Eigen::VectorXcd out(epoch.data.rows());
  for (Eigen::Index c = 0; c < epoch.data.rows(); ++c) {
    const auto s = segment(epoch.data.row(c).segment(begin, len), plan, fs_hz);
    const auto x = s.spectra.row(0);
    out(c) = x(k) * x(k) * std::conj(x(2 * k));  // single segment, so B(k, k) directly
  }
  return out;
}

Eigen::VectorXd channel_scalars(const EpochSet& set, const TopoLayout& layout, double t_center_s,
                                TopoQuantity quantity, const TopoOptions& options) {
  validate(set);
  validate(layout);
  std::vector<Eigen::Index> rows;
  for (const Electrode& e : layout.electrodes) rows.push_back(set.channel_index(e.name));
  Eigen::VectorXd mag_sum = Eigen::VectorXd::Zero(set.channels());
  Eigen::VectorXcd complex_sum = Eigen::VectorXcd::Zero(set.channels());
  for (const Epoch& e : set.epochs) {
    const Eigen::VectorXcd b = diagonal_bispectrum(e, set.fs_hz, t_center_s, options);
    mag_sum += b.cwiseAbs();
    complex_sum += b;
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    out(static_cast<Eigen::Index>(i)) = quantity == TopoQuantity::magnitude
                                            ? mag_sum(r) / static_cast<double>(set.size())
                                            : std::arg(complex_sum(r));
  }
  return out;
}

TopoMap render_topomap(const TopoLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& values,
                       TopoQuantity quantity, double t_center_s, const std::string& title) {
  validate(layout);
  if (values.size() != static_cast<Eigen::Index>(layout.electrodes.size()))
    throw DataError("one value per electrode is required");
  TopoMap m;
  m.quantity = quantity;
  m.t_center_s = t_center_s;
  m.channel_values = values;
  m.grid = Eigen::MatrixXd::Constant(kTopoGrid, kTopoGrid, std::numeric_limits<double>::quiet_NaN());

  m.csv = "x,y,value\n";
  for (int r = 0; r < kTopoGrid; ++r)
    for (int c = 0; c < kTopoGrid; ++c) {
      const double x = grid_coord(c), y = -grid_coord(r);
      if (x * x + y * y > 1.0) continue;
      const double v = quantity == TopoQuantity::magnitude ? idw(layout, values, x, y) : idw_phase(layout, values, x, y);
      m.grid(r, c) = v;
      text::append_number(m.csv, x);
      m.csv += ',';
      text::append_number(m.csv, y);
      m.csv += ',';
      text::append_number(m.csv, v);
      m.csv += '\n';
    }

  const bool phase = quantity == TopoQuantity::phase;
  const auto& palette = phase ? cyclic_palette() : sequential_palette();
  const double lo = phase ? -std::numbers::pi : values.minCoeff();
  const double hi = phase ? std::numbers::pi : values.maxCoeff();

  const double size = 384.0, x0 = 40.0, y0 = 50.0, cell = size / kTopoGrid;
  const double cx = x0 + size / 2, cy = y0 + size / 2, radius = size / 2;
  const double width = x0 + size + 100.0, height = y0 + size + 30.0;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
                    fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + fmt(cx) + "\" y=\"26\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">" +
         title + "</text>\n";
  svg += "<g shape-rendering=\"crispEdges\">\n";
  for (int r = 0; r < kTopoGrid; ++r)
    for (int c = 0; c < kTopoGrid; ++c) {
      const double v = m.grid(r, c);
      if (std::isnan(v)) continue;
      svg += "<rect x=\"" + fmt(x0 + c * cell) + "\" y=\"" + fmt(y0 + r * cell) + "\" width=\"" + fmt(cell + 0.01) +
             "\" height=\"" + fmt(cell + 0.01) + "\" fill=\"" +
             hex(palette[static_cast<std::size_t>(quantize(v, lo, hi))]) + "\"/>\n";
    }
  svg += "</g>\n";
  // head outline and nose
  svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(radius) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  svg += "<path d=\"M" + fmt(cx - 14) + " " + fmt(y0 + 2) + "L" + fmt(cx) + " " + fmt(y0 - 14) + "L" + fmt(cx + 14) +
         " " + fmt(y0 + 2) + "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  for (const Electrode& e : layout.electrodes) {
    const double ex = cx + e.x * radius, ey = cy - e.y * radius;
    svg += "<circle cx=\"" + fmt(ex) + "\" cy=\"" + fmt(ey) + "\" r=\"3\" fill=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt(ex) + "\" y=\"" + fmt(ey - 6) +
           "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" + e.name + "</text>\n";
  }
  const double bx = x0 + size + 30.0, bh = size / kPaletteLevels;
  for (int l = 0; l < kPaletteLevels; ++l)
    svg += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(y0 + size - (l + 1) * bh) + "\" width=\"16\" height=\"" +
           fmt(bh + 0.01) + "\" fill=\"" + hex(palette[static_cast<std::size_t>(l)]) + "\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", hi);
  svg += "<text x=\"" + fmt(bx + 20) + "\" y=\"" + fmt(y0 + 10) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         buf + "</text>\n";
  std::snprintf(buf, sizeof buf, "%.3g", lo);
  svg += "<text x=\"" + fmt(bx + 20) + "\" y=\"" + fmt(y0 + size) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
  svg += "</svg>\n";
  m.svg = std::move(svg);
  return m;
}

std::vector<TopoMap> topomap(const EpochSet& set, const TopoLayout& layout, TopoQuantity quantity,
                             const TopoOptions& options) {
  std::vector<TopoMap> maps;
  for (double t : options.t_centers_s) {
    const Eigen::VectorXd v = channel_scalars(set, layout, t, quantity, options);
    char title[96];
    std::snprintf(title, sizeof title, "Bispectrum %s at %.4g Hz, t = %.4g s",
                  quantity == TopoQuantity::magnitude ? "magnitude" : "phase", options.f_hz, t);
    maps.push_back(render_topomap(layout, v, quantity, t, title));
  }
  return maps;
}

}  // namespace hoseeg
