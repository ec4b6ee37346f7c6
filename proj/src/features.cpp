#include "hoseeg/features.hpp"

#include <cmath>
#include <numbers>

#include "hoseeg/error.hpp"
#include "hoseeg/text_io.hpp"

namespace hoseeg {

namespace {

int phase_bin(double phi) {
  // bins of width 2pi/16 over (-pi, pi]
  const double width = 2.0 * std::numbers::pi / kPhaseHistogramBins;
  int b = static_cast<int>(std::ceil((phi + std::numbers::pi) / width)) - 1;
  return std::clamp(b, 0, kPhaseHistogramBins - 1);
}

double normalized_entropy(std::span<const double> weights, double total, double support) {
  if (!(total > 0.0) || support <= 1.0) return 0.0;
  double h = 0.0;
  for (double w : weights)
    if (w > 0.0) {
      const double p = w / total;
      h -= p * std::log(p);
    }
  return h / std::log(support);
}

}  // namespace

ChannelFeatures channel_features(const SpectralGrid<double>& bispec, const SpectralGrid<double>& bicoh,
                                 std::span<const BinPair> region) {
  if (region.empty()) throw DataError("feature region is empty");
  if (bispec.nfft() != bicoh.nfft() || bispec.fs_hz != bicoh.fs_hz)
    throw DataError("bispectrum and bicoherence grids differ in nfft or sampling rate");

  const double n_region = static_cast<double>(region.size());
  std::vector<double> mags;
  mags.reserve(region.size());
  double sum_mag = 0.0, max_mag = 0.0, max_coh = 0.0;
  std::complex<double> sum_b = 0.0, phasor = 0.0, phasor2 = 0.0;
  std::array<double, kPhaseHistogramBins> hist{};
  int phased = 0;

  for (const BinPair& p : region) {
    if (p.k1 < 0 || p.k2 < 0 || p.k1 >= bispec.nfft() || p.k2 >= bispec.nfft())
      throw DataError("region bin outside the grid");
    const std::complex<double> b = bispec.values(p.k1, p.k2);
    const double coh = bicoh.values(p.k1, p.k2).real();
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag()) || !std::isfinite(coh))
      throw DataError("non-finite grid value in feature region");
    const double m = std::abs(b);
    mags.push_back(m);
    sum_mag += m;
    max_mag = std::max(max_mag, m);
    max_coh = std::max(max_coh, coh);
    sum_b += b;
    if (b != std::complex<double>(0.0, 0.0)) {
      double phi = std::arg(b);
      if (phi <= -std::numbers::pi) phi = std::numbers::pi;
      phasor += std::polar(1.0, phi);
      phasor2 += std::polar(1.0, 2.0 * phi);
      hist[static_cast<std::size_t>(phase_bin(phi))] += 1.0;
      ++phased;
    }
  }

  ChannelFeatures f = ChannelFeatures::Zero();
  f(0) = sum_mag / n_region;
  f(1) = max_mag;
  f(2) = sum_mag;
  f(3) = normalized_entropy(mags, sum_mag, n_region);
  f(4) = max_coh;
  if (phased > 0) {
    const double n = static_cast<double>(phased);
    f(5) = phasor.real() / n;
    double angle = std::arg(phasor);
    if (angle <= -std::numbers::pi) angle = std::numbers::pi;
    f(6) = angle;
    f(7) = std::abs(phasor2) / n;
    f(8) = normalized_entropy(hist, n, kPhaseHistogramBins);
  }
  f(9) = sum_mag > 0.0 ? (sum_b / sum_mag).real() : 0.0;
  return f;
}

std::vector<std::string> feature_names(const std::vector<std::string>& channels) {
  std::vector<std::string> names;
  names.reserve(channels.size() * kFeaturesPerChannel);
  for (const auto& ch : channels)
    for (auto f : kFeatureNames) names.push_back(ch + "_" + std::string(f));
  return names;
}

FeatureMatrix extract_features(const EpochSet& set, const SegmentPlan& plan, FeatureBand band) {
  validate(set);
  const auto region = principal_region(plan.nfft, set.fs_hz, band.low_hz, band.high_hz);
  FeatureMatrix m;
  m.names = feature_names(set.channel_names);
  m.values.resize(static_cast<Eigen::Index>(set.size()), set.channels() * kFeaturesPerChannel);
  for (std::size_t t = 0; t < set.size(); ++t) {
    const Epoch& e = set.epochs[t];
    for (Eigen::Index c = 0; c < e.data.rows(); ++c) {
      const auto spectra = segment(e.data.row(c), plan, set.fs_hz);
      const ChannelFeatures f = channel_features(bispectrum(spectra), bicoherence(spectra), region);
      m.values.block<1, kFeaturesPerChannel>(static_cast<Eigen::Index>(t), c * kFeaturesPerChannel) = f.transpose();
    }
    m.labels.push_back(e.label);
  }
  return m;
}

std::string format_features(const FeatureMatrix& m) {
  if (static_cast<Eigen::Index>(m.names.size()) != m.cols() || static_cast<Eigen::Index>(m.labels.size()) != m.rows())
    throw DataError("feature matrix shape does not match its names/labels");
  std::string out = "label";
  for (const auto& n : m.names) out += "," + n;
  out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += to_string(m.labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out += ',';
      text::append_number(out, m.values(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_features(const FeatureMatrix& m, const std::filesystem::path& path) {
  text::write_file_atomic(path, format_features(m));
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  const std::string content = text::read_file(path);
  text::LineReader reader(content);
  std::string_view line;
  FeatureMatrix m;
  bool have_header = false;
  std::vector<double> values;
  while (reader.next(line)) {
    const std::size_t ln = reader.line_number();
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    auto fields = text::split(line);
    if (!have_header) {
      if (text::trim(fields.front()) != "label" || fields.size() < 2)
        throw ParseError("header must be 'label,<feature>,...'", ln);
      for (std::size_t i = 1; i < fields.size(); ++i) m.names.emplace_back(text::trim(fields[i]));
      have_header = true;
      continue;
    }
    if (fields.size() != m.names.size() + 1) throw ParseError("ragged feature row", ln);
    try {
      m.labels.push_back(parse_label(text::trim(fields[0])));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), ln, 1);
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = text::parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) throw ParseError("invalid feature value '" + std::string(fields[i]) + "'", ln, i + 1);
      values.push_back(*v);
    }
  }
  if (!have_header) throw ParseError("missing header row");
  if (m.labels.empty()) throw ParseError("feature file has no rows");
  m.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(m.labels.size()), static_cast<Eigen::Index>(m.names.size()));
  return m;
}

}  // namespace hoseeg
