#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hoseeg/hos.hpp"
#include "hoseeg/ingest.hpp"

namespace hoseeg {

inline constexpr int kFeaturesPerChannel = 10;

inline constexpr std::array<std::string_view, kFeaturesPerChannel> kFeatureNames{
    "mean_mag",          "max_mag",         "sum_mag",
    "bispectral_entropy", "max_bicoherence", "phase_coherence_real",
    "mean_phase_angle",  "phase_second_moment", "phase_entropy",
    "phase_bicoherence_real"};

inline constexpr int kPhaseHistogramBins = 16;

using ChannelFeatures = Eigen::Matrix<double, kFeaturesPerChannel, 1>;

/// The ten bispectral features of one channel over `region`:
///  amplitude: mean, max and sum of |B|, normalized entropy of |B|/sum|B|,
///             max bicoherence;
///  phase:     Re of the mean phasor, angle of the phasor sum, |mean e^{2i phi}|,
///             normalized 16-bin phase-histogram entropy, Re(sum B / sum |B|).
/// Exact-zero entries of B carry no phase and are left out of the phase
/// statistics; with no phase-bearing entries those features are 0.
ChannelFeatures channel_features(const SpectralGrid<double>& bispec, const SpectralGrid<double>& bicoh,
                                 std::span<const BinPair> region);

struct FeatureBand {
  double low_hz = 1.0;
  double high_hz = 40.0;
};

/// Trials x (channels * 10) feature table.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<Label> labels;
  std::vector<std::string> names;  // "<channel>_<feature>"

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

std::vector<std::string> feature_names(const std::vector<std::string>& channels);

/// Per trial and channel: segment, bispectrum and bicoherence, then the ten
/// features over the principal region restricted to `band`. Channels are
/// concatenated in recording order.
FeatureMatrix extract_features(const EpochSet& set, const SegmentPlan& plan = {}, FeatureBand band = {});

/// CSV: header `label,<name1>,...`, one row per trial.
void write_features(const FeatureMatrix& m, const std::filesystem::path& path);
std::string format_features(const FeatureMatrix& m);
FeatureMatrix read_features(const std::filesystem::path& path);

}  // namespace hoseeg
