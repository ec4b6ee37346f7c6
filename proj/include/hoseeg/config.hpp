#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hoseeg/cross_validation.hpp"
#include "hoseeg/features.hpp"
#include "hoseeg/filter.hpp"
#include "hoseeg/hos.hpp"
#include "hoseeg/topomap.hpp"

namespace hoseeg {

/// Every tunable of the pipeline as one flat key=value document.
struct RunConfig {
  std::uint64_t seed = 0;
  double fs_hz = 250.0;
  double epoch_seconds = kDefaultEpochSeconds;
  int trials_per_class = 50;

  FilterSpec filter;
  bool ica = true;
  int ica_max_iter = 200;
  double ica_tol = 1e-4;

  SegmentPlan plan;
  FeatureBand band;

  int cv_folds = 5;
  StandardizeMode standardize = StandardizeMode::train_fit;
  double svm_c = 1.0;
  std::optional<double> svm_gamma;
  double svm_tol = 1e-3;
  int rf_trees = 100;
  int rf_max_features = 0;
  double lda_ridge = 1e-4;

  double freq_limit_hz = 30.0;
  double topo_freq_hz = 14.0;
  std::vector<double> topo_times_s{2.0, 4.0};
  double topo_window_s = 1.0;
  TopoLayout layout = default_layout();

  CvOptions cv_options() const;
  TopoOptions topo_options() const;
};

/// Throws ConfigError naming the first key whose value is out of range.
void validate(const RunConfig& cfg);

/// Assigns one key. Throws ConfigError for unknown keys or unparsable values.
/// Electrodes are set with `electrode.<name> = x,y`; the first such key in a
/// document replaces the default layout.
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// `key = value` lines; `#` starts a comment. The result is validated.
RunConfig parse_run_config(std::string_view text);
RunConfig read_run_config(const std::filesystem::path& path);

/// Document that parses back to `cfg`.
std::string format_run_config(const RunConfig& cfg);

}  // namespace hoseeg
