#include "hoseeg/config.hpp"

#include <cmath>

#include "hoseeg/error.hpp"
#include "hoseeg/text_io.hpp"

namespace hoseeg {

namespace {

double as_double(std::string_view key, std::string_view v) {
  if (const auto d = text::parse_double(v)) return *d;
  throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
}

long long as_integer(std::string_view key, std::string_view v) {
  if (const auto i = text::parse_integer(v)) return *i;
  throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> as_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (const auto& part : text::split(v, ',')) out.push_back(as_double(key, text::trim(part)));
  return out;
}

void require(bool ok, std::string_view key, std::string_view what) {
  if (!ok) throw ConfigError(std::string(key) + " " + std::string(what));
}

std::string number(double v) { return text::format_number(v); }

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + number(v[i]);
  return s;
}

}  // namespace

CvOptions RunConfig::cv_options() const {
  CvOptions o;
  o.k = cv_folds;
  o.seed = seed;
  o.standardize = standardize;
  o.lda_ridge = lda_ridge;
  o.svm.c = svm_c;
  o.svm.gamma = svm_gamma;
  o.svm.tol = svm_tol;
  o.n_trees = rf_trees;
  o.max_features = rf_max_features;
  return o;
}

TopoOptions RunConfig::topo_options() const {
  TopoOptions o;
  o.f_hz = topo_freq_hz;
  o.t_centers_s = topo_times_s;
  o.window_s = topo_window_s;
  o.plan = plan;
  return o;
}

void validate(const RunConfig& c) {
  require(c.fs_hz > 0.0, "fs_hz", "must be positive");
  require(c.epoch_seconds > 0.0, "epoch_seconds", "must be positive");
  require(c.trials_per_class >= 1, "trials_per_class", "must be >= 1");
  require(c.filter.low_hz > 0.0 && c.filter.low_hz < c.filter.high_hz, "filter_low_hz", "must lie in (0, filter_high_hz)");
  require(c.filter.high_hz < c.fs_hz / 2.0, "filter_high_hz", "must lie below fs/2");
  require(c.filter.order >= 1 && c.filter.order <= 12, "filter_order", "must lie in [1, 12]");
  require(c.ica_max_iter >= 1, "ica_max_iter", "must be >= 1");
  require(c.ica_tol > 0.0, "ica_tol", "must be positive");
  try {
    validate(c.plan);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("nfft/overlap: ") + e.what());
  }
  require(c.band.low_hz >= 0.0 && c.band.low_hz < c.band.high_hz, "band_low_hz", "must lie in [0, band_high_hz)");
  require(c.band.high_hz <= c.fs_hz / 2.0, "band_high_hz", "must not exceed fs/2");
  require(c.cv_folds >= 2, "cv_folds", "must be >= 2");
  require(c.svm_c > 0.0, "svm_c", "must be positive");
  require(!c.svm_gamma || *c.svm_gamma > 0.0, "svm_gamma", "must be positive or auto");
  require(c.svm_tol > 0.0, "svm_tol", "must be positive");
  require(c.rf_trees >= 1, "rf_trees", "must be >= 1");
  require(c.rf_max_features >= 0, "rf_max_features", "must be >= 0 (0 selects sqrt(d))");
  require(c.lda_ridge >= 0.0, "lda_ridge", "must be non-negative");
  require(c.freq_limit_hz > 0.0 && c.freq_limit_hz <= c.fs_hz / 2.0, "freq_limit_hz", "must lie in (0, fs/2]");
  require(c.topo_freq_hz > 0.0 && c.topo_freq_hz < c.fs_hz / 4.0, "topo_freq_hz", "must lie in (0, fs/4)");
  require(!c.topo_times_s.empty(), "topo_times_s", "must list at least one time");
  require(c.topo_window_s > 0.0, "topo_window_s", "must be positive");
  validate(c.layout);
}

void set_value(RunConfig& c, std::string_view key, std::string_view v) {
  if (key == "seed") {
    const long long s = as_integer(key, v);
    require(s >= 0, key, "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "fs_hz") c.fs_hz = as_double(key, v);
  else if (key == "epoch_seconds") c.epoch_seconds = as_double(key, v);
  else if (key == "trials_per_class") c.trials_per_class = static_cast<int>(as_integer(key, v));
  else if (key == "filter_low_hz") c.filter.low_hz = as_double(key, v);
  else if (key == "filter_high_hz") c.filter.high_hz = as_double(key, v);
  else if (key == "filter_order") c.filter.order = static_cast<int>(as_integer(key, v));
  else if (key == "zero_phase") c.filter.zero_phase = as_bool(key, v);
  else if (key == "ica") c.ica = as_bool(key, v);
  else if (key == "ica_max_iter") c.ica_max_iter = static_cast<int>(as_integer(key, v));
  else if (key == "ica_tol") c.ica_tol = as_double(key, v);
  else if (key == "nfft") c.plan.nfft = static_cast<Eigen::Index>(as_integer(key, v));
  else if (key == "overlap") c.plan.overlap = as_double(key, v);
  else if (key == "window") {
    if (v == "hann") c.plan.window = Taper::hann;
    else if (v == "rectangular") c.plan.window = Taper::rectangular;
    else throw ConfigError("window: expected hann or rectangular, got '" + std::string(v) + "'");
  } else if (key == "band_low_hz") c.band.low_hz = as_double(key, v);
  else if (key == "band_high_hz") c.band.high_hz = as_double(key, v);
  else if (key == "cv_folds") c.cv_folds = static_cast<int>(as_integer(key, v));
  else if (key == "standardize") {
    if (v == "train") c.standardize = StandardizeMode::train_fit;
    else if (v == "literal") c.standardize = StandardizeMode::literal;
    else throw ConfigError("standardize: expected train or literal, got '" + std::string(v) + "'");
  } else if (key == "svm_c") c.svm_c = as_double(key, v);
  else if (key == "svm_gamma") {
    if (v == "auto") c.svm_gamma.reset();
    else c.svm_gamma = as_double(key, v);
  } else if (key == "svm_tol") c.svm_tol = as_double(key, v);
  else if (key == "rf_trees") c.rf_trees = static_cast<int>(as_integer(key, v));
  else if (key == "rf_max_features") c.rf_max_features = static_cast<int>(as_integer(key, v));
  else if (key == "lda_ridge") c.lda_ridge = as_double(key, v);
  else if (key == "freq_limit_hz") c.freq_limit_hz = as_double(key, v);
  else if (key == "topo_freq_hz") c.topo_freq_hz = as_double(key, v);
  else if (key == "topo_times_s") c.topo_times_s = as_list(key, v);
  else if (key == "topo_window_s") c.topo_window_s = as_double(key, v);
  else if (key.starts_with("electrode.")) {
    const std::string name(key.substr(10));
    require(!name.empty(), key, "needs an electrode name");
    const auto xy = as_list(key, v);
    require(xy.size() == 2, key, "expects x,y");
    auto& es = c.layout.electrodes;
    bool found = false;
    for (auto& e : es)
      if (e.name == name) {
        e.x = xy[0];
        e.y = xy[1];
        found = true;
      }
    if (!found) es.push_back(Electrode{name, xy[0], xy[1]});
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_run_config(std::string_view content) {
  RunConfig c;
  bool custom_layout = false;
  std::size_t line_no = 0;
  for (std::string_view rest = content; !rest.empty();) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    if (key.starts_with("electrode.") && !custom_layout) {
      c.layout.electrodes.clear();
      custom_layout = true;
    }
    try {
      set_value(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate(c);
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) { return parse_run_config(text::read_file(path)); }

std::string format_run_config(const RunConfig& c) {
  std::string s;
  auto kv = [&s](std::string_view k, const std::string& v) {
    s += k;
    s += " = ";
    s += v;
    s += '\n';
  };
  kv("seed", std::to_string(c.seed));
  kv("fs_hz", number(c.fs_hz));
  kv("epoch_seconds", number(c.epoch_seconds));
  kv("trials_per_class", std::to_string(c.trials_per_class));
  kv("filter_low_hz", number(c.filter.low_hz));
  kv("filter_high_hz", number(c.filter.high_hz));
  kv("filter_order", std::to_string(c.filter.order));
  kv("zero_phase", c.filter.zero_phase ? "true" : "false");
  kv("ica", c.ica ? "true" : "false");
  kv("ica_max_iter", std::to_string(c.ica_max_iter));
  kv("ica_tol", number(c.ica_tol));
  kv("nfft", std::to_string(c.plan.nfft));
  kv("overlap", number(c.plan.overlap));
  kv("window", c.plan.window == Taper::hann ? "hann" : "rectangular");
  kv("band_low_hz", number(c.band.low_hz));
  kv("band_high_hz", number(c.band.high_hz));
  kv("cv_folds", std::to_string(c.cv_folds));
  kv("standardize", c.standardize == StandardizeMode::train_fit ? "train" : "literal");
  kv("svm_c", number(c.svm_c));
  kv("svm_gamma", c.svm_gamma ? number(*c.svm_gamma) : "auto");
  kv("svm_tol", number(c.svm_tol));
  kv("rf_trees", std::to_string(c.rf_trees));
  kv("rf_max_features", std::to_string(c.rf_max_features));
  kv("lda_ridge", number(c.lda_ridge));
  kv("freq_limit_hz", number(c.freq_limit_hz));
  kv("topo_freq_hz", number(c.topo_freq_hz));
  kv("topo_times_s", list(c.topo_times_s));
  kv("topo_window_s", number(c.topo_window_s));
  for (const Electrode& e : c.layout.electrodes) kv("electrode." + e.name, number(e.x) + "," + number(e.y));
  return s;
}

}  // namespace hoseeg
