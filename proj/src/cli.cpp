#include "hoseeg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "hoseeg/config.hpp"
#include "hoseeg/cross_validation.hpp"
#include "hoseeg/features.hpp"
#include "hoseeg/hos.hpp"
#include "hoseeg/ingest.hpp"
#include "hoseeg/preprocess.hpp"
#include "hoseeg/render.hpp"
#include "hoseeg/synth.hpp"
#include "hoseeg/text_io.hpp"
#include "hoseeg/topomap.hpp"

namespace hoseeg::cli {

namespace fs = std::filesystem;

namespace {

std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::config: return "config";
    case ErrorKind::data: return "data";
    case ErrorKind::convergence: return "convergence";
  }
  return "unknown";
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << "error kind=" << kind << ": " << one_line(message) << '\n';
}

// --config must be honoured before the flags bound to its fields are parsed.
RunConfig preload_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return read_run_config(args[i + 1]);
    if (args[i].starts_with("--config=")) return read_run_config(args[i].substr(9));
  }
  return RunConfig{};
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

void write_out(std::ostream& out, const fs::path& path, std::string_view content) {
  text::write_file_atomic(path, content);
  out << "wrote " << path.string() << '\n';
}

EpochSet filter_label(const EpochSet& set, const std::string& label) {
  if (label.empty()) return set;
  const Label want = parse_label(label);
  EpochSet out;
  out.channel_names = set.channel_names;
  out.fs_hz = set.fs_hz;
  for (const Epoch& e : set.epochs)
    if (e.label == want) out.epochs.push_back(e);
  if (out.epochs.empty()) throw DataError("no epochs carry label '" + label + "'");
  return out;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

struct Context {
  RunConfig cfg;
  std::string config_path;
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, Context& ctx, bool with_out = true) {
  sub->add_option("--config", ctx.config_path, "RunConfig file (key = value lines)");
  sub->add_option("--seed", ctx.cfg.seed, "Root random seed");
  if (with_out) sub->add_option("--out", ctx.out_dir, "Output directory")->capture_default_str();
}

void add_plan(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--nfft", cfg.plan.nfft, "Segment length (power of two)")->capture_default_str();
  sub->add_option("--overlap", cfg.plan.overlap, "Segment overlap fraction in [0, 1)")->capture_default_str();
  sub->add_option_function<std::string>(
         "--window",
         [&cfg](const std::string& v) { set_value(cfg, "window", v); }, "Segment taper: hann | rectangular")
      ->check(CLI::IsMember({"hann", "rectangular"}));
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
  bool continuous = false;
};

void cmd_simulate(Context& ctx, const SimulateArgs& a, std::ostream& out) {
  SynthDatasetSpec spec;
  spec.trials_per_class = ctx.cfg.trials_per_class;
  spec.fs_hz = ctx.cfg.fs_hz;
  spec.epoch_seconds = ctx.cfg.epoch_seconds;
  const fs::path dir = prepare_out(ctx.out_dir);
  const EpochSet set = synth_dataset(spec, ctx.cfg.seed);
  write_out(out, dir / "epochs.csv", format_epochs(set));
  write_out(out, dir / "manifest.json", synth_manifest(spec, ctx.cfg.seed));
  if (a.continuous) {
    const SynthSession s = synth_session(spec, ctx.cfg.seed);
    write_recording(s.recording, dir / "recording.csv");
    out << "wrote " << (dir / "recording.csv").string() << '\n';
    write_events(s.events, dir / "events.csv");
    out << "wrote " << (dir / "events.csv").string() << '\n';
  }
}

// preprocess -----------------------------------------------------------------

struct PreprocessArgs {
  std::string epochs, recording, events;
  std::vector<int> reject;
  bool no_ica = false;
  bool no_zero_phase = false;
};

void cmd_preprocess(Context& ctx, const PreprocessArgs& a, std::ostream& out, std::ostream& err) {
  EpochSet set;
  std::vector<Eigen::MatrixXd> baselines;
  if (!a.epochs.empty()) {
    if (!a.recording.empty() || !a.events.empty())
      throw ConfigError("give either --epochs or --recording with --events");
    set = read_epochs(a.epochs);
  } else {
    if (a.recording.empty() || a.events.empty())
      throw ConfigError("preprocess needs --epochs, or --recording together with --events");
    const Recording rec = read_recording(a.recording);
    const EventLog log = read_events(a.events);
    set = epoch_recording(rec, log, ctx.cfg.epoch_seconds);
    for (const BaselineWindow& w : trial_baselines(log)) {
      if (w.end > static_cast<std::size_t>(rec.length()))
        throw DataError("baseline interval runs past the end of the recording");
      baselines.push_back(rec.samples.middleCols(static_cast<Eigen::Index>(w.begin),
                                                 static_cast<Eigen::Index>(w.end - w.begin)));
    }
  }

  PreprocessOptions opt;
  opt.filter = ctx.cfg.filter;
  if (a.no_zero_phase) opt.filter.zero_phase = false;
  opt.run_ica = ctx.cfg.ica && !a.no_ica;
  opt.ica.max_iter = ctx.cfg.ica_max_iter;
  opt.ica.tol = ctx.cfg.ica_tol;
  opt.ica.seed = ctx.cfg.seed;
  opt.ica_reject = a.reject;
  const PreprocessResult r = preprocess(set, opt, baselines);
  if (!r.ica_warning.empty()) err << "warning: " << one_line(r.ica_warning) << '\n';

  const fs::path dir = prepare_out(ctx.out_dir);
  write_out(out, dir / "preprocessed.csv", format_epochs(r.epochs));
  if (r.ica) {
    nlohmann::ordered_json j;
    j["components"] = r.ica->components();
    j["iterations"] = r.ica->iterations;
    j["final_delta"] = r.ica->final_delta;
    j["converged"] = r.ica_warning.empty();
    j["rejected"] = a.reject;
    std::vector<double> kurt(r.ica->component_kurtosis.data(),
                             r.ica->component_kurtosis.data() + r.ica->component_kurtosis.size());
    j["component_kurtosis"] = kurt;
    write_out(out, dir / "ica.json", j.dump(2) + "\n");
  }
}

// bispec ---------------------------------------------------------------------

struct BispecArgs {
  std::string epochs;
  std::string channel = "C3";
  std::string cross;
  std::string label;
  int trial = 0;
  bool average_trials = false;
  std::string average = "complex";
  std::string kind = "bispectrum";
  std::string style = "heatmap";
};

SpectralGrid<double> trial_grid(const Epoch& e, Eigen::Index a, Eigen::Index b, bool cross, bool coherence,
                                const SegmentPlan& plan, double fs) {
  const auto sa = segment(e.data.row(a), plan, fs);
  if (coherence) return bicoherence(sa);
  if (!cross) return bispectrum(sa);
  return cross_bispectrum(sa, segment(e.data.row(b), plan, fs));
}

void cmd_bispec(Context& ctx, const BispecArgs& a, std::ostream& out) {
  const bool cross = !a.cross.empty();
  const bool coherence = a.kind == "bicoherence";
  if (cross && coherence) throw ConfigError("--kind bicoherence is not defined for a --cross pair");
  const EpochSet set = filter_label(read_epochs(a.epochs), a.label);
  validate(set);
  const Eigen::Index ca = set.channel_index(a.channel);
  const Eigen::Index cb = cross ? set.channel_index(a.cross) : ca;
  const SegmentPlan& plan = ctx.cfg.plan;

  SpectralGrid<double> grid;
  if (a.average_trials) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      SpectralGrid<double> g = trial_grid(set.epochs[i], ca, cb, cross, coherence, plan, set.fs_hz);
      if (a.average == "magnitude") g.values = g.values.cwiseAbs().cast<std::complex<double>>();
      if (i == 0) grid = std::move(g);
      else grid.values += g.values;
    }
    grid.values /= static_cast<double>(set.size());
  } else {
    if (a.trial < 0 || static_cast<std::size_t>(a.trial) >= set.size())
      throw ConfigError("--trial " + std::to_string(a.trial) + " is out of range (have " +
                        std::to_string(set.size()) + " epochs)");
    grid = trial_grid(set.epochs[static_cast<std::size_t>(a.trial)], ca, cb, cross, coherence, plan, set.fs_hz);
  }

  const GridStyle style = a.style == "contour" ? GridStyle::contour : GridStyle::heatmap;
  const RenderedGrid r = render_grid(grid, style, ctx.cfg.freq_limit_hz);
  const std::string tag = cross ? a.channel + "-" + a.cross : a.channel;
  const fs::path dir = prepare_out(ctx.out_dir);
  write_out(out, dir / ("grid_" + tag + ".csv"), r.csv);
  write_out(out, dir / ("grid_" + tag + ".svg"), r.svg);

  const auto region = principal_region(grid.nfft(), grid.fs_hz, ctx.cfg.band.low_hz, ctx.cfg.band.high_hz);
  const BinPair peak = argmax_magnitude(grid, region);
  out << "argmax k1=" << peak.k1 << " k2=" << peak.k2 << " f1_hz=" << text::format_number(grid.frequency(peak.k1))
      << " f2_hz=" << text::format_number(grid.frequency(peak.k2))
      << " magnitude=" << text::format_number(std::abs(grid.values(peak.k1, peak.k2))) << '\n';
}

// features -------------------------------------------------------------------

struct FeaturesArgs {
  std::string epochs;
};

void cmd_features(Context& ctx, const FeaturesArgs& a, std::ostream& out) {
  const EpochSet set = read_epochs(a.epochs);
  const FeatureMatrix m = extract_features(set, ctx.cfg.plan, ctx.cfg.band);
  const fs::path dir = prepare_out(ctx.out_dir);
  write_out(out, dir / "features.csv", format_features(m));
}

// classify -------------------------------------------------------------------

struct ClassifyArgs {
  std::string features;
  std::vector<std::string> tasks;
  std::vector<std::string> classifiers;
  bool shuffle = false;
};

void cmd_classify(Context& ctx, const ClassifyArgs& a, std::ostream& out) {
  FeatureMatrix m = read_features(a.features);
  if (a.shuffle) m = shuffle_labels(m, ctx.cfg.seed);
  std::vector<Task> tasks;
  for (const auto& t : a.tasks) tasks.push_back(parse_task(t));
  if (tasks.empty()) tasks.assign(kAllTasks.begin(), kAllTasks.end());
  std::vector<Classifier> clfs;
  for (const auto& c : a.classifiers) clfs.push_back(parse_classifier(c));
  if (clfs.empty()) clfs.assign(kAllClassifiers.begin(), kAllClassifiers.end());
  const CvReport report = run_cv(m, tasks, clfs, ctx.cfg.cv_options());
  const fs::path dir = prepare_out(ctx.out_dir);
  const std::string table = report_table(report);
  write_out(out, dir / "report.csv", report_csv(report));
  write_out(out, dir / "report.txt", table);
  out << table;
}

// topomap --------------------------------------------------------------------

struct TopomapArgs {
  std::string epochs;
  std::string label;
  std::string quantity = "both";
};

void cmd_topomap(Context& ctx, const TopomapArgs& a, std::ostream& out) {
  const EpochSet set = filter_label(read_epochs(a.epochs), a.label);
  std::vector<TopoQuantity> qs;
  if (a.quantity != "phase") qs.push_back(TopoQuantity::magnitude);
  if (a.quantity != "magnitude") qs.push_back(TopoQuantity::phase);
  const fs::path dir = prepare_out(ctx.out_dir);
  for (TopoQuantity q : qs)
    for (const TopoMap& m : topomap(set, ctx.cfg.layout, q, ctx.cfg.topo_options())) {
      const std::string stem = "topo_" + to_string(q) + "_" + time_tag(m.t_center_s) + "s";
      write_out(out, dir / (stem + ".svg"), m.svg);
      write_out(out, dir / (stem + ".csv"), m.csv);
    }
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return kIo;
    case ErrorKind::config: return kConfig;
    case ErrorKind::parse:
    case ErrorKind::data: return kData;
    case ErrorKind::convergence: return kConvergence;
  }
  return kData;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  try {
    ctx.cfg = preload_config(args);
  } catch (const Error& e) {
    report_error(err, kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  }
  RunConfig& cfg = ctx.cfg;

  CLI::App app{"Bispectral analysis of multichannel EEG epochs", "hoseeg"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic labelled epoch set");
  SimulateArgs sim_args;
  add_common(sim, ctx);
  sim->add_option("--trials-per-class", cfg.trials_per_class, "Trials per class")->capture_default_str();
  sim->add_flag("--continuous", sim_args.continuous, "Also write recording.csv and events.csv");

  auto* pre = app.add_subcommand("preprocess", "Detrend, band-pass, baseline-correct, z-score and ICA");
  PreprocessArgs pre_args;
  add_common(pre, ctx);
  pre->add_option("--epochs", pre_args.epochs, "Epoch CSV");
  pre->add_option("--recording", pre_args.recording, "Continuous recording CSV");
  pre->add_option("--events", pre_args.events, "Event log CSV");
  pre->add_option("--low-hz", cfg.filter.low_hz, "Band-pass lower edge")->capture_default_str();
  pre->add_option("--high-hz", cfg.filter.high_hz, "Band-pass upper edge")->capture_default_str();
  pre->add_option("--order", cfg.filter.order, "Butterworth prototype order")->capture_default_str();
  pre->add_flag("--no-zero-phase", pre_args.no_zero_phase, "Single forward pass instead of forward-backward");
  pre->add_option("--ica-reject", pre_args.reject, "Comma-separated ICA components to remove")->delimiter(',');
  pre->add_flag("--no-ica", pre_args.no_ica, "Skip ICA");

  auto* bis = app.add_subcommand("bispec", "Bispectrum, cross-bispectrum or bicoherence grid with a plot");
  BispecArgs bis_args;
  add_common(bis, ctx);
  add_plan(bis, cfg);
  bis->add_option("--epochs", bis_args.epochs, "Epoch CSV")->required();
  bis->add_option("--channel", bis_args.channel, "Channel")->capture_default_str();
  bis->add_option("--cross", bis_args.cross, "Second channel for the cross-bispectrum");
  bis->add_option("--label", bis_args.label, "Only epochs with this label")
      ->check(CLI::IsMember({"power", "precision", "none"}));
  bis->add_option("--trial", bis_args.trial, "Epoch index when not averaging")->capture_default_str();
  bis->add_flag("--average-trials", bis_args.average_trials, "Average the grid over all selected epochs");
  bis->add_option("--average", bis_args.average, "Trial averaging: complex | magnitude")
      ->check(CLI::IsMember({"complex", "magnitude"}))
      ->capture_default_str();
  bis->add_option("--kind", bis_args.kind, "bispectrum | bicoherence")
      ->check(CLI::IsMember({"bispectrum", "bicoherence"}))
      ->capture_default_str();
  bis->add_option("--style", bis_args.style, "heatmap | contour")
      ->check(CLI::IsMember({"heatmap", "contour"}))
      ->capture_default_str();
  bis->add_option("--freq-limit", cfg.freq_limit_hz, "Plotted range |f| <= limit (Hz)")->capture_default_str();
  bis->add_option("--band-low", cfg.band.low_hz, "Argmax search band lower edge")->capture_default_str();
  bis->add_option("--band-high", cfg.band.high_hz, "Argmax search band upper edge")->capture_default_str();

  auto* fea = app.add_subcommand("features", "Ten bispectral features per channel");
  FeaturesArgs fea_args;
  add_common(fea, ctx);
  add_plan(fea, cfg);
  fea->add_option("--epochs", fea_args.epochs, "Epoch CSV")->required();
  fea->add_option("--band-low", cfg.band.low_hz, "Principal region lower edge (Hz)")->capture_default_str();
  fea->add_option("--band-high", cfg.band.high_hz, "Principal region upper edge (Hz)")->capture_default_str();

  auto* cls = app.add_subcommand("classify", "Stratified k-fold accuracy of RF, SVM and LDA");
  ClassifyArgs cls_args;
  add_common(cls, ctx);
  cls->add_option("--features", cls_args.features, "Feature CSV")->required();
  cls->add_option("--k", cfg.cv_folds, "Folds")->capture_default_str();
  cls->add_option("--tasks", cls_args.tasks, "Comma-separated tasks (default: all)")->delimiter(',');
  cls->add_option("--classifiers", cls_args.classifiers, "Comma-separated rf,svm,lda (default: all)")
      ->delimiter(',');
  cls->add_option("--svm-c", cfg.svm_c, "SVM box constraint")->capture_default_str();
  cls->add_option_function<std::string>(
      "--svm-gamma", [&cfg](const std::string& v) { set_value(cfg, "svm_gamma", v); },
      "RBF width or auto");
  cls->add_option("--trees", cfg.rf_trees, "Random forest size")->capture_default_str();
  cls->add_option("--max-features", cfg.rf_max_features, "Features tried per split (0: sqrt d)")
      ->capture_default_str();
  cls->add_option("--lda-ridge", cfg.lda_ridge, "LDA covariance ridge (fraction of mean variance)")
      ->capture_default_str();
  cls->add_option_function<std::string>(
         "--standardize", [&cfg](const std::string& v) { set_value(cfg, "standardize", v); },
         "train: test rows use training statistics; literal: each fold scaled by itself")
      ->check(CLI::IsMember({"train", "literal"}));
  cls->add_flag("--shuffle-labels", cls_args.shuffle, "Permute labels first (chance-level control)");

  auto* top = app.add_subcommand("topomap", "Scalp maps of the diagonal bispectrum");
  TopomapArgs top_args;
  add_common(top, ctx);
  top->add_option("--epochs", top_args.epochs, "Epoch CSV")->required();
  top->add_option("--label", top_args.label, "Only epochs with this label")
      ->check(CLI::IsMember({"power", "precision", "none"}));
  top->add_option("--freq", cfg.topo_freq_hz, "Frequency f of the (f, f) bin (Hz)")->capture_default_str();
  top->add_option("--times", cfg.topo_times_s, "Comma-separated window centres (s)")->delimiter(',');
  top->add_option("--window", cfg.topo_window_s, "Window length (s)")->capture_default_str();
  top->add_option("--quantity", top_args.quantity, "magnitude | phase | both")
      ->check(CLI::IsMember({"magnitude", "phase", "both"}))
      ->capture_default_str();

  auto* def = app.add_subcommand("defaults", "Print the default RunConfig");
  add_common(def, ctx, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // --help on a subcommand surfaces here as CallForHelp through the parent.
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    report_error(err, "usage", e.what());
    return kUsage;
  } catch (const Error& e) {
    report_error(err, kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  }

  try {
    validate(cfg);
    if (sim->parsed()) cmd_simulate(ctx, sim_args, out);
    else if (pre->parsed()) cmd_preprocess(ctx, pre_args, out, err);
    else if (bis->parsed()) cmd_bispec(ctx, bis_args, out);
    else if (fea->parsed()) cmd_features(ctx, fea_args, out);
    else if (cls->parsed()) cmd_classify(ctx, cls_args, out);
    else if (top->parsed()) cmd_topomap(ctx, top_args, out);
    else if (def->parsed()) out << format_run_config(cfg);
  } catch (const Error& e) {
    report_error(err, kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kData;
  }
  return kOk;
}

}  // namespace hoseeg::cli
