// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "feature_reference.hpp"
#include "hoseeg/cli.hpp"
#include "hoseeg/cross_validation.hpp"
#include "hoseeg/features.hpp"
#include "hoseeg/filter.hpp"
#include "hoseeg/forest.hpp"
#include "hoseeg/hos.hpp"
#include "hoseeg/lda.hpp"
#include "hoseeg/preprocess.hpp"
#include "hoseeg/standardizer.hpp"
#include "hoseeg/svm.hpp"
#include "hoseeg/synth.hpp"
#include "hoseeg/text_io.hpp"
#include "hoseeg/topomap.hpp"
#include "support.hpp"

using namespace hoseeg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

SegmentPlan rect_single(Eigen::Index nfft) {
  SegmentPlan p;
  p.nfft = nfft;
  p.overlap = 0.0;
  p.window = Taper::rectangular;
  p.remove_mean = false;
  return p;
}

// 1 -------------------------------------------------------------------------
Outcome bispectrum_oracle() {
  std::mt19937_64 rng(1001);
  const Eigen::VectorXd x = testing::gaussian(16, rng);
  const auto b = bispectrum(segment(x, rect_single(16), 1.0));
  const double diff = (b.values - testing::naive_bispectrum(x, 16)).cwiseAbs().maxCoeff();
  return {diff <= 1e-10, "max |diff| = " + num(diff)};
}

// 2 -------------------------------------------------------------------------
Outcome symmetries() {
  std::mt19937_64 rng(1002);
  bool swap_exact = true;
  double conj_worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto b = bispectrum(segment(testing::gaussian(1024, rng), SegmentPlan{}, 250.0)).values;
    const Eigen::Index n = b.rows();
    swap_exact = swap_exact && b == b.transpose();
    for (Eigen::Index k1 = 0; k1 < n; ++k1)
      for (Eigen::Index k2 = 0; k2 < n; ++k2)
        conj_worst = std::max(conj_worst, std::abs(b((n - k1) % n, (n - k2) % n) - std::conj(b(k1, k2))));
  }
  return {swap_exact && conj_worst <= 1e-10, std::string("100 signals, swap bit-exact ") +
                                                  (swap_exact ? "yes" : "no") + ", conj max |diff| = " +
                                                  num(conj_worst)};
}

// 3 -------------------------------------------------------------------------
Outcome cubic_scaling() {
  std::mt19937_64 rng(1003);
  const Eigen::VectorXd x = testing::gaussian(2048, rng);
  const auto s1 = segment(x, SegmentPlan{}, 250.0);
  const auto s2 = segment(Eigen::VectorXd(2.0 * x), SegmentPlan{}, 250.0);
  const Eigen::MatrixXcd b1 = bispectrum(s1).values, b2 = bispectrum(s2).values;
  const double rel = (b2 - 8.0 * b1).cwiseAbs().maxCoeff() / (8.0 * b1).cwiseAbs().maxCoeff();
  const double coh = (bicoherence(s2).values - bicoherence(s1).values).cwiseAbs().maxCoeff();
  return {rel <= 1e-9 && coh <= 1e-9, "bispectrum rel err = " + num(rel) + ", bicoherence |diff| = " + num(coh)};
}

// 4 -------------------------------------------------------------------------
Outcome qpc_discrimination() {
  QpcSpec spec;
  spec.f1_hz = 10.0;
  spec.f2_hz = 15.0;
  spec.snr_db = 20.0;
  SegmentPlan plan;
  plan.overlap = 0.0;
  spec.duration_s = static_cast<double>(64 * plan.nfft) / spec.fs_hz;
  const std::uint64_t seed = 2024;
  const auto sc = segment(qpc_signal(spec, seed), plan, spec.fs_hz);
  spec.coupled = false;
  const auto su = segment(qpc_signal(spec, seed), plan, spec.fs_hz);
  const Eigen::Index k1 = nearest_bin(10.0, plan.nfft, spec.fs_hz), k2 = nearest_bin(15.0, plan.nfft, spec.fs_hz);
  const Eigen::Index k3 = nearest_bin(25.0, plan.nfft, spec.fs_hz);
  const double bc = bicoherence(sc).values(k1, k2).real();
  const double bu = bicoherence(su).values(k1, k2).real();
  const Eigen::VectorXd pc = power_spectrum(sc), pu = power_spectrum(su);
  double worst = 0.0;
  for (Eigen::Index k : {k1, k2, k3}) worst = std::max(worst, std::abs(pc(k) - pu(k)) / pc(k));
  return {sc.segments() == 64 && bc >= 0.9 && bu <= 0.3 && worst < 0.10,
          "K = " + std::to_string(sc.segments()) + ", coupled b = " + num(bc) + ", uncoupled b = " + num(bu) +
              ", max PSD rel diff = " + num(worst)};
}

// 5 -------------------------------------------------------------------------
Outcome gaussian_suppression() {
  SegmentPlan plan;
  plan.overlap = 0.0;
  const auto region = principal_region(plan.nfft, 250.0, 0.0, 125.0);
  auto mean_mag = [&](Eigen::Index k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto b = bispectrum(segment(testing::gaussian(k * plan.nfft, rng), plan, 250.0));
    double s = 0.0;
    for (const BinPair& p : region) s += std::abs(b.values(p.k1, p.k2));
    return s / static_cast<double>(region.size());
  };
  const double m4 = mean_mag(4, 1005), m256 = mean_mag(256, 1005);
  return {m4 / m256 >= 3.0, "mean |B| K=4: " + num(m4) + ", K=256: " + num(m256) + ", ratio = " + num(m4 / m256)};
}

// 6 -------------------------------------------------------------------------
Outcome filter_contract() {
  const double fs = 250.0;
  const SosFilter f = design_bandpass(FilterSpec{1.0, 40.0, 5, true}, fs);
  const double lo_db = 20.0 * std::log10(std::abs(frequency_response(f, 1.0, fs)));
  const double hi_db = 20.0 * std::log10(std::abs(frequency_response(f, 40.0, fs)));
  auto sine = [fs](double hz, Eigen::Index n) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = std::sin(2.0 * std::numbers::pi * hz * i / fs);
    return x;
  };
  const Eigen::VectorXd s60 = sine(60.0, 3000);
  const Eigen::VectorXd y60 = filtfilt(f, s60);
  const double att = -20.0 * std::log10(y60.segment(500, 2000).norm() / s60.segment(500, 2000).norm());
  const Eigen::VectorXd s14 = sine(14.0, 3000);
  const Eigen::VectorXd y14 = filtfilt(f, s14);
  int lag = 0;
  double best = -1e300;
  for (int l = -25; l <= 25; ++l) {
    const double c = s14.segment(500, 2000).dot(y14.segment(500 + l, 2000));
    if (c > best) {
      best = c;
      lag = l;
    }
  }
  const bool pass = std::abs(lo_db + 3.0) <= 0.5 && std::abs(hi_db + 3.0) <= 0.5 && att >= 26.0 && lag == 0;
  return {pass, "edges " + num(lo_db) + " dB / " + num(hi_db) + " dB, 60 Hz attenuation " + num(att) +
                    " dB, 14 Hz lag " + std::to_string(lag) + " samples"};
}

// 7 -------------------------------------------------------------------------
Outcome ica_recovery() {
  const Eigen::Index n = 10000;
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::exponential_distribution<double> ex(1.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd s(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(0, i) = uni(rng);
    s(1, i) = (coin(rng) ? 1.0 : -1.0) * ex(rng);
    s(2, i) = std::sin(2.0 * std::numbers::pi * 3.0 * i / 250.0);
  }
  Eigen::Matrix3d a;
  a << 1.0, 0.6, -0.4, 0.3, 1.0, 0.5, -0.5, 0.2, 1.0;
  const Eigen::MatrixXd x = a * s;
  const IcaModel m = fit_ica(x, IcaOptions{200, 1e-4, 17});
  const Eigen::MatrixXd r = m.sources(x);
  auto corr = [](const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& q) {
    const Eigen::ArrayXd u = p.transpose().array() - p.mean(), v = q.transpose().array() - q.mean();
    return std::abs((u * v).sum() / std::sqrt(u.square().sum() * v.square().sum()));
  };
  double worst = 1.0;
  std::set<Eigen::Index> matched;
  for (Eigen::Index i = 0; i < 3; ++i) {
    double best = 0.0;
    Eigen::Index arg = 0;
    for (Eigen::Index j = 0; j < 3; ++j)
      if (corr(s.row(i), r.row(j)) > best) {
        best = corr(s.row(i), r.row(j));
        arg = j;
      }
    matched.insert(arg);
    worst = std::min(worst, best);
  }
  const double recon = (remove_components(x, m, {}) - x).cwiseAbs().maxCoeff();
  return {worst >= 0.95 && matched.size() == 3 && recon <= 1e-6,
          "min matched |corr| = " + num(worst) + ", distinct matches " + std::to_string(matched.size()) +
              ", reject-none error = " + num(recon)};
}

// 8 -------------------------------------------------------------------------
Outcome feature_oracle() {
  std::mt19937_64 rng(1008);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto region = principal_region(32, 32.0, 1.0, 16.0);
  auto random_grid = [&](double zeros) {
    SpectralGrid<double> b{Eigen::MatrixXcd(32, 32), 32.0, GridKind::bispectrum};
    SpectralGrid<double> c{Eigen::MatrixXcd(32, 32), 32.0, GridKind::bicoherence};
    const double scale = std::exp(3.0 * g(rng));
    for (Eigen::Index i = 0; i < 32 * 32; ++i) {
      b.values.data()[i] = u(rng) < zeros ? std::complex<double>{} : scale * std::complex<double>(g(rng), g(rng));
      c.values.data()[i] = u(rng);
    }
    return std::pair{b, c};
  };
  double oracle = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto [b, c] = random_grid(t % 5 == 0 ? 0.3 : 0.0);
    const ChannelFeatures f = channel_features(b, c, region);
    const auto ref = testing::reference_features(b, c, region);
    for (int i = 0; i < kFeaturesPerChannel; ++i) {
      const double r = ref[static_cast<std::size_t>(i)];
      oracle = std::max(oracle, std::abs(f(i) - r) / std::max(1.0, std::abs(r)));
    }
  }
  bool bounds = true;
  for (int t = 0; t < 1000; ++t) {
    const auto [b, c] = random_grid(t % 7 == 0 ? 0.5 : 0.0);
    const ChannelFeatures f = channel_features(b, c, region);
    bounds = bounds && f(3) >= 0.0 && f(3) <= 1.0 + 1e-12 && f(8) >= 0.0 && f(8) <= 1.0 + 1e-12 &&
             std::abs(f(5)) <= 1.0 + 1e-12 && std::abs(f(9)) <= 1.0 + 1e-12;
  }
  const Eigen::VectorXd x = testing::gaussian(1500, rng);
  const auto full = principal_region(256, 250.0, 1.0, 40.0);
  auto feats = [&](const Eigen::VectorXd& v) {
    const auto s = segment(v, SegmentPlan{}, 250.0);
    return channel_features(bispectrum(s), bicoherence(s), full);
  };
  const double inv = (feats(x).tail<7>() - feats(Eigen::VectorXd(6.0 * x)).tail<7>()).cwiseAbs().maxCoeff();
  return {oracle <= 1e-12 && bounds && inv <= 1e-9, "oracle max diff = " + num(oracle) + ", bounds " +
                                                        (bounds ? "hold" : "violated") +
                                                        " on 1000 grids, amplitude invariance diff = " + num(inv)};
}

// 9 -------------------------------------------------------------------------
Outcome classifier_sanity() {
  std::mt19937_64 rng(1009);
  Eigen::MatrixXd l(3, 3);
  l << 1.0, 0.0, 0.0, 0.5, 0.7, 0.0, -0.2, 0.3, 0.6;
  Eigen::VectorXd mu(3);
  mu << 1.2, -0.4, 0.7;
  const int per = 4000;
  Eigen::MatrixXd x(2 * per, 3);
  Eigen::VectorXi y(2 * per);
  for (int i = 0; i < 2 * per; ++i) {
    y(i) = i < per ? 0 : 1;
    x.row(i) = ((y(i) ? mu : Eigen::VectorXd::Zero(3)) + l * testing::gaussian(3, rng)).transpose();
  }
  const Eigen::VectorXd dir = lda_fit(x, y).direction(0, 1);
  const Eigen::VectorXd closed = (l * l.transpose()).ldlt().solve(mu);
  const double angle =
      std::acos(std::clamp(dir.dot(closed) / (dir.norm() * closed.norm()), -1.0, 1.0)) * 180.0 / std::numbers::pi;

  // separable blobs for the SVM
  Eigen::MatrixXd xs(120, 2);
  Eigen::VectorXi ys(120);
  for (int i = 0; i < 120; ++i) {
    ys(i) = i < 60 ? -1 : 1;
    xs.row(i) = (0.5 * testing::gaussian(2, rng)).transpose();
    xs(i, 0) += 2.5 * ys(i);
  }
  const double gamma = 0.5, c = 10.0;
  const BinaryMachine m = svm_fit_binary(xs, ys, gamma, c, 1e-3, 200000);
  const double kkt = max_kkt_violation(m, xs, ys, gamma, c);
  const Eigen::VectorXd f = m.decision(xs, gamma);
  int correct = 0;
  for (int i = 0; i < 120; ++i) correct += (f(i) > 0) == (ys(i) > 0);
  const double svm_acc = correct / 120.0;

  auto xor_set = [&](int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::pair<Eigen::MatrixXd, Eigen::VectorXi> d{Eigen::MatrixXd(n, 2), Eigen::VectorXi(n)};
    for (int i = 0; i < n; ++i) {
      double p = u(rng), q = u(rng);
      p += p > 0 ? 0.1 : -0.1;
      q += q > 0 ? 0.1 : -0.1;
      d.first(i, 0) = p;
      d.first(i, 1) = q;
      d.second(i) = (p > 0) != (q > 0);
    }
    return d;
  };
  const auto train = xor_set(400), test = xor_set(400);
  const ForestModel fa = forest_fit(train.first, train.second, ForestOptions{100, 0, 21});
  const ForestModel fb = forest_fit(train.first, train.second, ForestOptions{100, 0, 21});
  const Eigen::VectorXi pa = forest_predict(fa, test.first);
  const double rf_acc = static_cast<double>((pa.array() == test.second.array()).count()) / 400.0;
  const bool deterministic = pa == forest_predict(fb, test.first);
  return {angle <= 2.0 && kkt <= 1e-3 && svm_acc == 1.0 && rf_acc >= 0.95 && deterministic,
          "LDA angle = " + num(angle) + " deg, SVM KKT = " + num(kkt) + ", SVM train acc = " + num(svm_acc) +
              ", RF XOR acc = " + num(rf_acc) + (deterministic ? ", RF deterministic" : ", RF not deterministic")};
}

// 10 ------------------------------------------------------------------------
Outcome cv_protocol() {
  const EpochSet set = synth_dataset(SynthDatasetSpec{}, 11);
  Eigen::VectorXi y(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) y(static_cast<Eigen::Index>(i)) = static_cast<int>(set.epochs[i].label);
  const auto folds = stratified_kfold(y, 5, 11);
  bool ok = folds.size() == 5;
  std::vector<int> seen(set.size(), 0);
  std::string counts;
  for (const Fold& f : folds) {
    std::set<Eigen::Index> tr(f.train.begin(), f.train.end());
    std::array<int, 3> c{};
    for (Eigen::Index i : f.test) {
      ok = ok && tr.count(i) == 0;
      ++seen[static_cast<std::size_t>(i)];
      ++c[static_cast<std::size_t>(y(i))];
    }
    ok = ok && tr.size() + f.test.size() == set.size() && c == std::array<int, 3>{10, 10, 10};
    counts += (counts.empty() ? "" : " ") + std::to_string(c[0]) + "/" + std::to_string(c[1]) + "/" +
              std::to_string(c[2]);
  }
  for (int s : seen) ok = ok && s == 1;

  std::mt19937_64 rng(1010);
  Eigen::MatrixXd x(150, 6);
  for (Eigen::Index i = 0; i < 150; ++i) x.row(i) = testing::gaussian(6, rng).transpose();
  const Fold& f0 = folds[0];
  auto train_stats = [&](const Eigen::MatrixXd& data) {
    Eigen::MatrixXd t(static_cast<Eigen::Index>(f0.train.size()), data.cols());
    for (std::size_t i = 0; i < f0.train.size(); ++i) t.row(static_cast<Eigen::Index>(i)) = data.row(f0.train[i]);
    return fit_standardizer(t);
  };
  const Standardizer before = train_stats(x);
  Eigen::MatrixXd perturbed = x;
  for (Eigen::Index i : f0.test) perturbed.row(i).array() += 1e3;
  const Standardizer after = train_stats(perturbed);
  const bool no_leak = before.means == after.means && before.stds == after.stds;
  return {ok && no_leak, "per-fold test counts " + counts + (no_leak ? ", standardizer unchanged by test rows"
                                                                     : ", standardizer moved with test rows")};
}

// 11 / 12 / 13: CLI pipeline ------------------------------------------------

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::pair<std::string, std::string>, double> report_means(const fs::path& csv) {
  std::map<std::pair<std::string, std::string>, double> m;
  const std::string content = text::read_file(csv);
  text::LineReader reader(content);
  std::string_view line;
  reader.next(line);  // header
  while (reader.next(line)) {
    const auto f = text::split(line, ',');
    m[{std::string(f[0]), std::string(f[1])}] = *text::parse_double(f.back());
  }
  return m;
}

Outcome end_to_end(const fs::path& dir) {
  const std::string d = dir.string();
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"simulate", "--seed", "11", "--continuous", "--out", d},
           {"preprocess", "--recording", d + "/recording.csv", "--events", d + "/events.csv", "--seed", "11", "--out", d},
           {"features", "--epochs", d + "/preprocessed.csv", "--out", d},
           {"classify", "--features", d + "/features.csv", "--seed", "11", "--out", d},
           {"classify", "--features", d + "/features.csv", "--seed", "11", "--shuffle-labels", "--out", d + "/control"}}) {
    const CliRun r = cli_run(args);
    if (r.code != 0) return {false, args[0] + " failed (" + std::to_string(r.code) + "): " + r.err};
  }
  const auto real = report_means(dir / "report.csv");
  const auto control = report_means(dir / "control/report.csv");
  const double svm = real.at({"multiclass", "SVM"}), rf = real.at({"multiclass", "RF"});
  double margin = 1e9;
  for (const auto& [key, v] : real) margin = std::min(margin, v - control.at(key));

  const std::string table = text::read_file(dir / "report.txt");
  bool structure = real.size() == 12;
  for (Task t : kAllTasks) structure = structure && table.find(std::string(display_name(t))) != std::string::npos;
  int fold_rows = 0;
  bool mean_row = false;
  std::istringstream in(table);
  for (std::string line; std::getline(in, line);) {
    fold_rows += line.starts_with("Fold");
    if (line.starts_with("Mean")) {
      std::istringstream cells(line.substr(4));
      int values = 0;
      for (std::string c; cells >> c;) values += c != "|";
      mean_row = values == 12;
    }
  }
  structure = structure && fold_rows == 5 && mean_row;
  return {svm >= 0.90 && rf >= 0.90 && margin >= 0.30 && structure,
          "multiclass mean SVM = " + num(svm) + ", RF = " + num(rf) + ", min margin over shuffled control = " +
              num(margin) + (structure ? ", report has 4 tasks x 3 classifiers with a Mean row" : ", report malformed")};
}

Outcome magnitude_gap() {
  // Judged after detrending and band-passing. The z-scored ratio is reported alongside:
  // unit variance per epoch removes the amplitude difference the gap is made of.
  const EpochSet set = synth_dataset(SynthDatasetSpec{}, 11);
  const SosFilter filter = design_bandpass(FilterSpec{}, set.fs_hz);
  const auto region = principal_region(256, set.fs_hz, 1.0, 40.0);
  std::map<Label, std::array<double, 2>> filtered_sum, scored_sum;
  auto accumulate = [&](std::map<Label, std::array<double, 2>>& acc, const Epoch& e) {
    for (Eigen::Index c = 0; c < e.data.rows(); ++c) {
      const auto b = bispectrum(segment(e.data.row(c), SegmentPlan{}, set.fs_hz));
      double s = 0.0;
      for (const BinPair& p : region) s += std::abs(b.values(p.k1, p.k2));
      acc[e.label][0] += s / static_cast<double>(region.size());
      acc[e.label][1] += 1.0;
    }
  };
  for (const Epoch& e : set.epochs) {
    const Epoch filtered = apply_filter(detrend(e), filter, true);
    accumulate(filtered_sum, filtered);
    accumulate(scored_sum, zscore(filtered));
  }
  auto ratio = [](std::map<Label, std::array<double, 2>>& acc, Label l) {
    return (acc[l][0] / acc[l][1]) / (acc[Label::none][0] / acc[Label::none][1]);
  };
  const double rp = ratio(filtered_sum, Label::power), rq = ratio(filtered_sum, Label::precision);
  return {rp >= 5.0 && rq >= 5.0, "power / none = " + num(rp) + ", precision / none = " + num(rq) +
                                      "; after z-scoring " + num(ratio(scored_sum, Label::power)) + " and " +
                                      num(ratio(scored_sum, Label::precision))};
}

Outcome rendering_determinism(const fs::path& dir) {
  const std::string d = dir.string();
  if (cli_run({"simulate", "--seed", "11", "--trials-per-class", "5", "--out", d}).code != 0)
    return {false, "simulate failed"};
  for (const char* run : {"run1", "run2"}) {
    const std::string out = d + "/" + run;
    if (cli_run({"bispec", "--epochs", d + "/epochs.csv", "--channel", "C3", "--average-trials", "--seed", "11", "--out", out}).code != 0 ||
        cli_run({"bispec", "--epochs", d + "/epochs.csv", "--channel", "C3", "--cross", "C4", "--style", "contour", "--seed", "11", "--out", out}).code != 0 ||
        cli_run({"topomap", "--epochs", d + "/epochs.csv", "--seed", "11", "--out", out}).code != 0)
      return {false, "bispec/topomap failed"};
  }
  int files = 0;
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(dir / "run1")) {
    ++files;
    identical = identical && fs::exists(dir / "run2" / entry.path().filename()) &&
                text::read_file(entry.path()) == text::read_file(dir / "run2" / entry.path().filename());
  }

  const EpochSet set = read_epochs(dir / "epochs.csv");
  const TopoLayout layout = default_layout();
  bool exact = true;
  for (TopoQuantity q : {TopoQuantity::magnitude, TopoQuantity::phase})
    for (const TopoMap& m : topomap(set, layout, q)) {
      for (std::size_t i = 0; i < layout.electrodes.size(); ++i) {
        const Electrode& e = layout.electrodes[i];
        const double v = q == TopoQuantity::magnitude ? idw(layout, m.channel_values, e.x, e.y)
                                                      : idw_phase(layout, m.channel_values, e.x, e.y);
        exact = exact && v == m.channel_values(static_cast<Eigen::Index>(i));
      }
    }
  return {identical && files == 12 && exact, std::to_string(files) + " output files " +
                                                 (identical ? "byte-identical" : "differ") +
                                                 " across runs; topomap " + (exact ? "exact" : "not exact") +
                                                 " at electrodes"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "hoseeg_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch / "e2e");
  fs::create_directories(scratch / "render");

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bispectrum oracle equivalence", bispectrum_oracle},
      {"bispectrum symmetries", symmetries},
      {"cubic scaling", cubic_scaling},
      {"QPC discrimination", qpc_discrimination},
      {"Gaussian suppression", gaussian_suppression},
      {"filter contract", filter_contract},
      {"FastICA recovery", ica_recovery},
      {"feature oracle", feature_oracle},
      {"classifier sanity", classifier_sanity},
      {"CV protocol", cv_protocol},
      {"end-to-end seeded run", [&] { return end_to_end(scratch / "e2e"); }},
      {"magnitude gap", magnitude_gap},
      {"rendering determinism", [&] { return rendering_determinism(scratch / "render"); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
