#include "hoseeg/cross_validation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <numeric>

#include "hoseeg/error.hpp"
#include "hoseeg/lda.hpp"
#include "hoseeg/random.hpp"
#include "hoseeg/standardizer.hpp"
#include "hoseeg/text_io.hpp"

namespace hoseeg {

std::vector<Fold> stratified_kfold(const Eigen::Ref<const Eigen::VectorXi>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2");
  std::map<int, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < labels.size(); ++i) by_class[labels(i)].push_back(i);
  for (const auto& [label, idx] : by_class)
    if (static_cast<int>(idx.size()) < k)
      throw DataError("class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                      " members, fewer than k = " + std::to_string(k));

  Rng rng = substream(seed, "folds");
  std::vector<std::vector<Eigen::Index>> test(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& [label, idx] : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (Eigen::Index i : idx) {
      test[next].push_back(i);
      next = (next + 1) % static_cast<std::size_t>(k);
    }
  }
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::sort(test[f].begin(), test[f].end());
    folds[f].test = test[f];
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) folds[f].train.insert(folds[f].train.end(), test[g].begin(), test[g].end());
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::multiclass: return "multiclass";
    case Task::power_vs_none: return "power-vs-none";
    case Task::precision_vs_none: return "precision-vs-none";
    case Task::power_vs_precision: return "power-vs-precision";
  }
  return "?";
}

std::string_view display_name(Task task) {
  switch (task) {
    case Task::multiclass: return "Multiclass";
    case Task::power_vs_none: return "Power vs None";
    case Task::precision_vs_none: return "Precision vs None";
    case Task::power_vs_precision: return "Power vs Precision";
  }
  return "?";
}

std::string_view to_string(Classifier clf) {
  switch (clf) {
    case Classifier::rf: return "RF";
    case Classifier::svm: return "SVM";
    case Classifier::lda: return "LDA";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  for (Task t : kAllTasks)
    if (text == to_string(t)) return t;
  throw ConfigError("unknown task '" + std::string(text) + "'");
}

Classifier parse_classifier(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "rf") return Classifier::rf;
  if (lower == "svm") return Classifier::svm;
  if (lower == "lda") return Classifier::lda;
  throw ConfigError("unknown classifier '" + std::string(text) + "'");
}

std::vector<Label> task_labels(Task task) {
  switch (task) {
    case Task::multiclass: return {Label::power, Label::precision, Label::none};
    case Task::power_vs_none: return {Label::power, Label::none};
    case Task::precision_vs_none: return {Label::precision, Label::none};
    case Task::power_vs_precision: return {Label::power, Label::precision};
  }
  return {};
}

const CvCell& CvReport::at(Task task, Classifier clf) const {
  for (const CvCell& c : cells)
    if (c.task == task && c.classifier == clf) return c;
  throw DataError("report has no entry for " + std::string(to_string(task)) + "/" + std::string(to_string(clf)));
}

Eigen::VectorXi fit_predict(Classifier clf, const Eigen::Ref<const Eigen::MatrixXd>& train,
                            const Eigen::Ref<const Eigen::VectorXi>& train_labels,
                            const Eigen::Ref<const Eigen::MatrixXd>& test, const CvOptions& options,
                            std::uint64_t stream_index) {
  switch (clf) {
    case Classifier::lda: return lda_predict(lda_fit(train, train_labels, options.lda_ridge), test);
    case Classifier::svm: return svm_predict(svm_fit(train, train_labels, options.svm), test);
    case Classifier::rf: {
      ForestOptions fo;
      fo.n_trees = options.n_trees;
      fo.max_features = options.max_features;
      fo.seed = substream(options.seed, "forest", stream_index)();
      return forest_predict(forest_fit(train, train_labels, fo), test);
    }
  }
  throw DataError("unknown classifier");
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::Ref<const Eigen::MatrixXd>& x, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Eigen::VectorXi take(const Eigen::VectorXi& y, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXi out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(rows[i]);
  return out;
}

}  // namespace

CvReport run_cv(const FeatureMatrix& features, const std::vector<Task>& tasks,
                const std::vector<Classifier>& classifiers, const CvOptions& options) {
  if (features.rows() != static_cast<Eigen::Index>(features.labels.size()))
    throw DataError("feature matrix rows do not match labels");
  if (tasks.empty() || classifiers.empty()) throw ConfigError("need at least one task and one classifier");
  CvReport report;
  report.tasks = tasks;
  report.classifiers = classifiers;
  report.k = options.k;

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const Task task = tasks[ti];
    const auto wanted = task_labels(task);
    std::vector<Eigen::Index> rows;
    std::vector<bool> present(3, false);
    for (std::size_t i = 0; i < features.labels.size(); ++i)
      if (std::find(wanted.begin(), wanted.end(), features.labels[i]) != wanted.end()) {
        rows.push_back(static_cast<Eigen::Index>(i));
        present[static_cast<std::size_t>(features.labels[i])] = true;
      }
    if (std::count(present.begin(), present.end(), true) < 2)
      throw DataError("task requires ≥ 2 classes (" + std::string(to_string(task)) + ")");

    const Eigen::MatrixXd x = take_rows(features.values, rows);
    Eigen::VectorXi y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      y(static_cast<Eigen::Index>(i)) = static_cast<int>(features.labels[static_cast<std::size_t>(rows[i])]);

    const auto folds = stratified_kfold(y, options.k, substream(options.seed, "task", ti)());
    std::vector<CvCell> cells;
    for (Classifier clf : classifiers) cells.push_back(CvCell{task, clf, {}, 0.0});

    for (std::size_t f = 0; f < folds.size(); ++f) {
      const Eigen::MatrixXd train_raw = take_rows(x, folds[f].train);
      const Eigen::MatrixXd test_raw = take_rows(x, folds[f].test);
      const Standardizer st = fit_standardizer(train_raw);
      const Eigen::MatrixXd train = st.apply(train_raw);
      const Eigen::MatrixXd test = options.standardize == StandardizeMode::train_fit
                                       ? st.apply(test_raw)
                                       : fit_standardizer(test_raw).apply(test_raw);
      const Eigen::VectorXi train_y = take(y, folds[f].train);
      const Eigen::VectorXi test_y = take(y, folds[f].test);
      for (std::size_t c = 0; c < classifiers.size(); ++c) {
        const Eigen::VectorXi pred =
            fit_predict(classifiers[c], train, train_y, test, options, ti * 1000 + f);
        const double acc = static_cast<double>((pred.array() == test_y.array()).count()) /
                           static_cast<double>(test_y.size());
        cells[c].fold_accuracy.push_back(acc);
      }
    }
    for (CvCell& cell : cells) {
      cell.mean = std::accumulate(cell.fold_accuracy.begin(), cell.fold_accuracy.end(), 0.0) /
                  static_cast<double>(cell.fold_accuracy.size());
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

FeatureMatrix shuffle_labels(const FeatureMatrix& features, std::uint64_t seed) {
  FeatureMatrix out = features;
  Rng rng = substream(seed, "label-shuffle");
  std::shuffle(out.labels.begin(), out.labels.end(), rng);
  return out;
}

std::string report_csv(const CvReport& report) {
  std::string out = "task,classifier";
  for (int f = 1; f <= report.k; ++f) out += ",fold_" + std::to_string(f);
  out += ",mean\n";
  for (const CvCell& c : report.cells) {
    out += std::string(to_string(c.task)) + "," + std::string(to_string(c.classifier));
    for (double a : c.fold_accuracy) {
      out += ',';
      text::append_number(out, a);
    }
    out += ',';
    text::append_number(out, c.mean);
    out += '\n';
  }
  return out;
}

std::string report_table(const CvReport& report) {
  const int cell_w = 8;
  const int label_w = 8;
  const int group_w = cell_w * static_cast<int>(report.classifiers.size());
  auto pad = [](std::string s, int w) {
    if (static_cast<int>(s.size()) < w) s.insert(s.begin(), static_cast<std::size_t>(w) - s.size(), ' ');
    return s;
  };
  auto centre = [](std::string s, int w) {
    if (static_cast<int>(s.size()) >= w) return s.substr(0, static_cast<std::size_t>(w));
    const auto total = static_cast<std::size_t>(w) - s.size();
    return std::string(total / 2, ' ') + s + std::string(total - total / 2, ' ');
  };

  std::string out = std::string(static_cast<std::size_t>(label_w), ' ');
  for (Task t : report.tasks) out += " |" + centre(std::string(display_name(t)), group_w);
  out += '\n';
  out += std::string(static_cast<std::size_t>(label_w), ' ');
  for (std::size_t t = 0; t < report.tasks.size(); ++t) {
    out += " |";
    for (Classifier c : report.classifiers) out += pad(std::string(to_string(c)), cell_w);
  }
  out += '\n';
  const std::size_t width = out.find('\n');
  out += std::string(width, '-') + '\n';

  auto row = [&](const std::string& name, auto value_of) {
    std::string line = name;
    line.resize(static_cast<std::size_t>(label_w), ' ');
    for (Task t : report.tasks) {
      line += " |";
      for (Classifier c : report.classifiers) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", 100.0 * value_of(report.at(t, c)));
        line += pad(buf, cell_w);
      }
    }
    return line + '\n';
  };
  for (int f = 0; f < report.k; ++f)
    out += row("Fold " + std::to_string(f + 1),
               [f](const CvCell& c) { return c.fold_accuracy[static_cast<std::size_t>(f)]; });
  out += std::string(width, '-') + '\n';
  out += row("Mean", [](const CvCell& c) { return c.mean; });
  return out;
}

}  // namespace hoseeg
