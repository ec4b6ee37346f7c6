#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hoseeg/features.hpp"
#include "hoseeg/forest.hpp"
#include "hoseeg/svm.hpp"

namespace hoseeg {

struct Fold {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
};

/// Per class, shuffled indices are dealt round-robin into k folds (the deal
/// continues where the previous class stopped). Throws DataError when a class
/// has fewer than k members.
std::vector<Fold> stratified_kfold(const Eigen::Ref<const Eigen::VectorXi>& labels, int k, std::uint64_t seed);

enum class Task { multiclass, power_vs_none, precision_vs_none, power_vs_precision };
enum class Classifier { rf, svm, lda };

inline constexpr std::array<Task, 4> kAllTasks{Task::multiclass, Task::power_vs_none, Task::precision_vs_none,
                                               Task::power_vs_precision};
inline constexpr std::array<Classifier, 3> kAllClassifiers{Classifier::rf, Classifier::svm, Classifier::lda};

std::string_view to_string(Task task);
std::string_view display_name(Task task);
std::string_view to_string(Classifier clf);
Task parse_task(std::string_view text);
Classifier parse_classifier(std::string_view text);
std::vector<Label> task_labels(Task task);

/// How test rows are scaled: with the training fold's statistics, or with
/// statistics computed on the test fold itself.
enum class StandardizeMode { train_fit, literal };

struct CvOptions {
  int k = 5;
  std::uint64_t seed = 0;
  StandardizeMode standardize = StandardizeMode::train_fit;
  double lda_ridge = 1e-4;
  SvmOptions svm;
  int n_trees = 100;
  int max_features = 0;
};

struct CvCell {
  Task task;
  Classifier classifier;
  std::vector<double> fold_accuracy;
  double mean = 0.0;
};

struct CvReport {
  std::vector<Task> tasks;
  std::vector<Classifier> classifiers;
  int k = 5;
  std::vector<CvCell> cells;  // task-major, classifier-minor

  const CvCell& at(Task task, Classifier clf) const;
};

/// Fits one classifier on standardized training rows and predicts test rows.
Eigen::VectorXi fit_predict(Classifier clf, const Eigen::Ref<const Eigen::MatrixXd>& train,
                            const Eigen::Ref<const Eigen::VectorXi>& train_labels,
                            const Eigen::Ref<const Eigen::MatrixXd>& test, const CvOptions& options,
                            std::uint64_t stream_index);

/// Stratified k-fold accuracy for every task and classifier. Binary tasks use
/// the subset of rows carrying their two labels; all classifiers of a task see
/// the same folds.
CvReport run_cv(const FeatureMatrix& features, const std::vector<Task>& tasks,
                const std::vector<Classifier>& classifiers, const CvOptions& options);

/// Same rows with labels randomly permuted (the chance-level control).
FeatureMatrix shuffle_labels(const FeatureMatrix& features, std::uint64_t seed);

/// task,classifier,fold_1..fold_k,mean
std::string report_csv(const CvReport& report);

/// Aligned text table: tasks as column groups, classifiers as sub-columns,
/// one row per fold and a Mean row last. Values in percent.
std::string report_table(const CvReport& report);

}  // namespace hoseeg
