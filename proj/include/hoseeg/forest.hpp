#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hoseeg {

struct ForestOptions {
  int n_trees = 100;
  int max_features = 0;  // 0: floor(sqrt(d))
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Eigen::VectorXi counts;  // class counts of the training rows reaching a leaf
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int predict_index(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

struct ForestModel {
  std::vector<int> classes;
  std::vector<DecisionTree> trees;
  std::uint64_t seed = 0;
};

/// Bagged Gini trees grown until pure (or fewer than 2 rows), each split
/// chosen among `max_features` random candidate features.
ForestModel forest_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                       const ForestOptions& options = {});

/// Majority vote over trees; ties go to the lower class index.
Eigen::VectorXi forest_predict(const ForestModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x);

}  // namespace hoseeg
