#include "hoseeg/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hoseeg/error.hpp"
#include "hoseeg/random.hpp"

namespace hoseeg {

namespace {

// Index of the first maximum, so ties resolve to the lowest class index.
Eigen::Index first_max(const Eigen::VectorXi& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child Gini
};

double gini_sum(const std::vector<int>& counts, int total) {
  if (total == 0) return 0.0;
  double s = 0.0;
  for (int c : counts) s += static_cast<double>(c) * c;
  return 1.0 - s / (static_cast<double>(total) * total);
}

class TreeBuilder {
public:
  TreeBuilder(const Eigen::Ref<const Eigen::MatrixXd>& x, const std::vector<int>& y, int n_classes, int max_features,
              Rng& rng)
      : x_(x), y_(y), n_classes_(n_classes), max_features_(max_features), rng_(rng) {}

  DecisionTree build(std::vector<Eigen::Index> rows) {
    tree_.nodes.clear();
    grow(std::move(rows));
    return std::move(tree_);
  }

private:
  int grow(std::vector<Eigen::Index> rows) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::vector<int> counts(static_cast<std::size_t>(n_classes_), 0);
    for (Eigen::Index r : rows) ++counts[static_cast<std::size_t>(y_[static_cast<std::size_t>(r)])];
    const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;

    Split split;
    if (!pure && rows.size() >= 2) split = best_split(rows, counts);
    if (split.feature < 0) {
      tree_.nodes[static_cast<std::size_t>(id)].counts =
          Eigen::Map<const Eigen::VectorXi>(counts.data(), static_cast<Eigen::Index>(counts.size()));
      return id;
    }

    std::vector<Eigen::Index> left, right;
    for (Eigen::Index r : rows) (x_(r, split.feature) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left));
    const int rgt = grow(std::move(right));
    TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = rgt;
    return id;
  }

  // Scans candidate features in random order; once max_features have been
  // examined, stops at the first one that admits a split.
  Split best_split(const std::vector<Eigen::Index>& rows, const std::vector<int>& parent_counts) {
    std::vector<int> features(static_cast<std::size_t>(x_.cols()));
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng_);

    const int total = static_cast<int>(rows.size());
    Split best;
    double best_score = std::numeric_limits<double>::infinity();
    int examined = 0;
    std::vector<std::pair<double, int>> column(rows.size());
    for (int f : features) {
      if (examined >= max_features_ && best.feature >= 0) break;
      ++examined;
      for (std::size_t i = 0; i < rows.size(); ++i)
        column[i] = {x_(rows[i], f), y_[static_cast<std::size_t>(rows[i])]};
      std::sort(column.begin(), column.end());
      std::vector<int> left(static_cast<std::size_t>(n_classes_), 0);
      std::vector<int> right = parent_counts;
      for (int i = 0; i + 1 < total; ++i) {
        ++left[static_cast<std::size_t>(column[static_cast<std::size_t>(i)].second)];
        --right[static_cast<std::size_t>(column[static_cast<std::size_t>(i)].second)];
        const double v = column[static_cast<std::size_t>(i)].first;
        const double next = column[static_cast<std::size_t>(i) + 1].first;
        if (!(next > v)) continue;
        const int nl = i + 1, nr = total - nl;
        const double score = (nl * gini_sum(left, nl) + nr * gini_sum(right, nr)) / total;
        if (score < best_score) {
          best_score = score;
          best.feature = f;
          best.impurity = score;
          double t = v + (next - v) / 2.0;
          if (!(t < next)) t = v;  // midpoint rounded up onto next
          best.threshold = t;
        }
      }
    }
    return best;
  }

  const Eigen::Ref<const Eigen::MatrixXd>& x_;
  const std::vector<int>& y_;
  int n_classes_;
  int max_features_;
  Rng& rng_;
  DecisionTree tree_;
};

}  // namespace

int DecisionTree::predict_index(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int n = 0;
  while (nodes[static_cast<std::size_t>(n)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<std::size_t>(n)];
    n = row(node.feature) <= node.threshold ? node.left : node.right;
  }
  return static_cast<int>(first_max(nodes[static_cast<std::size_t>(n)].counts));
}

ForestModel forest_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                       const ForestOptions& options) {
  if (x.rows() != y.size()) throw DataError("forest: row count does not match label count");
  if (x.rows() < 1) throw DataError("forest needs at least one training row");
  if (options.n_trees < 1) throw ConfigError("forest needs at least one tree");
  ForestModel model;
  model.seed = options.seed;
  model.classes.assign(y.data(), y.data() + y.size());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());

  std::vector<int> yi(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    yi[static_cast<std::size_t>(i)] = static_cast<int>(
        std::lower_bound(model.classes.begin(), model.classes.end(), y(i)) - model.classes.begin());

  const int d = static_cast<int>(x.cols());
  const int max_features =
      options.max_features > 0 ? std::min(options.max_features, d)
                               : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
  const Eigen::Index n = x.rows();
  for (int t = 0; t < options.n_trees; ++t) {
    Rng rng = substream(options.seed, "bootstrap", static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
    for (auto& r : rows) r = pick(rng);
    TreeBuilder builder(x, yi, static_cast<int>(model.classes.size()), max_features, rng);
    model.trees.push_back(builder.build(std::move(rows)));
  }
  return model;
}

Eigen::VectorXi forest_predict(const ForestModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  Eigen::VectorXi out(x.rows());
  Eigen::VectorXi votes(static_cast<Eigen::Index>(model.classes.size()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    votes.setZero();
    for (const DecisionTree& tree : model.trees) ++votes(tree.predict_index(x.row(i)));
    out(i) = model.classes[static_cast<std::size_t>(first_max(votes))];
  }
  return out;
}

}  // namespace hoseeg
