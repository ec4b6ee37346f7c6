#include "hoseeg/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hoseeg/error.hpp"

namespace hoseeg {

namespace {

constexpr double kTau = 1e-12;

std::vector<int> sorted_classes(const Eigen::Ref<const Eigen::VectorXi>& y) {
  std::vector<int> c(y.data(), y.data() + y.size());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

Eigen::MatrixXd rbf_kernel(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                           double gamma) {
  const Eigen::VectorXd an = a.rowwise().squaredNorm();
  const Eigen::VectorXd bn = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * a * b.transpose()).colwise() + an;
  d2.rowwise() += bn.transpose();
  return (-gamma * d2.cwiseMax(0.0)).array().exp();
}

Eigen::VectorXd BinaryMachine::decision(const Eigen::Ref<const Eigen::MatrixXd>& x, double gamma) const {
  if (support_vectors.rows() == 0) return Eigen::VectorXd::Constant(x.rows(), bias);
  return (rbf_kernel(x, support_vectors, gamma) * coef).array() + bias;
}

BinaryMachine svm_fit_binary(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                             double gamma, double c, double tol, long max_iter) {
  const Eigen::Index n = x.rows();
  if (n != y.size()) throw DataError("SVM: row count does not match label count");
  if (!(c > 0.0) || !(gamma > 0.0) || !(tol > 0.0)) throw ConfigError("SVM: C, gamma and tol must be positive");
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) == 1) has_pos = true;
    else if (y(i) == -1) has_neg = true;
    else throw DataError("SVM: binary labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw DataError("SVM: both classes are required");

  const Eigen::MatrixXd k = rbf_kernel(x, x, gamma);
  const Eigen::VectorXd yd = y.cast<double>();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // Q alpha - e
  auto upper = [&](Eigen::Index t) { return alpha(t) >= c; };
  auto lower = [&](Eigen::Index t) { return alpha(t) <= 0.0; };

  long iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  while (true) {
    // i: maximal violator in I_up
    double g_max = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) == 1 ? upper(t) : lower(t)) continue;
      const double v = -yd(t) * grad(t);
      if (v >= g_max) {
        g_max = v;
        i = t;
      }
    }
    // j: second-order choice in I_low
    double g_max2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) == 1 ? lower(t) : upper(t)) continue;
      const double v = yd(t) * grad(t);
      g_max2 = std::max(g_max2, v);
      if (i < 0) continue;
      const double diff = g_max + v;
      if (diff > 0.0) {
        double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (quad <= 0.0) quad = kTau;
        const double obj = -diff * diff / quad;
        if (obj <= best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    gap = g_max + g_max2;
    if (i < 0 || j < 0 || gap < tol) break;
    if (iter >= max_iter)
      throw ConvergenceError("SMO did not converge in " + std::to_string(max_iter) + " iterations", gap);
    ++iter;

    const double old_i = alpha(i), old_j = alpha(j);
    const double qij = yd(i) * yd(j) * k(i, j);
    if (y(i) != y(j)) {
      double quad = k(i, i) + k(j, j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0.0) {
        if (alpha(j) < 0.0) { alpha(j) = 0.0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0.0) { alpha(i) = 0.0; alpha(j) = -diff; }
      }
      if (diff > 0.0) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = c - diff; }
      } else {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = c + diff; }
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = sum - c; }
      } else {
        if (alpha(j) < 0.0) { alpha(j) = 0.0; alpha(i) = sum; }
      }
      if (sum > c) {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = sum - c; }
      } else {
        if (alpha(i) < 0.0) { alpha(i) = 0.0; alpha(j) = sum; }
      }
    }
    const double di = alpha(i) - old_i, dj = alpha(j) - old_j;
    // grad_t += Q_ti di + Q_tj dj with Q_ts = y_t y_s K_ts
    grad.array() += yd.array() * (k.col(i).array() * (yd(i) * di) + k.col(j).array() * (yd(j) * dj));
  }

  // bias: average over free vectors, else midpoint of the feasible interval
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = yd(t) * grad(t);
    if (upper(t)) {
      if (y(t) == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y(t) == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : (ub + lb) / 2.0;

  const Eigen::VectorXd coef_all = alpha.cwiseProduct(yd);
  const double margin_term = coef_all.dot(k * coef_all);
  if (!(margin_term > 1e-12 * std::max(1.0, alpha.sum())))
    throw DataError("SVM: zero-margin solution (training points are not separable in feature space)");

  BinaryMachine m;
  m.bias = -rho;
  m.iterations = iter;
  for (Eigen::Index t = 0; t < n; ++t)
    if (alpha(t) > 0.0) m.support_indices.push_back(t);
  const auto nsv = static_cast<Eigen::Index>(m.support_indices.size());
  m.support_vectors.resize(nsv, x.cols());
  m.alpha.resize(nsv);
  m.coef.resize(nsv);
  for (Eigen::Index s = 0; s < nsv; ++s) {
    const Eigen::Index t = m.support_indices[static_cast<std::size_t>(s)];
    m.support_vectors.row(s) = x.row(t);
    m.alpha(s) = alpha(t);
    m.coef(s) = coef_all(t);
  }
  return m;
}

double max_kkt_violation(const BinaryMachine& m, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXi>& y, double gamma, double c) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(x.rows());
  for (std::size_t s = 0; s < m.support_indices.size(); ++s)
    alpha(m.support_indices[s]) = m.alpha(static_cast<Eigen::Index>(s));
  const Eigen::VectorXd f = m.decision(x, gamma);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double margin = y(i) * f(i);
    double v = 0.0;
    if (alpha(i) <= 0.0) v = std::max(0.0, 1.0 - margin);
    else if (alpha(i) >= c) v = std::max(0.0, margin - 1.0);
    else v = std::abs(margin - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

SvmModel svm_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                 const SvmOptions& options) {
  if (x.rows() != y.size()) throw DataError("SVM: row count does not match label count");
  SvmModel model;
  model.classes = sorted_classes(y);
  if (model.classes.size() < 2) throw DataError("SVM needs at least 2 classes");
  model.c = options.c;
  if (options.gamma) {
    model.gamma = *options.gamma;
  } else {
    const double mean = x.mean();
    const double var = (x.array() - mean).square().mean();
    model.gamma = 1.0 / (static_cast<double>(x.cols()) * (var > 0.0 ? var : 1.0));
  }
  for (std::size_t a = 0; a < model.classes.size(); ++a)
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) == model.classes[a] || y(i) == model.classes[b]) rows.push_back(i);
      Eigen::MatrixXd xs(static_cast<Eigen::Index>(rows.size()), x.cols());
      Eigen::VectorXi ys(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        xs.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
        ys(static_cast<Eigen::Index>(r)) = y(rows[r]) == model.classes[a] ? 1 : -1;
      }
      BinaryMachine m = svm_fit_binary(xs, ys, model.gamma, options.c, options.tol, options.max_iter);
      m.positive = model.classes[a];
      m.negative = model.classes[b];
      model.machines.push_back(std::move(m));
    }
  return model;
}

Eigen::VectorXi svm_predict(const SvmModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const auto nc = static_cast<Eigen::Index>(model.classes.size());
  Eigen::MatrixXd votes = Eigen::MatrixXd::Zero(x.rows(), nc);
  Eigen::MatrixXd confidence = Eigen::MatrixXd::Zero(x.rows(), nc);
  auto index_of = [&](int label) {
    return static_cast<Eigen::Index>(std::lower_bound(model.classes.begin(), model.classes.end(), label) -
                                     model.classes.begin());
  };
  for (const BinaryMachine& m : model.machines) {
    const Eigen::VectorXd f = m.decision(x, model.gamma);
    const Eigen::Index a = index_of(m.positive), b = index_of(m.negative);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      votes(i, f(i) > 0.0 ? a : b) += 1.0;
      confidence(i, a) += f(i);
      confidence(i, b) -= f(i);
    }
  }
  Eigen::VectorXi out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < nc; ++k)
      if (votes(i, k) > votes(i, best) || (votes(i, k) == votes(i, best) && confidence(i, k) > confidence(i, best)))
        best = k;
    out(i) = model.classes[static_cast<std::size_t>(best)];
  }
  return out;
}

}  // namespace hoseeg
