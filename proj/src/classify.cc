// classify.cc

// Copyright 2026  The CORAL Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "coral/classify.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "coral/error.h"

namespace coral {

namespace {

int CheckLabels(const FeatureMatrix &d, const Labels &labels, int num_classes) {
  if (static_cast<Eigen::Index>(labels.size()) != d.rows())
    throw InvalidInput("label count does not match row count");
  int top = -1;
  for (int32_t y : labels) {
    if (y < 0) throw InvalidInput("negative class label");
    top = std::max(top, static_cast<int>(y));
  }
  int k = num_classes > 0 ? num_classes : top + 1;
  if (top >= k) throw InvalidInput("class label exceeds the class count");
  return k;
}

// Row-major copy of the features with a trailing constant 1.
std::vector<double> Augment(const FeatureMatrix &d) {
  const Eigen::Index n = d.rows(), dim = d.cols();
  std::vector<double> x(n * (dim + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) x[i * (dim + 1) + j] = d.data()(i, j);
    x[i * (dim + 1) + dim] = 1.0;
  }
  return x;
}

double Dot(const double *a, const double *b, Eigen::Index m) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) s += a[j] * b[j];
  return s;
}

double ClassObjective(const std::vector<double> &x, const Labels &labels,
                      const double *w, Eigen::Index m, int k, double lambda) {
  const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double y = labels[i] == k ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * Dot(w, &x[i * m], m));
  }
  return 0.5 * lambda * Dot(w, w, m) + hinge / static_cast<double>(n);
}

}  // namespace

LinearModel TrainSvm(const FeatureMatrix &d, const Labels &labels,
                     const SvmOptions &opts,
                     std::vector<double> *epoch_objective) {
  if (!(opts.c > 0)) throw InvalidInput("SVM constant C must be positive");
  if (opts.epochs < 1) throw InvalidInput("SVM needs at least one epoch");
  const int k = CheckLabels(d, labels, opts.num_classes);
  std::vector<bool> seen(k, false);
  for (int32_t y : labels) seen[y] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2)
    throw InvalidInput("SVM training needs at least two classes");
  const Eigen::Index n = d.rows(), m = d.cols() + 1;
  if (n < k) throw InvalidInput("fewer examples than classes");

  const double lambda = 1.0 / (opts.c * static_cast<double>(n));
  const double radius_sq = 1.0 / lambda;
  std::vector<double> x = Augment(d);
  std::vector<double> w(k * m, 0.0), accepted(k * m, 0.0);
  std::vector<double> accepted_obj(k, 1.0);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opts.seed);
  if (epoch_objective) epoch_objective->clear();

  long t = 0;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double shrink = 1.0 - eta * lambda;
      const double *xi = &x[i * m];
      for (int c = 0; c < k; ++c) {
        double *wc = &w[c * m];
        const double y = labels[i] == c ? 1.0 : -1.0;
        const double margin = y * Dot(wc, xi, m);
        for (Eigen::Index j = 0; j < m; ++j) wc[j] *= shrink;
        if (margin < 1.0)
          for (Eigen::Index j = 0; j < m; ++j) wc[j] += eta * y * xi[j];
        const double norm_sq = Dot(wc, wc, m);
        if (norm_sq > radius_sq) {
          const double s = std::sqrt(radius_sq / norm_sq);
          for (Eigen::Index j = 0; j < m; ++j) wc[j] *= s;
        }
      }
    }
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
      double *wc = &w[c * m];
      double *ac = &accepted[c * m];
      double obj = ClassObjective(x, labels, wc, m, c, lambda);
      if (obj > accepted_obj[c]) {
        std::copy(ac, ac + m, wc);
      } else {
        std::copy(wc, wc + m, ac);
        accepted_obj[c] = obj;
      }
      total += accepted_obj[c];
    }
    if (epoch_objective) epoch_objective->push_back(total);
  }

  LinearModel model;
  model.c = opts.c;
  model.weights.resize(k, m - 1);
  model.bias.resize(k);
  for (int c = 0; c < k; ++c) {
    for (Eigen::Index j = 0; j + 1 < m; ++j) model.weights(c, j) = w[c * m + j];
    model.bias(c) = w[c * m + m - 1];
  }
  return model;
}

LinearModel TrainSvm(const FeatureMatrix &d, const Labels &labels, double c,
                     int epochs, uint64_t seed) {
  SvmOptions opts;
  opts.c = c;
  opts.epochs = epochs;
  opts.seed = seed;
  return TrainSvm(d, labels, opts);
}

double SvmObjective(const LinearModel &model, const FeatureMatrix &d,
                    const Labels &labels) {
  if (model.dim() != d.cols()) throw InvalidInput("model dimension mismatch");
  CheckLabels(d, labels, static_cast<int>(model.num_classes()));
  const Eigen::Index m = d.cols() + 1;
  const double lambda = 1.0 / (model.c * static_cast<double>(d.rows()));
  std::vector<double> x = Augment(d);
  std::vector<double> wc(m);
  double total = 0.0;
  for (int c = 0; c < model.num_classes(); ++c) {
    for (Eigen::Index j = 0; j + 1 < m; ++j) wc[j] = model.weights(c, j);
    wc[m - 1] = model.bias(c);
    total += ClassObjective(x, labels, wc.data(), m, c, lambda);
  }
  return total;
}

Matrix Scores(const LinearModel &model, const FeatureMatrix &d) {
  if (model.dim() != d.cols()) throw InvalidInput("model dimension mismatch");
  Matrix s = d.data() * model.weights.transpose();
  s.rowwise() += model.bias.transpose();
  return s;
}

Labels Predict(const LinearModel &model, const FeatureMatrix &d) {
  Matrix s = Scores(model, d);
  Labels out(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.cols(); ++c)
      if (s(i, c) > s(i, best)) best = c;
    out[i] = static_cast<int32_t>(best);
  }
  return out;
}

CvResult CrossValidate(const FeatureMatrix &d, const Labels &labels,
                       std::vector<double> grid, int folds, uint64_t seed,
                       int epochs) {
  if (grid.empty()) throw InvalidInput("empty C grid");
  if (folds < 2) throw InvalidInput("cross-validation needs at least 2 folds");
  const int k = CheckLabels(d, labels, 0);
  const Eigen::Index n = d.rows();
  if (n < folds) throw InvalidInput("fewer examples than folds");
  std::sort(grid.begin(), grid.end());
  CvResult out;
  out.grid = grid;
  out.accuracy.assign(grid.size(), 0.0);
  if (grid.size() == 1) {
    out.best_c = grid[0];
    return out;
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  for (int f = 0; f < folds; ++f) {
    const Eigen::Index lo = f * n / folds, hi = (f + 1) * n / folds;
    std::vector<Eigen::Index> train_idx, test_idx;
    for (Eigen::Index p = 0; p < n; ++p)
      (p >= lo && p < hi ? test_idx : train_idx).push_back(order[p]);
    Matrix xtr(train_idx.size(), d.cols()), xte(test_idx.size(), d.cols());
    Labels ytr, yte;
    for (size_t i = 0; i < train_idx.size(); ++i) {
      xtr.row(i) = d.data().row(train_idx[i]);
      ytr.push_back(labels[train_idx[i]]);
    }
    for (size_t i = 0; i < test_idx.size(); ++i) {
      xte.row(i) = d.data().row(test_idx[i]);
      yte.push_back(labels[test_idx[i]]);
    }
    FeatureMatrix ftr(std::move(xtr)), fte(std::move(xte));
    for (size_t g = 0; g < grid.size(); ++g) {
      SvmOptions opts;
      opts.c = grid[g];
      opts.epochs = epochs;
      opts.seed = seed;
      opts.num_classes = k;
      LinearModel m = TrainSvm(ftr, ytr, opts);
      out.accuracy[g] += Accuracy(Predict(m, fte), yte) / folds;
    }
  }
  size_t best = 0;
  for (size_t g = 1; g < grid.size(); ++g)
    if (out.accuracy[g] > out.accuracy[best]) best = g;
  out.best_c = grid[best];
  return out;
}

double CrossValidateC(const FeatureMatrix &d, const Labels &labels,
                      const std::vector<double> &grid, int folds,
                      uint64_t seed, int epochs) {
  return CrossValidate(d, labels, grid, folds, seed, epochs).best_c;
}

const std::vector<double> &DefaultCGrid() {
  static const std::vector<double> grid = {0.001, 0.01, 0.1, 1.0, 10.0};
  return grid;
}

double Accuracy(const Labels &pred, const Labels &truth) {
  if (pred.size() != truth.size())
    throw InvalidInput("prediction and truth lengths differ");
  if (pred.empty()) return 0.0;
  size_t hit = 0;
  for (size_t i = 0; i < pred.size(); ++i) hit += pred[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

}  // namespace coral
