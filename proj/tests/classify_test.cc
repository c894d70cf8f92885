// tests/classify_test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "coral/align.h"
#include "coral/error.h"
#include "test_util.h"

namespace coral {
namespace {

using testing::RandomMatrix;

// Two Gaussian blobs in 2-D around (-3, 0) and (3, 0) with radius < 1, so
// the margin is at least 1 on each side of x = 0.
void Blobs(int n, uint64_t seed, FeatureMatrix *x, Labels *y) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  Matrix m(n, 2);
  y->assign(n, 0);
  for (int i = 0; i < n; ++i) {
    int c = i % 2;
    (*y)[i] = c;
    m(i, 0) = (c ? 3.0 : -3.0) + u(rng);
    m(i, 1) = u(rng);
  }
  *x = FeatureMatrix(m);
}

TEST(TrainSvmTest, SeparableBlobsReachFullAccuracy) {
  FeatureMatrix x;
  Labels y;
  Blobs(60, 1, &x, &y);
  LinearModel m = TrainSvm(x, y, 1.0, 50, 7);
  EXPECT_EQ(Accuracy(Predict(m, x), y), 1.0);
  EXPECT_EQ(m.num_classes(), 2);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.c, 1.0);
}

TEST(TrainSvmTest, FlippedLabelsFlipPredictions) {
  FeatureMatrix x;
  Labels y;
  Blobs(60, 2, &x, &y);
  Labels flipped(y.size());
  for (size_t i = 0; i < y.size(); ++i) flipped[i] = 1 - y[i];
  Labels a = Predict(TrainSvm(x, y, 1.0, 50, 3), x);
  Labels b = Predict(TrainSvm(x, flipped, 1.0, 50, 3), x);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NE(a[i], b[i]) << i;
}

// Step-by-step replay of the documented update rule.
double ReplayObjective(const Matrix &x, const Labels &y, int k, double c,
                       int epochs, uint64_t seed) {
  const int n = static_cast<int>(x.rows()), m = static_cast<int>(x.cols()) + 1;
  const double lambda = 1.0 / (c * n);
  std::vector<std::vector<double>> w(k, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> keep = w;
  std::vector<double> keep_obj(k, 1.0);
  auto feat = [&](int i, int j) { return j + 1 < m ? x(i, j) : 1.0; };
  auto dot = [&](const std::vector<double> &v, int i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += v[j] * feat(i, j);
    return s;
  };
  auto objective = [&](const std::vector<double> &v, int cls) {
    double h = 0.0;
    for (int i = 0; i < n; ++i)
      h += std::max(0.0, 1.0 - (y[i] == cls ? 1.0 : -1.0) * dot(v, i));
    double sq = 0.0;
    for (int j = 0; j < m; ++j) sq += v[j] * v[j];
    return 0.5 * lambda * sq + h / n;
  };
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  long t = 0;
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      ++t;
      double eta = 1.0 / (lambda * t);
      for (int cls = 0; cls < k; ++cls) {
        std::vector<double> &v = w[cls];
        double yy = y[i] == cls ? 1.0 : -1.0;
        double margin = yy * dot(v, static_cast<int>(i));
        for (int j = 0; j < m; ++j) v[j] *= 1.0 - eta * lambda;
        if (margin < 1.0)
          for (int j = 0; j < m; ++j) v[j] += eta * yy * feat(static_cast<int>(i), j);
        double sq = 0.0;
        for (int j = 0; j < m; ++j) sq += v[j] * v[j];
        if (sq > 1.0 / lambda) {
          double s = std::sqrt((1.0 / lambda) / sq);
          for (int j = 0; j < m; ++j) v[j] *= s;
        }
      }
    }
    for (int cls = 0; cls < k; ++cls) {
      double o = objective(w[cls], cls);
      if (o > keep_obj[cls]) {
        w[cls] = keep[cls];
      } else {
        keep[cls] = w[cls];
        keep_obj[cls] = o;
      }
    }
  }
  double total = 0.0;
  for (int cls = 0; cls < k; ++cls) total += keep_obj[cls];
  return total;
}

TEST(TrainSvmTest, ReplayOracleBitIdentical) {
  Matrix x(6, 2);
  x << 0.5, 1.0, -1.0, 0.3, 2.0, -0.5, -0.2, -1.5, 1.1, 0.9, -2.0, 0.1;
  Labels y = {0, 1, 2, 0, 1, 2};
  SvmOptions opts;
  opts.c = 0.7;
  opts.epochs = 9;
  opts.seed = 12345;
  std::vector<double> trace;
  LinearModel m = TrainSvm(FeatureMatrix(x), y, opts, &trace);
  double replay = ReplayObjective(x, y, 3, 0.7, 9, 12345);
  EXPECT_EQ(trace.back(), replay);
  EXPECT_EQ(SvmObjective(m, FeatureMatrix(x), y), replay);
}

TEST(TrainSvmTest, ObjectiveNonIncreasingAcrossEpochs) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    FeatureMatrix x(RandomMatrix(80, 5, seed));
    Labels y(80);
    for (int i = 0; i < 80; ++i) y[i] = (x.data()(i, 0) + 0.3 * x.data()(i, 1) > 0) + (i % 3 == 0);
    std::vector<double> trace;
    SvmOptions opts;
    opts.c = 0.5;
    opts.epochs = 25;
    opts.seed = seed;
    TrainSvm(x, y, opts, &trace);
    ASSERT_EQ(trace.size(), 25u);
    for (size_t e = 1; e < trace.size(); ++e)
      EXPECT_LE(trace[e], trace[e - 1] + 1e-9) << "epoch " << e;
    EXPECT_LE(trace.back(), trace.front());
  }
}

TEST(TrainSvmTest, DeterministicPerSeed) {
  FeatureMatrix x(RandomMatrix(50, 4, 9));
  Labels y(50);
  for (int i = 0; i < 50; ++i) y[i] = i % 3;
  LinearModel a = TrainSvm(x, y, 1.0, 10, 5), b = TrainSvm(x, y, 1.0, 10, 5);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(TrainSvmTest, ErrorPaths) {
  FeatureMatrix x(RandomMatrix(10, 2, 1));
  EXPECT_THROW(TrainSvm(x, Labels(10, 0), 1.0, 5, 0), InvalidInput);
  Labels y(10);
  for (int i = 0; i < 10; ++i) y[i] = i % 2;
  EXPECT_THROW(TrainSvm(x, y, 0.0, 5, 0), InvalidInput);
  EXPECT_THROW(TrainSvm(x, Labels(9, 0), 1.0, 5, 0), InvalidInput);
  y[0] = -1;
  EXPECT_THROW(TrainSvm(x, y, 1.0, 5, 0), InvalidInput);
}

TEST(PredictTest, OneHotAndTieBreak) {
  LinearModel m{Matrix::Identity(3, 3), Vector::Zero(3), 1.0};
  Matrix x = Matrix::Zero(1, 3);
  x(0, 2) = 1.0;
  EXPECT_EQ(Predict(m, FeatureMatrix(x)), Labels{2});
  LinearModel zero{Matrix::Zero(4, 3), Vector::Zero(4), 1.0};
  Labels p = Predict(zero, FeatureMatrix(RandomMatrix(7, 3, 2)));
  for (int32_t c : p) EXPECT_EQ(c, 0);
  EXPECT_THROW(Predict(m, FeatureMatrix(RandomMatrix(2, 4, 3))), InvalidInput);
}

TEST(PredictTest, MatchesArgmaxOracle) {
  LinearModel m{RandomMatrix(4, 5, 10), RandomMatrix(4, 1, 11).col(0), 1.0};
  Matrix x = RandomMatrix(200, 5, 12);
  Labels p = Predict(m, FeatureMatrix(x));
  for (int i = 0; i < 200; ++i) {
    int best = 0;
    double bs = -INFINITY;
    for (int c = 0; c < 4; ++c) {
      double s = m.bias(c);
      for (int j = 0; j < 5; ++j) s += m.weights(c, j) * x(i, j);
      if (s > bs) {
        bs = s;
        best = c;
      }
    }
    EXPECT_EQ(p[i], best);
  }
}

TEST(PredictTest, WeightSpaceTransformInvariance) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    CoralTransform t;
    t.a = RandomMatrix(6, 6, seed);
    t.source_dim = 6;
    LinearModel m{RandomMatrix(3, 6, seed + 10), RandomMatrix(3, 1, seed + 20).col(0), 1.0};
    FeatureMatrix x(RandomMatrix(500, 6, seed + 30));
    EXPECT_EQ(Predict(ApplyToWeights(t, m), x), Predict(m, ApplyToFeatures(t, x)));
  }
}

TEST(CrossValidateTest, SingleElementGrid) {
  FeatureMatrix x;
  Labels y;
  Blobs(20, 3, &x, &y);
  EXPECT_EQ(CrossValidateC(x, y, {0.3}, 5, 1), 0.3);
  EXPECT_THROW(CrossValidateC(x, y, {}, 5, 1), InvalidInput);
  EXPECT_THROW(CrossValidateC(x, y, {1.0}, 1, 1), InvalidInput);
}

TEST(CrossValidateTest, SeparableDataBruteForce) {
  FeatureMatrix x;
  Labels y;
  Blobs(60, 4, &x, &y);
  std::vector<double> grid = {0.01, 1.0, 100.0};
  CvResult r = CrossValidate(x, y, grid, 5, 9);
  // Independent re-evaluation of every grid point on the same folds.
  std::vector<Eigen::Index> order(60);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(9);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> acc(grid.size(), 0.0);
  for (int f = 0; f < 5; ++f) {
    Matrix tr(48, 2), te(12, 2);
    Labels ytr, yte;
    int a = 0, b = 0;
    for (int p = 0; p < 60; ++p) {
      if (p >= f * 12 && p < (f + 1) * 12) {
        te.row(b++) = x.data().row(order[p]);
        yte.push_back(y[order[p]]);
      } else {
        tr.row(a++) = x.data().row(order[p]);
        ytr.push_back(y[order[p]]);
      }
    }
    for (size_t g = 0; g < grid.size(); ++g) {
      SvmOptions o;
      o.c = grid[g];
      o.seed = 9;
      o.num_classes = 2;
      acc[g] += Accuracy(Predict(TrainSvm(FeatureMatrix(tr), ytr, o), FeatureMatrix(te)), yte) / 5;
    }
  }
  size_t best = std::find(grid.begin(), grid.end(), r.best_c) - grid.begin();
  ASSERT_LT(best, grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    EXPECT_NEAR(r.accuracy[g], acc[g], 1e-12);
    EXPECT_GE(acc[best], acc[g]);
  }
}

TEST(CrossValidateTest, PermutedLabelsNearChance) {
  FeatureMatrix x(RandomMatrix(300, 5, 21));
  Labels y(300);
  for (int i = 0; i < 300; ++i) y[i] = i % 3;
  std::mt19937_64 rng(22);
  std::shuffle(y.begin(), y.end(), rng);
  CvResult r = CrossValidate(x, y, DefaultCGrid(), 5, 23);
  for (double a : r.accuracy) EXPECT_NEAR(a, 1.0 / 3.0, 0.10);
  double top = *std::max_element(r.accuracy.begin(), r.accuracy.end());
  size_t first = std::find(r.accuracy.begin(), r.accuracy.end(), top) - r.accuracy.begin();
  EXPECT_EQ(r.best_c, r.grid[first]);
}

TEST(CrossValidateTest, UninformativeFeaturesTieToSmallestC) {
  FeatureMatrix x(Matrix::Zero(60, 3));
  Labels y(60);
  for (int i = 0; i < 60; ++i) y[i] = i % 2;
  std::mt19937_64 rng(5);
  std::shuffle(y.begin(), y.end(), rng);
  CvResult r = CrossValidate(x, y, {10.0, 0.01, 1.0}, 5, 6);
  for (double a : r.accuracy) EXPECT_EQ(a, r.accuracy[0]);
  EXPECT_EQ(r.best_c, 0.01);
}

TEST(AccuracyTest, Cases) {
  EXPECT_EQ(Accuracy({1, 2, 3}, {1, 2, 3}), 1.0);
  EXPECT_EQ(Accuracy({1, 2, 3}, {0, 0, 0}), 0.0);
  EXPECT_EQ(Accuracy({1, 2, 3, 4}, {1, 2, 0, 0}), 0.5);
  EXPECT_THROW(Accuracy({1}, {1, 2}), InvalidInput);
}

}  // namespace
}  // namespace coral
