// tests/acceptance_test.cc

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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Runtime limits are part of each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "coral/align.h"
#include "coral/classify.h"
#include "coral/dataset_io.h"
#include "coral/deep.h"
#include "coral/error.h"
#include "coral/experiment.h"
#include "coral/lda.h"
#include "coral/linalg.h"
#include "coral/shift.h"
#include "test_util.h"

namespace coral {
namespace {

using Clock = std::chrono::steady_clock;
using namespace testing;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void Run(int id, const char *name, double limit_s,
         const std::function<Outcome()> &body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = Since(t0);
  const bool in_time = secs < limit_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n",
              ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs, limit_s,
              in_time ? "" : " (too slow)");
  std::fflush(stdout);
}

std::string Fmt(const char *f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Rows drawn from N(0, L L').
FeatureMatrix Colored(Eigen::Index n, const Matrix &l, uint64_t seed) {
  return FeatureMatrix(RandomMatrix(n, l.cols(), seed) * l.transpose());
}

Outcome AnalyticalOptimality() {
  Outcome o;
  double worst_full = 0.0;
  const int dims[] = {2, 8, 16};
  for (int i = 0; i < 50; ++i) {
    const int d = dims[i % 3];
    const int n = 50 * d;
    FeatureMatrix s = Colored(n, RandomMatrix(d, d, 1000 + i), 2000 + i);
    FeatureMatrix t = Colored(n, RandomMatrix(d, d, 3000 + i), 4000 + i);
    CoralTransform c = FitAnalytical(s, t);
    Matrix ct = NaiveCovariance(t.data());
    Matrix got = NaiveCovariance(ApplyToFeatures(c, s).data());
    worst_full = std::max(worst_full, (got - ct).squaredNorm() / ct.squaredNorm());
  }
  // Source confined to the top-r eigenspace of a full-rank target (or the
  // target itself of rank r): the optimum is the rank-r truncation of C_T,
  // computed here with Eigen's own solver.
  double worst_trunc = 0.0;
  int cases = 0;
  for (int d : {4, 6, 10}) {
    for (int r = 1; r < d; r += 2) {
      const uint64_t seed = 100 * d + r;
      Matrix q = Eigen::HouseholderQR<Matrix>(RandomMatrix(d, d, seed))
                     .householderQ();
      Vector ev(d);
      for (int j = 0; j < d; ++j) ev(j) = std::pow(2.0, d - j);
      FeatureMatrix t = Colored(400 * d, q * ev.cwiseSqrt().asDiagonal(), seed + 1);
      Matrix ct = NaiveCovariance(t.data());
      Eigen::SelfAdjointEigenSolver<Matrix> es(ct);
      Matrix top = es.eigenvectors().rightCols(r);
      Matrix truncated =
          top * es.eigenvalues().tail(r).asDiagonal() * top.transpose();
      FeatureMatrix s(RandomMatrix(300, r, seed + 2, 3.0) * top.transpose());
      CoralTransform c = FitAnalytical(s, t);
      Matrix got = NaiveCovariance(ApplyToFeatures(c, s).data());
      worst_trunc = std::max(worst_trunc, (got - truncated).norm());
      if (c.rank_used != r) {
        o.pass = false;
        o.detail += "rank_used mismatch; ";
      }

      FeatureMatrix s_full = Colored(400 * d, RandomMatrix(d, d, seed + 3), seed + 4);
      FeatureMatrix t_low(RandomMatrix(400 * d, r, seed + 5) *
                          RandomMatrix(d, r, seed + 6).transpose());
      Matrix ct_low = NaiveCovariance(t_low.data());
      Matrix got_low =
          NaiveCovariance(ApplyToFeatures(FitAnalytical(s_full, t_low), s_full).data());
      worst_trunc = std::max(worst_trunc, (got_low - ct_low).norm());
      cases += 2;
    }
  }
  o.pass = o.pass && worst_full <= 1e-10 && worst_trunc <= 1e-6;
  o.detail += Fmt("50 full-rank pairs worst relative residual %.2e (<= 1e-10); "
                  "%g rank-deficient cases worst truncation error %.2e (<= 1e-6)",
                  worst_full, cases, worst_trunc);
  return o;
}

Outcome GradientCorrectness() {
  double worst = 0.0;
  for (int n : {4, 8, 32}) {
    for (int d : {2, 5, 16}) {
      for (uint64_t s = 0; s < 20; ++s) {
        Matrix src = RandomMatrix(n, d, 7919 * s + 31 * n + d);
        Matrix tgt = RandomMatrix(n, d, 7919 * s + 31 * n + d + 1, 1.5);
        worst = std::max(worst, deep::FiniteDiffCheck(src, tgt, 1e-5));
      }
    }
  }
  return {worst <= 1e-5,
          Fmt("max relative error %.2e over 180 checks (<= 1e-5)", worst)};
}

ExperimentConfig BenchmarkConfig() {
  ExperimentConfig cfg;
  cfg.shift = RotatedAnisotropicSpec();
  cfg.trials = 20;
  cfg.seed = 1;
  cfg.lambda = 1.0;
  return cfg;
}

Outcome AdaptationBenefit() {
  ExperimentConfig cfg = BenchmarkConfig();
  cfg.methods = {"NA", "CORAL-reg", "whiten-both"};
  ExperimentReport r = RunExperiment(cfg);
  const double na = 100 * r.Get("NA").mean_target_acc;
  const double co = 100 * r.Get("CORAL-reg").mean_target_acc;
  const double wb = 100 * r.Get("whiten-both").mean_target_acc;
  return {co - na >= 10.0 && wb <= co,
          Fmt("NA %.2f%%, CORAL-reg %.2f%% (gain %.2f >= 10 points), "
              "whiten-both %.2f%% (<= CORAL-reg)",
              na, co, co - na, wb)};
}

Outcome LambdaStability() {
  SweepReport r = LambdaSweep(BenchmarkConfig(), {0.001, 0.01, 0.1, 1.0, 0.0});
  std::string accs;
  for (const SweepRow &row : r.rows)
    accs += Fmt(" %.2f", 100 * row.mean_target_acc);
  return {100 * r.spread <= 2.0,
          Fmt("spread %.2f points (<= 2) over", 100 * r.spread) + accs};
}

Outcome LdaReductionAndMismatch() {
  double worst = 0.0;
  for (uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 19);
    LdaInputs inp;
    inp.mu_pos = RandomMatrix(d, 1, 5000 + s).col(0);
    inp.mu_neg = RandomMatrix(d, 1, 6000 + s).col(0);
    inp.cov_source = RandomSpd(d, 7000 + s);
    inp.cov_target = inp.cov_source;
    inp.lambda = 0.01 + 0.1 * static_cast<double>(s % 10);
    Vector a = FitCoralLda(inp).w;
    Vector b = FitLda(inp).w;
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  MismatchConfig mc;
  mc.seeds = 20;
  MismatchReport m = StatsMismatchExperiment(mc);
  const int e = m.eval_domain;
  bool ordered = true;
  double margin = 1.0;
  for (size_t r = 0; r < m.accuracy.size(); ++r)
    for (size_t c = 0; c < m.accuracy[r].size(); ++c)
      if (static_cast<int>(c) != e) {
        margin = std::min(margin, m.accuracy[r][e] - m.accuracy[r][c]);
        ordered = ordered && m.accuracy[r][e] >= m.accuracy[r][c];
      }
  return {worst <= 1e-8 && ordered,
          Fmt("CORAL-LDA vs LDA with equal covariances max |dw| %.2e "
              "(<= 1e-8) over 100 instances; matched-stats accuracy minus "
              "unrelated-stats accuracy >= %.2f points over 20 seeds",
              worst, 100 * margin)};
}

Outcome DeepEquilibrium() {
  ExperimentConfig cfg;
  cfg.shift = DeepShiftSpec();
  cfg.seed = 1;
  const int seeds = 5;
  DeepExperimentReport r = RunDeepExperiment(cfg, seeds);
  double with = 0.0, without = 0.0, min_ratio = INFINITY;
  for (int s = 0; s < seeds; ++s) {
    with += 100 * r.with_coral[s].target_acc / seeds;
    without += 100 * r.without_coral[s].target_acc / seeds;
    min_ratio = std::min(min_ratio, r.without_coral[s].final_coral_distance /
                                        r.with_coral[s].final_coral_distance);
  }

  bool identical = true;
  for (int s = 0; s < seeds; ++s) {
    ShiftSpec spec = DeepShiftSpec();
    spec.seed = cfg.seed + s;
    ShiftData data = GenerateShift(spec);
    Matrix xs = linalg::Standardize(data.source.features).data.data();
    Matrix xt = linalg::Standardize(data.target.features).data.data();
    deep::TrainConfig tc = cfg.deep.train;
    tc.seed = spec.seed;
    tc.momentum = 0.9;
    tc.coral_weights = {0.0};
    deep::Network net = deep::MakeNetwork({20, 32, 3}, spec.seed);
    deep::TrainResult a = deep::TrainJoint(net, xs, *data.source.labels, xt, tc);
    deep::TrainResult b = deep::TrainSourceOnly(net, xs, *data.source.labels, xt, tc);
    identical = identical && a.report.class_loss == b.report.class_loss;
    for (size_t l = 0; l < a.net.layers.size(); ++l)
      identical = identical && a.net.layers[l].w == b.net.layers[l].w &&
                  a.net.layers[l].b == b.net.layers[l].b;
  }
  const double lambda = cfg.deep.train.coral_weights[0];
  return {with - without >= 5.0 && min_ratio >= 10.0 && identical,
          Fmt("(a) target accuracy %.2f%% with CORAL (lambda %g) vs %.2f%% "
              "without, gain %.2f >= 5 points; ",
              with, lambda, without, with - without) +
              Fmt("(b) lambda=0 / CORAL final distance >= %.1fx on every "
                  "seed (>= 10x); ",
                  min_ratio) +
              "(c) zero-weight run " +
              (identical ? "bit-identical to" : "differs from") +
              " classifier-only training"};
}

Outcome Throughput() {
  std::string detail;
  bool ok = true;
  for (int d : {4096, 1024}) {
    FeatureMatrix s(RandomMatrix(795, d, 11));
    FeatureMatrix t(RandomMatrix(2817, d, 12, 2.0));
    auto t0 = Clock::now();
    CoralTransform c = FitRegularized(s, t, 1.0);
    FeatureMatrix out = ApplyToFeatures(c, s);
    const double secs = Since(t0);
    const double limit = d == 4096 ? 60.0 : 5.0;
    ok = ok && secs < limit && out.rows() == 795 && out.cols() == d;
    detail += Fmt("d=%g fit+apply %.2f s (< %g s); ", d, secs, limit);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Outcome Equivalence() {
  const int d = 20, n = 10000;
  ShiftSpec spec = RotatedAnisotropicSpec();
  spec.seed = 3;
  ShiftData data = GenerateShift(spec);
  CoralTransform t = FitRegularized(data.source.features, data.target.features, 1.0);
  LinearModel m = TrainSvm(ApplyToFeatures(t, data.source.features),
                           *data.source.labels, 1.0, 20, 3);
  FeatureMatrix x(RandomMatrix(n, d, 4, 3.0));
  Matrix feature_path = Scores(m, ApplyToFeatures(t, x));
  Matrix weight_path = Scores(ApplyToWeights(t, m), x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < feature_path.size(); ++i) {
    const double a = feature_path.data()[i], b = weight_path.data()[i];
    const double den = std::max(std::abs(a), std::abs(b));
    worst = std::max(worst, den > 0 ? std::abs(a - b) / den : 0.0);
  }
  Labels pa = Predict(m, ApplyToFeatures(t, x));
  Labels pb = Predict(ApplyToWeights(t, m), x);
  return {pa == pb && worst <= 1e-9,
          Fmt("argmax identical on %g points: ", n) + (pa == pb ? "yes" : "no") +
              Fmt("; worst relative score difference %.2e (<= 1e-9)", worst)};
}

template <class F>
bool Throws(F f) {
  try {
    f();
  } catch (const FormatError &) {
    return true;
  } catch (const InvalidInput &) {
    return true;
  }
  return false;
}

Outcome IoRoundTrips() {
  Dataset ds;
  ds.features = FeatureMatrix(RandomMatrix(257, 13, 21, 1e3));
  ds.labels = Labels(257);
  for (int i = 0; i < 257; ++i) (*ds.labels)[i] = i % 4;

  const std::string bytes = FormatBin(ds);
  Dataset back = ParseBin(bytes);
  const std::string path = "acceptance_roundtrip.bin";
  SaveBin(ds, path);
  Dataset from_file = LoadBin(path);
  std::remove(path.c_str());
  const bool bin_ok = back.features.data() == ds.features.data() &&
                      back.labels == ds.labels && FormatBin(back) == bytes &&
                      from_file.features.data() == ds.features.data();

  Dataset csv = ParseCsv(FormatCsv(ds, true), CsvOptions{true, true});
  const double csv_err =
      ((csv.features.data() - ds.features.data()).array().abs() /
       ds.features.data().array().abs().max(1e-300))
          .maxCoeff();
  const bool csv_ok = csv_err <= 1e-15 && csv.labels == ds.labels;

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::string bad_version = bytes;
  bad_version[4] = 2;
  std::vector<std::function<void()>> bad = {
      [&] { ParseBin(bad_magic); },
      [&] { ParseBin(bad_version); },
      [&] { ParseBin(bytes.substr(0, bytes.size() - 3)); },
      [&] { ParseBin(bytes + "x"); },
      [&] { ParseBin(""); },
      [] { ParseCsv("1,2\n3\n", {}); },
      [] { ParseCsv("1,abc\n", {}); },
      [] { ParseCsv("1,nan\n", {}); },
      [] { ParseCsv("1,2,0.5\n", CsvOptions{false, true}); },
      [] { ParseCsv("1,2,-1\n", CsvOptions{false, true}); },
      [] { LoadCsv("/nonexistent/dir/x.csv", {}); },
  };
  int raised = 0;
  for (auto &f : bad) raised += Throws(f);
  const int bad_count = static_cast<int>(bad.size());
  return {bin_ok && csv_ok && raised == bad_count,
          std::string("binary bit-identical: ") + (bin_ok ? "yes" : "no") +
              Fmt("; CSV worst relative error %.2e (<= 1e-15); ", csv_err) +
              Fmt("%g of %g malformed inputs rejected", raised, bad_count)};
}

}  // namespace
}  // namespace coral

int main() {
  using namespace coral;
  Run(1, "analytical optimality", 10, AnalyticalOptimality);
  Run(2, "gradient correctness", 30, GradientCorrectness);
  Run(3, "adaptation benefit", 120, AdaptationBenefit);
  Run(4, "lambda stability", 180, LambdaStability);
  Run(5, "CORAL-LDA reduction and mismatch", 60, LdaReductionAndMismatch);
  Run(6, "deep CORAL equilibrium", 300, DeepEquilibrium);
  // Each size carries its own limit inside the check; this bounds both.
  Run(7, "throughput", 65, Throughput);
  Run(8, "weight/feature equivalence", 5, Equivalence);
  Run(9, "I/O round trips", 5, IoRoundTrips);
  std::printf("%d of 9 criteria failed\n", coral::failures);
  return coral::failures == 0 ? 0 : 1;
}
