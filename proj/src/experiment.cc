// experiment.cc

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

#include "coral/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "coral/align.h"
#include "coral/classify.h"
#include "coral/error.h"
#include "coral/lda.h"
#include "coral/linalg.h"

namespace coral {

using nlohmann::json;

deep::TrainConfig DefaultDeepTrainConfig() {
  deep::TrainConfig c;
  c.coral_weights = {5.0};
  c.coral_layers = {-1};
  c.learning_rate = 0.05;
  c.batch_size = 64;
  c.iterations = 500;
  return c;
}

const std::vector<std::string> &KnownMethods() {
  static const std::vector<std::string> m = {
      "NA",   "CORAL-reg", "CORAL-analytical", "whiten-both",
      "target-recolor-source-direction",       "LDA",
      "CORAL-LDA", "CORAL-LDA-mismatched",     "deep",
      "deep-no-coral"};
  return m;
}

const MethodSummary &ExperimentReport::Get(const std::string &method) const {
  for (const MethodSummary &m : methods)
    if (m.method == method) return m;
  throw InvalidInput("method not in report: " + method);
}

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct TrialData {
  FeatureMatrix xs, xt, xu;  // standardized source, target, unrelated domain
  Labels ys, yt;
  int k = 0;
};

TrialData PrepareTrial(const ExperimentConfig &cfg, uint64_t seed,
                       bool need_unrelated) {
  TrialData td;
  Dataset src, tgt;
  std::optional<Dataset> unrelated;
  if (!cfg.source_file.empty() || !cfg.target_file.empty()) {
    if (cfg.source_file.empty() || cfg.target_file.empty())
      throw InvalidInput("both source_file and target_file are required");
    CsvOptions opts{cfg.files_have_header, true};
    src = LoadDataset(cfg.source_file, opts);
    tgt = LoadDataset(cfg.target_file, opts);
    if (need_unrelated)
      throw InvalidInput("CORAL-LDA-mismatched needs generated data");
  } else {
    ShiftSpec spec = cfg.shift;
    spec.seed = seed;
    ShiftData sd = GenerateShift(spec, need_unrelated ? 1 : 0);
    src = std::move(sd.source);
    tgt = std::move(sd.target);
    if (need_unrelated) unrelated = std::move(sd.extra[0]);
  }
  if (!src.labels || !tgt.labels)
    throw InvalidInput("experiment data must carry labels");
  if (src.features.cols() != tgt.features.cols())
    throw InvalidInput("source and target dimensions differ");
  td.xs = linalg::Standardize(src.features).data;
  td.xt = linalg::Standardize(tgt.features).data;
  if (unrelated) td.xu = linalg::Standardize(unrelated->features).data;
  td.ys = *src.labels;
  td.yt = *tgt.labels;
  td.k = std::max(src.num_classes(), tgt.num_classes());
  return td;
}

struct Fitted {
  double target_acc, source_acc;
};

Fitted TrainAndEvaluate(const ExperimentConfig &cfg, uint64_t seed,
                        const FeatureMatrix &train, const Labels &ys,
                        const FeatureMatrix &test, const Labels &yt, int k) {
  double c = CrossValidateC(train, ys, cfg.c_grid, cfg.folds, seed,
                            cfg.svm_epochs);
  SvmOptions opts;
  opts.c = c;
  opts.epochs = cfg.svm_epochs;
  opts.seed = seed;
  opts.num_classes = k;
  LinearModel m = TrainSvm(train, ys, opts);
  return {Accuracy(Predict(m, test), yt), Accuracy(Predict(m, train), ys)};
}

DomainStats Stats(const FeatureMatrix &x) { return linalg::MeanAndCovariance(x); }

// One-vs-rest LDA.  Returns per-class weights in source coordinates, their
// biases, and for CORAL-LDA the weights to apply to target features.
struct LdaScorer {
  Matrix source_w;  // K x d
  Matrix target_w;  // K x d
  Vector bias;
};

LdaScorer FitLdaScorer(const FeatureMatrix &xs, const Labels &ys, int k,
                       const Matrix *cov_target, double lambda) {
  const Eigen::Index d = xs.cols();
  Matrix cov = linalg::Covariance(xs.data());
  LdaScorer out{Matrix(k, d), Matrix(k, d), Vector(k)};
  for (int c = 0; c < k; ++c) {
    Vector sum_pos = Vector::Zero(d), sum_neg = Vector::Zero(d);
    long npos = 0, nneg = 0;
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      if (ys[i] == c) {
        sum_pos += xs.data().row(i).transpose();
        ++npos;
      } else {
        sum_neg += xs.data().row(i).transpose();
        ++nneg;
      }
    }
    LdaInputs inp;
    inp.mu_pos = npos ? Vector(sum_pos / npos) : Vector(Vector::Zero(d));
    inp.mu_neg = nneg ? Vector(sum_neg / nneg) : Vector(Vector::Zero(d));
    inp.cov_source = cov;
    inp.lambda = lambda;
    LdaModel plain = FitLda(inp);
    out.source_w.row(c) = plain.w.transpose();
    out.bias(c) = -0.5 * plain.w.dot(inp.mu_pos + inp.mu_neg);
    if (cov_target) {
      inp.cov_target = *cov_target;
      out.target_w.row(c) = FitCoralLda(inp).w.transpose();
    } else {
      out.target_w.row(c) = plain.w.transpose();
    }
  }
  return out;
}

double LdaAccuracy(const Matrix &w, const Vector &b, const FeatureMatrix &x,
                   const Labels &y) {
  LinearModel m;
  m.weights = w;
  m.bias = b;
  return Accuracy(Predict(m, x), y);
}

TrialResult RunMethod(const ExperimentConfig &cfg, const std::string &method,
                      const TrialData &td, uint64_t seed) {
  auto t0 = Clock::now();
  TrialResult r;
  const Matrix ct = linalg::Covariance(td.xt.data());
  r.cov_dist_pre = CovarianceDistanceSq(td.xs, ct);
  const DomainStats target_stats = Stats(td.xt);

  auto linear = [&](const FeatureMatrix &train, const FeatureMatrix &test) {
    Fitted f = TrainAndEvaluate(cfg, seed, train, td.ys, test, td.yt, td.k);
    r.target_acc = f.target_acc;
    r.source_acc = f.source_acc;
    r.cov_dist_post = linalg::FrobeniusDistanceSq(
        linalg::Covariance(train.data()), linalg::Covariance(test.data()));
    r.domain_distance = DomainDistance(Stats(train), Stats(test));
  };

  if (method == "NA") {
    linear(td.xs, td.xt);
  } else if (method == "CORAL-reg") {
    linear(ApplyToFeatures(FitRegularized(td.xs, td.xt, cfg.lambda), td.xs),
           td.xt);
  } else if (method == "CORAL-analytical") {
    linear(ApplyToFeatures(FitAnalytical(td.xs, td.xt), td.xs), td.xt);
  } else if (method == "whiten-both") {
    auto [ws, wt] = WhitenBothBaseline(td.xs, td.xt);
    linear(ws, wt);
  } else if (method == "target-recolor-source-direction") {
    linear(td.xs,
           ApplyToFeatures(FitRegularized(td.xt, td.xs, cfg.lambda), td.xt));
  } else if (method == "LDA" || method == "CORAL-LDA" ||
             method == "CORAL-LDA-mismatched") {
    Matrix cov_u;
    const Matrix *cov_t = nullptr;
    if (method == "CORAL-LDA") cov_t = &ct;
    if (method == "CORAL-LDA-mismatched") {
      cov_u = linalg::Covariance(td.xu.data());
      cov_t = &cov_u;
    }
    LdaScorer s = FitLdaScorer(td.xs, td.ys, td.k, cov_t, cfg.lda_lambda);
    r.source_acc = LdaAccuracy(s.source_w, s.bias, td.xs, td.ys);
    r.target_acc = LdaAccuracy(s.target_w, s.bias, td.xt, td.yt);
    r.cov_dist_post = r.cov_dist_pre;
    r.domain_distance = DomainDistance(Stats(td.xs), target_stats);
  } else if (method == "deep" || method == "deep-no-coral") {
    std::vector<int> widths = {static_cast<int>(td.xs.cols())};
    for (int h : cfg.deep.hidden) widths.push_back(h);
    widths.push_back(td.k);
    deep::TrainConfig tc = cfg.deep.train;
    tc.seed = seed;
    deep::Network net = deep::MakeNetwork(widths, seed, tc.init_std,
                                          tc.other_init_std);
    deep::TrainResult res =
        method == "deep"
            ? deep::TrainJoint(net, td.xs.data(), td.ys, td.xt.data(), tc)
            : deep::TrainSourceOnly(net, td.xs.data(), td.ys, td.xt.data(), tc);
    auto acc = [](const deep::Network &n, const FeatureMatrix &x,
                  const Labels &y) {
      return Accuracy(deep::PredictNet(n, x.data()), y);
    };
    r.target_acc = acc(res.net, td.xt, td.yt);
    r.source_acc = acc(res.net, td.xs, td.ys);
    r.cov_dist_post = res.report.final_coral_distance.empty()
                          ? 0.0
                          : res.report.final_coral_distance[0];
    r.domain_distance = DomainDistance(Stats(td.xs), target_stats);
  } else {
    throw InvalidInput("unknown method identifier: " + method);
  }
  r.seconds = Seconds(t0);
  return r;
}

void Summarize(MethodSummary *m) {
  const double n = static_cast<double>(m->trials.size());
  if (n == 0) return;
  for (const TrialResult &t : m->trials) {
    m->mean_target_acc += t.target_acc / n;
    m->mean_source_acc += t.source_acc / n;
    m->mean_cov_dist_pre += t.cov_dist_pre / n;
    m->mean_cov_dist_post += t.cov_dist_post / n;
    m->mean_domain_distance += t.domain_distance / n;
    m->seconds += t.seconds;
  }
  double var = 0.0;
  for (const TrialResult &t : m->trials)
    var += (t.target_acc - m->mean_target_acc) *
           (t.target_acc - m->mean_target_acc);
  m->std_target_acc = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
}

void CheckConfig(const ExperimentConfig &cfg) {
  if (cfg.trials < 1) throw InvalidInput("trials must be >= 1");
  if (cfg.c_grid.empty()) throw InvalidInput("empty C grid");
  if (cfg.folds < 2) throw InvalidInput("folds must be >= 2");
  if (cfg.svm_epochs < 1) throw InvalidInput("svm_epochs must be >= 1");
  for (const std::string &m : cfg.methods)
    if (std::find(KnownMethods().begin(), KnownMethods().end(), m) ==
        KnownMethods().end())
      throw InvalidInput("unknown method identifier: " + m);
}

}  // namespace

ExperimentReport RunExperiment(const ExperimentConfig &cfg) {
  CheckConfig(cfg);
  bool need_unrelated =
      std::find(cfg.methods.begin(), cfg.methods.end(),
                "CORAL-LDA-mismatched") != cfg.methods.end();
  ExperimentReport report;
  for (const std::string &m : cfg.methods) {
    report.methods.emplace_back();
    report.methods.back().method = m;
  }
  for (int t = 0; t < cfg.trials; ++t) {
    const uint64_t seed = cfg.seed + static_cast<uint64_t>(t);
    TrialData td = PrepareTrial(cfg, seed, need_unrelated);
    for (MethodSummary &m : report.methods)
      m.trials.push_back(RunMethod(cfg, m.method, td, seed));
  }
  for (MethodSummary &m : report.methods) Summarize(&m);
  return report;
}

SweepReport LambdaSweep(const ExperimentConfig &cfg,
                        const std::vector<double> &lambdas) {
  if (lambdas.empty()) throw InvalidInput("empty lambda list");
  for (double l : lambdas)
    if (l < 0) throw InvalidInput("lambda must be >= 0");
  ExperimentConfig base = cfg;
  base.methods = {};
  CheckConfig(base);
  std::vector<std::vector<double>> acc(lambdas.size());
  for (int t = 0; t < cfg.trials; ++t) {
    const uint64_t seed = cfg.seed + static_cast<uint64_t>(t);
    TrialData td = PrepareTrial(cfg, seed, false);
    for (size_t i = 0; i < lambdas.size(); ++i) {
      ExperimentConfig c = cfg;
      c.lambda = lambdas[i];
      const char *method = lambdas[i] > 0 ? "CORAL-reg" : "CORAL-analytical";
      acc[i].push_back(RunMethod(c, method, td, seed).target_acc);
    }
  }
  SweepReport rep;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    MethodSummary m;
    for (double a : acc[i]) m.trials.push_back({a});
    Summarize(&m);
    SweepRow row;
    char buf[64];
    std::snprintf(buf, sizeof buf, "lambda=%g", lambdas[i]);
    row.label = lambdas[i] > 0 ? buf : "analytical";
    row.lambda = lambdas[i];
    row.mean_target_acc = m.mean_target_acc;
    row.std_target_acc = m.std_target_acc;
    rep.rows.push_back(row);
  }
  auto [lo, hi] = std::minmax_element(
      rep.rows.begin(), rep.rows.end(), [](const SweepRow &a, const SweepRow &b) {
        return a.mean_target_acc < b.mean_target_acc;
      });
  rep.spread = hi->mean_target_acc - lo->mean_target_acc;
  return rep;
}

MismatchReport StatsMismatchExperiment(const MismatchConfig &cfg) {
  if (cfg.d < 1 || cfg.n_per_class < 2 || cfg.num_domains < 2 ||
      cfg.eval_domain < 0 || cfg.eval_domain >= cfg.num_domains ||
      cfg.seeds < 1 || !(cfg.anisotropy > 0) || cfg.lambda < 0)
    throw InvalidInput("invalid stats-mismatch configuration");
  const int nd = cfg.num_domains, d = cfg.d, n = cfg.n_per_class;
  MismatchReport rep;
  rep.eval_domain = cfg.eval_domain;
  rep.accuracy.assign(nd, std::vector<double>(nd, 0.0));
  rep.domain_distance.assign(nd, std::vector<double>(nd, 0.0));
  Vector scales(d);
  for (int i = 0; i < d; ++i)
    scales(i) = d == 1 ? cfg.anisotropy
                       : cfg.anisotropy *
                             std::pow(1.0 / (cfg.anisotropy * cfg.anisotropy),
                                      static_cast<double>(i) / (d - 1));

  for (int s = 0; s < cfg.seeds; ++s) {
    std::mt19937_64 rng(cfg.seed + static_cast<uint64_t>(s));
    std::normal_distribution<double> g(0.0, 1.0);
    Vector delta(d);
    for (int i = 0; i < d; ++i) delta(i) = g(rng);
    delta *= cfg.separation / delta.norm();

    struct Domain {
      Matrix pos, neg;
      DomainStats background;
      Vector mu_pos;
    };
    std::vector<Domain> doms(nd);
    for (Domain &dom : doms) {
      Matrix r = RandomRotation(d, rng());
      Matrix map = r * scales.asDiagonal() * r.transpose();
      Vector offset(d);
      for (int i = 0; i < d; ++i) offset(i) = cfg.offset_std * g(rng);
      auto draw = [&](bool positive) {
        Matrix z(n, d);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < d; ++j) z(i, j) = g(rng) + (positive ? delta(j) : 0.0);
        Matrix x = z * map;
        x.rowwise() += offset.transpose();
        return x;
      };
      dom.pos = draw(true);
      dom.neg = draw(false);
      dom.background = linalg::MeanAndCovariance(dom.neg);
      dom.mu_pos = dom.pos.colwise().mean().transpose();
    }
    const Domain &ev = doms[cfg.eval_domain];
    for (int r = 0; r < nd; ++r) {
      Matrix ws = linalg::SymPower(
          doms[r].background.cov + cfg.lambda * Matrix::Identity(d, d), -0.5);
      Vector what = ws * (doms[r].mu_pos - doms[r].background.mean);
      const double threshold = 0.5 * what.squaredNorm();
      for (int c = 0; c < nd; ++c) {
        LdaInputs inp;
        inp.mu_pos = doms[r].mu_pos;
        inp.mu_neg = doms[r].background.mean;
        inp.cov_source = doms[r].background.cov;
        inp.cov_target = doms[c].background.cov;
        inp.lambda = cfg.lambda;
        LdaModel m = FitCoralLda(inp);
        const Vector &mu0 = doms[c].background.mean;
        Vector sp = (ev.pos.rowwise() - mu0.transpose()) * m.w;
        Vector sn = (ev.neg.rowwise() - mu0.transpose()) * m.w;
        long hit = (sp.array() > threshold).count() +
                   (sn.array() <= threshold).count();
        rep.accuracy[r][c] += static_cast<double>(hit) / (2.0 * n) / cfg.seeds;
        rep.domain_distance[r][c] +=
            DomainDistance(doms[r].background, doms[c].background) / cfg.seeds;
      }
    }
  }
  return rep;
}

DeepExperimentReport RunDeepExperiment(const ExperimentConfig &cfg, int seeds) {
  if (seeds < 1) throw InvalidInput("seeds must be >= 1");
  DeepExperimentReport rep;
  for (int s = 0; s < seeds; ++s) {
    const uint64_t seed = cfg.seed + static_cast<uint64_t>(s);
    TrialData td = PrepareTrial(cfg, seed, false);
    std::vector<int> widths = {static_cast<int>(td.xs.cols())};
    for (int h : cfg.deep.hidden) widths.push_back(h);
    widths.push_back(td.k);
    deep::TrainConfig tc = cfg.deep.train;
    tc.seed = seed;
    deep::Network net =
        deep::MakeNetwork(widths, seed, tc.init_std, tc.other_init_std);
    for (int pass = 0; pass < 2; ++pass) {
      deep::TrainConfig c = tc;
      if (pass == 1)
        std::fill(c.coral_weights.begin(), c.coral_weights.end(), 0.0);
      deep::TrainResult res = deep::TrainJoint(net, td.xs.data(), td.ys,
                                               td.xt.data(), c, &td.yt);
      DeepRun run;
      run.seed = seed;
      run.target_acc = Accuracy(deep::PredictNet(res.net, td.xt.data()), td.yt);
      run.source_acc = Accuracy(deep::PredictNet(res.net, td.xs.data()), td.ys);
      run.final_coral_distance = res.report.final_coral_distance.at(0);
      run.report = std::move(res.report);
      (pass == 0 ? rep.with_coral : rep.without_coral).push_back(std::move(run));
    }
  }
  return rep;
}

std::string CurvesCsv(const deep::LossReport &report) {
  std::string out = "iteration,class_loss,coral_loss,source_acc,target_acc\n";
  char buf[256];
  for (size_t i = 0; i < report.class_loss.size(); ++i) {
    double cl = report.coral_loss.empty() || report.coral_loss[0].empty()
                    ? 0.0
                    : report.coral_loss[0][i];
    double ta = report.target_acc.empty() ? NAN : report.target_acc[i];
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.6f,%.6f\n", i + 1,
                  report.class_loss[i], cl, report.source_acc[i], ta);
    out += buf;
  }
  return out;
}

// ---- JSON ----

namespace {

template <class T>
void Read(const json &j, const char *key, T *out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    *out = it->get<T>();
  } catch (const json::exception &e) {
    throw InvalidInput(std::string("config key '") + key + "': " + e.what());
  }
}

void RequireKnownKeys(const json &j, const std::set<std::string> &keys,
                      const char *what) {
  if (!j.is_object())
    throw InvalidInput(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key()))
      throw InvalidInput(std::string("unknown key '") + it.key() + "' in " + what);
}

json RunJson(const DeepRun &r) {
  return {{"seed", r.seed},
          {"target_acc", r.target_acc},
          {"source_acc", r.source_acc},
          {"final_coral_distance", r.final_coral_distance},
          {"final_class_loss",
           r.report.class_loss.empty() ? 0.0 : r.report.class_loss.back()}};
}

}  // namespace

json ToJson(const ShiftSpec &s) {
  return {{"d", s.d},
          {"k", s.k},
          {"n_source", s.n_source},
          {"n_target", s.n_target},
          {"latent_dim", s.latent_dim},
          {"separation", s.separation},
          {"random_rotation", s.random_rotation},
          {"rotation_angles", s.rotation_angles},
          {"scales", s.scales},
          {"anisotropy", s.anisotropy},
          {"source_scales", s.source_scales},
          {"mean_shift", s.mean_shift},
          {"class_shift", s.class_shift},
          {"noise_std", s.noise_std},
          {"seed", s.seed}};
}

ShiftSpec ShiftSpecFromJson(const json &j) {
  RequireKnownKeys(j,
                   {"d", "k", "n_source", "n_target", "latent_dim", "separation",
                    "random_rotation", "rotation_angles", "scales", "anisotropy",
                    "source_scales", "mean_shift", "class_shift", "noise_std", "seed"},
                   "shift spec");
  ShiftSpec s = RotatedAnisotropicSpec();
  Read(j, "d", &s.d);
  Read(j, "k", &s.k);
  Read(j, "n_source", &s.n_source);
  Read(j, "n_target", &s.n_target);
  Read(j, "latent_dim", &s.latent_dim);
  Read(j, "separation", &s.separation);
  Read(j, "random_rotation", &s.random_rotation);
  Read(j, "rotation_angles", &s.rotation_angles);
  Read(j, "scales", &s.scales);
  Read(j, "anisotropy", &s.anisotropy);
  Read(j, "source_scales", &s.source_scales);
  Read(j, "mean_shift", &s.mean_shift);
  Read(j, "class_shift", &s.class_shift);
  Read(j, "noise_std", &s.noise_std);
  Read(j, "seed", &s.seed);
  ValidateShiftSpec(s);
  return s;
}

deep::TrainConfig TrainConfigFromJson(const json &j, deep::TrainConfig base) {
  RequireKnownKeys(j,
                   {"coral_weights", "coral_layers", "class_weight",
                    "learning_rate", "momentum", "batch_size", "iterations",
                    "seed", "init_std", "other_init_std", "balance"},
                   "train config");
  deep::TrainConfig c = std::move(base);
  Read(j, "coral_weights", &c.coral_weights);
  Read(j, "coral_layers", &c.coral_layers);
  Read(j, "class_weight", &c.class_weight);
  Read(j, "learning_rate", &c.learning_rate);
  Read(j, "momentum", &c.momentum);
  Read(j, "batch_size", &c.batch_size);
  Read(j, "iterations", &c.iterations);
  Read(j, "seed", &c.seed);
  Read(j, "init_std", &c.init_std);
  Read(j, "other_init_std", &c.other_init_std);
  std::string balance =
      c.balance == deep::LossBalance::kAuto ? "auto" : "fixed";
  Read(j, "balance", &balance);
  if (balance == "fixed")
    c.balance = deep::LossBalance::kFixed;
  else if (balance == "auto")
    c.balance = deep::LossBalance::kAuto;
  else
    throw InvalidInput("balance must be 'fixed' or 'auto'");
  if (c.batch_size < 2) throw InvalidInput("batch_size must be >= 2");
  if (c.coral_weights.size() != c.coral_layers.size())
    throw InvalidInput("coral_weights and coral_layers differ in length");
  for (double w : c.coral_weights)
    if (w < 0) throw InvalidInput("coral_weights must be >= 0");
  return c;
}

ExperimentConfig ExperimentConfigFromJson(const json &j) {
  RequireKnownKeys(j,
                   {"shift", "source_file", "target_file", "files_have_header",
                    "methods", "trials", "seed", "lambda", "c_grid", "folds",
                    "svm_epochs", "lda_lambda", "deep"},
                   "experiment config");
  ExperimentConfig c;
  if (j.contains("shift")) c.shift = ShiftSpecFromJson(j["shift"]);
  Read(j, "source_file", &c.source_file);
  Read(j, "target_file", &c.target_file);
  Read(j, "files_have_header", &c.files_have_header);
  Read(j, "methods", &c.methods);
  Read(j, "trials", &c.trials);
  Read(j, "seed", &c.seed);
  Read(j, "lambda", &c.lambda);
  Read(j, "c_grid", &c.c_grid);
  Read(j, "folds", &c.folds);
  Read(j, "svm_epochs", &c.svm_epochs);
  Read(j, "lda_lambda", &c.lda_lambda);
  if (j.contains("deep")) {
    const json &dj = j["deep"];
    RequireKnownKeys(dj, {"hidden", "train"}, "deep settings");
    Read(dj, "hidden", &c.deep.hidden);
    if (dj.contains("train")) c.deep.train = TrainConfigFromJson(dj["train"], c.deep.train);
  }
  if (!(c.lambda > 0)) throw InvalidInput("lambda must be > 0");
  CheckConfig(c);
  return c;
}

MismatchConfig MismatchConfigFromJson(const json &j) {
  RequireKnownKeys(j,
                   {"d", "n_per_class", "separation", "anisotropy", "offset_std",
                    "num_domains", "eval_domain", "lambda", "seeds", "seed"},
                   "mismatch config");
  MismatchConfig c;
  Read(j, "d", &c.d);
  Read(j, "n_per_class", &c.n_per_class);
  Read(j, "separation", &c.separation);
  Read(j, "anisotropy", &c.anisotropy);
  Read(j, "offset_std", &c.offset_std);
  Read(j, "num_domains", &c.num_domains);
  Read(j, "eval_domain", &c.eval_domain);
  Read(j, "lambda", &c.lambda);
  Read(j, "seeds", &c.seeds);
  Read(j, "seed", &c.seed);
  return c;
}

json ToJson(const ExperimentConfig &c) {
  json j = {{"shift", ToJson(c.shift)},
            {"methods", c.methods},
            {"trials", c.trials},
            {"seed", c.seed},
            {"lambda", c.lambda},
            {"c_grid", c.c_grid},
            {"folds", c.folds},
            {"svm_epochs", c.svm_epochs},
            {"lda_lambda", c.lda_lambda}};
  if (!c.source_file.empty()) {
    j["source_file"] = c.source_file;
    j["target_file"] = c.target_file;
    j["files_have_header"] = c.files_have_header;
  }
  const deep::TrainConfig &t = c.deep.train;
  j["deep"] = {{"hidden", c.deep.hidden},
               {"train",
                {{"coral_weights", t.coral_weights},
                 {"coral_layers", t.coral_layers},
                 {"class_weight", t.class_weight},
                 {"learning_rate", t.learning_rate},
                 {"momentum", t.momentum},
                 {"batch_size", t.batch_size},
                 {"iterations", t.iterations},
                 {"seed", t.seed},
                 {"init_std", t.init_std},
                 {"other_init_std", t.other_init_std},
                 {"balance", t.balance == deep::LossBalance::kAuto ? "auto"
                                                                   : "fixed"}}}};
  return j;
}

json ToJson(const ExperimentReport &r) {
  json methods = json::array();
  for (const MethodSummary &m : r.methods) {
    json trials = json::array();
    for (const TrialResult &t : m.trials)
      trials.push_back({{"target_acc", t.target_acc},
                        {"source_acc", t.source_acc},
                        {"cov_dist_pre", t.cov_dist_pre},
                        {"cov_dist_post", t.cov_dist_post},
                        {"domain_distance", t.domain_distance},
                        {"seconds", t.seconds}});
    methods.push_back({{"method", m.method},
                       {"mean_target_acc", m.mean_target_acc},
                       {"std_target_acc", m.std_target_acc},
                       {"mean_source_acc", m.mean_source_acc},
                       {"mean_cov_dist_pre", m.mean_cov_dist_pre},
                       {"mean_cov_dist_post", m.mean_cov_dist_post},
                       {"mean_domain_distance", m.mean_domain_distance},
                       {"seconds", m.seconds},
                       {"trials", trials}});
  }
  return {{"methods", methods}};
}

json ToJson(const SweepReport &r) {
  json rows = json::array();
  for (const SweepRow &row : r.rows)
    rows.push_back({{"label", row.label},
                    {"lambda", row.lambda},
                    {"mean_target_acc", row.mean_target_acc},
                    {"std_target_acc", row.std_target_acc}});
  return {{"rows", rows}, {"spread", r.spread}};
}

json ToJson(const MismatchReport &r) {
  return {{"eval_domain", r.eval_domain},
          {"accuracy", r.accuracy},
          {"domain_distance", r.domain_distance}};
}

json ToJson(const DeepExperimentReport &r) {
  json with = json::array(), without = json::array();
  for (const DeepRun &run : r.with_coral) with.push_back(RunJson(run));
  for (const DeepRun &run : r.without_coral) without.push_back(RunJson(run));
  return {{"with_coral", with}, {"without_coral", without}};
}

}  // namespace coral
