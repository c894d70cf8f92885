// tools/coral_main.cc

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

// Command-line front end.  Exit codes: 0 success, 1 invalid input or
// config, 2 numerical failure, 3 a check-mode acceptance check failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "coral/align.h"
#include "coral/dataset_io.h"
#include "coral/deep.h"
#include "coral/error.h"
#include "coral/experiment.h"
#include "coral/lda.h"
#include "coral/linalg.h"

namespace {

using nlohmann::json;
using namespace coral;

constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheckFailed = 3;

json ReadJsonFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

void EmitJson(const std::string &path, const json &j) {
  WriteText(path, j.dump(2) + "\n");
}

struct TransformArgs {
  std::string source, target, out, matrix_out;
  double lambda = 1.0;
  bool analytical = false, header = false, labels = false;
};

int RunTransform(const TransformArgs &a) {
  CsvOptions opts{a.header, a.labels};
  Dataset src = LoadDataset(a.source, opts);
  Dataset tgt = LoadDataset(a.target, opts);
  CoralTransform t = a.analytical ? FitAnalytical(src.features, tgt.features)
                                  : FitRegularized(src.features, tgt.features,
                                                   a.lambda);
  Dataset out{ApplyToFeatures(t, src.features), src.labels, "aligned"};
  SaveDataset(out, a.out, a.header);
  if (!a.matrix_out.empty())
    SaveDataset(Dataset{FeatureMatrix(t.a), std::nullopt, "A"}, a.matrix_out);
  json info = {{"mode", a.analytical ? "analytical" : "regularized"},
               {"lambda", t.lambda},
               {"cov_dist_pre",
                CovarianceDistanceSq(src.features,
                                     linalg::Covariance(tgt.features.data()))},
               {"cov_dist_post",
                CovarianceDistanceSq(out.features,
                                     linalg::Covariance(tgt.features.data()))}};
  if (a.analytical) info["rank_used"] = t.rank_used;
  std::cout << info.dump() << "\n";
  return 0;
}

struct LdaArgs {
  std::string source, target, stats_from, out, mode = "coral";
  double lambda = 1.0, threshold = 0.0;
  bool header = false, target_labels = false;
};

int RunLda(const LdaArgs &a) {
  Dataset src = LoadDataset(a.source, {a.header, true});
  Dataset tgt = LoadDataset(a.target, {a.header, a.target_labels});
  if (src.num_classes() != 2)
    throw InvalidInput("lda needs a source labeled 0 (background) / 1 (positive)");
  const Matrix &x = src.features.data();
  std::vector<Eigen::Index> neg_rows;
  Vector mu_pos = Vector::Zero(x.cols());
  long npos = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if ((*src.labels)[i] == 1) {
      mu_pos += x.row(i).transpose();
      ++npos;
    } else {
      neg_rows.push_back(i);
    }
  }
  mu_pos /= static_cast<double>(npos);
  Matrix neg(neg_rows.size(), x.cols());
  for (size_t i = 0; i < neg_rows.size(); ++i) neg.row(i) = x.row(neg_rows[i]);
  DomainStats background = linalg::MeanAndCovariance(neg);

  DomainStats whitening = background;
  if (a.mode == "coral") {
    std::string from = a.stats_from.empty() ? a.target : a.stats_from;
    whitening = linalg::MeanAndCovariance(
        LoadDataset(from, {a.header, from == a.target && a.target_labels})
            .features);
  } else if (a.mode != "plain") {
    throw InvalidInput("--mode must be plain or coral");
  }
  LdaInputs inp{mu_pos, background.mean, background.cov, std::nullopt, a.lambda};
  LdaModel m;
  if (a.mode == "coral") {
    inp.cov_target = whitening.cov;
    m = FitCoralLda(inp);
  } else {
    m = FitLda(inp);
  }
  Matrix centered = tgt.features.data().rowwise() - whitening.mean.transpose();
  Vector scores = ScoreBatch(m, FeatureMatrix(centered));
  std::ostringstream csv;
  csv.precision(17);
  csv << "score\n";
  for (Eigen::Index i = 0; i < scores.size(); ++i) csv << scores(i) << "\n";
  WriteText(a.out, csv.str());
  json info = {{"mode", a.mode},
               {"domain_distance", DomainDistance(background, whitening)}};
  if (tgt.labels) {
    long hit = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i)
      hit += (scores(i) > a.threshold) == ((*tgt.labels)[i] == 1);
    info["accuracy"] = static_cast<double>(hit) / scores.size();
  }
  std::cerr << info.dump() << "\n";
  return 0;
}

ExperimentConfig LoadConfig(const std::string &path) {
  return path.empty() ? ExperimentConfig{}
                      : ExperimentConfigFromJson(ReadJsonFile(path));
}

struct BenchArgs {
  std::string config, report_out;
  int trials = -1;
  long long seed = -1;
  bool check = false;
  std::vector<double> lambdas = {0.001, 0.01, 0.1, 1.0, 0.0};
  int seeds = 5;
  std::string curves_out;
};

void Override(ExperimentConfig *c, const BenchArgs &a) {
  if (a.trials > 0) c->trials = a.trials;
  if (a.seed >= 0) c->seed = static_cast<uint64_t>(a.seed);
}

int RunBench(const BenchArgs &a) {
  ExperimentConfig cfg = LoadConfig(a.config);
  Override(&cfg, a);
  ExperimentReport rep = RunExperiment(cfg);
  json j = ToJson(rep);
  j["config"] = ToJson(cfg);
  EmitJson(a.report_out, j);
  for (const MethodSummary &m : rep.methods)
    std::fprintf(stderr, "%-34s target %.2f%% (sd %.2f)  source %.2f%%\n",
                 m.method.c_str(), 100 * m.mean_target_acc,
                 100 * m.std_target_acc, 100 * m.mean_source_acc);
  if (a.check) {
    const MethodSummary &na = rep.Get("NA");
    const MethodSummary &cr = rep.Get("CORAL-reg");
    bool ok = cr.mean_target_acc - na.mean_target_acc >= 0.10;
    for (const MethodSummary &m : rep.methods)
      if (m.method == "whiten-both")
        ok = ok && m.mean_target_acc <= cr.mean_target_acc;
    std::fprintf(stderr, "check: %s\n", ok ? "PASS" : "FAIL");
    if (!ok) return kExitCheckFailed;
  }
  return 0;
}

int RunSweep(const BenchArgs &a) {
  ExperimentConfig cfg = LoadConfig(a.config);
  Override(&cfg, a);
  SweepReport rep = LambdaSweep(cfg, a.lambdas);
  EmitJson(a.report_out, ToJson(rep));
  for (const SweepRow &r : rep.rows)
    std::fprintf(stderr, "%-16s %.2f%%\n", r.label.c_str(),
                 100 * r.mean_target_acc);
  std::fprintf(stderr, "spread %.2f points\n", 100 * rep.spread);
  if (a.check && rep.spread > 0.02) return kExitCheckFailed;
  return 0;
}

int RunDeep(const BenchArgs &a) {
  ExperimentConfig cfg = LoadConfig(a.config);
  if (a.config.empty() || !ReadJsonFile(a.config).contains("shift"))
    cfg.shift = DeepShiftSpec();
  Override(&cfg, a);
  DeepExperimentReport rep = RunDeepExperiment(cfg, a.seeds);
  EmitJson(a.report_out, ToJson(rep));
  if (!a.curves_out.empty()) WriteText(a.curves_out, CurvesCsv(rep.with_coral[0].report));
  double with = 0, without = 0;
  for (const DeepRun &r : rep.with_coral) with += r.target_acc / a.seeds;
  for (const DeepRun &r : rep.without_coral) without += r.target_acc / a.seeds;
  std::fprintf(stderr, "target accuracy: with CORAL %.2f%%, without %.2f%%\n",
               100 * with, 100 * without);
  return 0;
}

int RunMismatch(const std::string &config, const std::string &out) {
  MismatchConfig cfg;
  if (!config.empty()) cfg = MismatchConfigFromJson(ReadJsonFile(config));
  EmitJson(out, ToJson(StatsMismatchExperiment(cfg)));
  return 0;
}

struct GradArgs {
  std::vector<int> n = {4, 8, 32}, d = {2, 5, 16};
  int seeds = 20;
  double step = 1e-5, tol = 1e-5;
};

int RunGradcheck(const GradArgs &a) {
  double worst = 0.0;
  for (int n : a.n) {
    for (int d : a.d) {
      double w = 0.0;
      for (int s = 0; s < a.seeds; ++s) {
        std::mt19937_64 rng(static_cast<uint64_t>(s) * 1000003u + n * 131u + d);
        std::normal_distribution<double> g(0.0, 1.0);
        Matrix src(n, d), tgt(n, d);
        for (Eigen::Index i = 0; i < src.size(); ++i) src.data()[i] = g(rng);
        for (Eigen::Index i = 0; i < tgt.size(); ++i) tgt.data()[i] = 1.5 * g(rng);
        w = std::max(w, deep::FiniteDiffCheck(src, tgt, a.step));
      }
      std::printf("n=%-3d d=%-3d max_rel_err=%.3e %s\n", n, d, w,
                  w <= a.tol ? "ok" : "FAIL");
      worst = std::max(worst, w);
    }
  }
  std::printf("worst %.3e (tolerance %.1e)\n", worst, a.tol);
  return worst <= a.tol ? 0 : kExitCheckFailed;
}

struct ConvertArgs {
  std::string in, out;
  bool header = false, labels = false, write_header = false;
};

int RunConvert(const ConvertArgs &a) {
  Dataset ds = LoadDataset(a.in, {a.header, a.labels});
  SaveDataset(ds, a.out, a.write_header);
  return 0;
}

int RunGenerate(const std::string &spec_path, const std::string &src_out,
                const std::string &tgt_out, long long seed) {
  ShiftSpec spec = spec_path.empty() ? RotatedAnisotropicSpec()
                                     : ShiftSpecFromJson(ReadJsonFile(spec_path));
  if (seed >= 0) spec.seed = static_cast<uint64_t>(seed);
  ShiftData sd = GenerateShift(spec);
  SaveDataset(sd.source, src_out);
  SaveDataset(sd.target, tgt_out);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"CORAL domain adaptation toolkit"};
  app.require_subcommand(1);

  TransformArgs ta;
  auto *transform = app.add_subcommand("transform", "fit CORAL and align source features");
  transform->add_option("--source", ta.source)->required();
  transform->add_option("--target", ta.target)->required();
  transform->add_option("--out", ta.out)->required();
  transform->add_option("--lambda", ta.lambda, "ridge added to both covariances")
      ->capture_default_str();
  transform->add_flag("--analytical", ta.analytical, "closed-form unregularized fit");
  transform->add_flag("--has-header", ta.header);
  transform->add_flag("--labels", ta.labels, "last CSV column is a class label");
  transform->add_option("--matrix-out", ta.matrix_out, "also save A");

  LdaArgs la;
  auto *lda = app.add_subcommand("lda", "score target rows with an LDA detector");
  lda->add_option("--source", la.source, "labeled source (1 positive, 0 background)")
      ->required();
  lda->add_option("--target", la.target)->required();
  lda->add_option("--mode", la.mode)->check(CLI::IsMember({"plain", "coral"}))
      ->capture_default_str();
  lda->add_option("--stats-from", la.stats_from,
                  "file supplying background mean and whitening covariance");
  lda->add_option("--lambda", la.lambda)->capture_default_str();
  lda->add_option("--threshold", la.threshold)->capture_default_str();
  lda->add_option("--out", la.out, "scores CSV (default stdout)");
  lda->add_flag("--has-header", la.header);
  lda->add_flag("--target-labels", la.target_labels);

  BenchArgs ba;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", ba.config, "experiment config JSON");
    sub->add_option("--trials", ba.trials);
    sub->add_option("--seed", ba.seed);
    sub->add_option("--report-out", ba.report_out, "report JSON (default stdout)");
  };
  auto *bench = app.add_subcommand("bench", "run adaptation methods over trials");
  add_common(bench);
  bench->add_flag("--check", ba.check, "exit 3 unless CORAL-reg beats NA by 10 points");
  auto *sweep = app.add_subcommand("sweep-lambda", "accuracy as a function of lambda");
  add_common(sweep);
  sweep->add_option("--lambdas", ba.lambdas, "0 selects the analytical fit")
      ->delimiter(',');
  sweep->add_flag("--check", ba.check, "exit 3 if the spread exceeds 2 points");
  auto *deep_cmd = app.add_subcommand("deep", "joint classification + CORAL training");
  add_common(deep_cmd);
  deep_cmd->add_option("--seeds", ba.seeds)->capture_default_str();
  deep_cmd->add_option("--curves-out", ba.curves_out, "training curves CSV");

  std::string mm_config, mm_out;
  auto *mismatch = app.add_subcommand("mismatch", "CORAL-LDA statistics pairing grid");
  mismatch->add_option("--config", mm_config);
  mismatch->add_option("--report-out", mm_out);

  GradArgs ga;
  auto *grad = app.add_subcommand("gradcheck", "finite-difference check of CORAL gradients");
  grad->add_option("--n", ga.n)->delimiter(',');
  grad->add_option("--d", ga.d)->delimiter(',');
  grad->add_option("--seeds", ga.seeds)->capture_default_str();
  grad->add_option("--step", ga.step)->capture_default_str();

  ConvertArgs ca;
  auto *convert = app.add_subcommand("convert", "convert between CSV and .bin");
  convert->add_option("--in", ca.in)->required();
  convert->add_option("--out", ca.out)->required();
  convert->add_flag("--has-header", ca.header);
  convert->add_flag("--labels", ca.labels);
  convert->add_flag("--write-header", ca.write_header);

  std::string gen_spec, gen_src, gen_tgt;
  long long gen_seed = -1;
  auto *generate = app.add_subcommand("generate", "write a synthetic shifted pair");
  generate->add_option("--spec", gen_spec, "shift spec JSON");
  generate->add_option("--source-out", gen_src)->required();
  generate->add_option("--target-out", gen_tgt)->required();
  generate->add_option("--seed", gen_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*transform) return RunTransform(ta);
    if (*lda) return RunLda(la);
    if (*bench) return RunBench(ba);
    if (*sweep) return RunSweep(ba);
    if (*deep_cmd) return RunDeep(ba);
    if (*mismatch) return RunMismatch(mm_config, mm_out);
    if (*grad) return RunGradcheck(ga);
    if (*convert) return RunConvert(ca);
    if (*generate) return RunGenerate(gen_spec, gen_src, gen_tgt, gen_seed);
  } catch (const NumericalError &e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
