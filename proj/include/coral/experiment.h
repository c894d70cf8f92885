// coral/experiment.h

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

#ifndef CORAL_EXPERIMENT_H_
#define CORAL_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "coral/deep.h"
#include "coral/shift.h"

namespace coral {

/// Learning rate 0.05, batch 64, 500 iterations and a fixed CORAL weight of
/// 5 on the logits.
deep::TrainConfig DefaultDeepTrainConfig();

struct DeepSettings {
  std::vector<int> hidden = {32};
  deep::TrainConfig train = DefaultDeepTrainConfig();
};

struct ExperimentConfig {
  ShiftSpec shift = RotatedAnisotropicSpec();
  std::string source_file;  // when both files are set they replace `shift`
  std::string target_file;
  bool files_have_header = false;
  std::vector<std::string> methods = {"NA", "CORAL-reg"};
  int trials = 20;
  uint64_t seed = 1;
  double lambda = 1.0;
  std::vector<double> c_grid = {0.001, 0.01, 0.1, 1.0, 10.0};
  int folds = 5;
  int svm_epochs = 20;
  double lda_lambda = 1.0;
  DeepSettings deep;
};

const std::vector<std::string> &KnownMethods();

struct TrialResult {
  double target_acc = 0.0;
  double source_acc = 0.0;
  double cov_dist_pre = 0.0;
  double cov_dist_post = 0.0;
  double domain_distance = 0.0;
  double seconds = 0.0;
};

struct MethodSummary {
  std::string method;
  std::vector<TrialResult> trials;
  double mean_target_acc = 0.0;
  double std_target_acc = 0.0;
  double mean_source_acc = 0.0;
  double mean_cov_dist_pre = 0.0;
  double mean_cov_dist_post = 0.0;
  double mean_domain_distance = 0.0;
  double seconds = 0.0;
};

struct ExperimentReport {
  std::vector<MethodSummary> methods;
  const MethodSummary &Get(const std::string &method) const;
};

/// Every trial t uses seed + t for data generation, cross-validation and
/// training.  Each domain is standardized with its own statistics before
/// any method runs.
ExperimentReport RunExperiment(const ExperimentConfig &cfg);

struct SweepRow {
  std::string label;  // "lambda=<v>" or "analytical"
  double lambda = 0.0;
  double mean_target_acc = 0.0;
  double std_target_acc = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double spread = 0.0;  // max - min mean accuracy, in [0, 1]
};

/// CORAL at every lambda in `lambdas`; a lambda of 0 runs the analytical
/// fit instead of the regularized one.
SweepReport LambdaSweep(const ExperimentConfig &cfg,
                        const std::vector<double> &lambdas);

struct MismatchConfig {
  int d = 10;
  int n_per_class = 500;  // per domain
  double separation = 2.0;
  double anisotropy = 3.0;
  double offset_std = 1.0;
  int num_domains = 3;
  int eval_domain = 1;
  double lambda = 1.0;
  int seeds = 20;
  uint64_t seed = 1;
};

struct MismatchReport {
  // [row][col], averaged over seeds.  Row r supplies the positive mean and
  // the covariance used to whiten the detector; column c supplies the
  // background mean and covariance used to whiten test data from
  // eval_domain.
  std::vector<std::vector<double>> accuracy;
  std::vector<std::vector<double>> domain_distance;
  int eval_domain = 1;
};

MismatchReport StatsMismatchExperiment(const MismatchConfig &cfg);

struct DeepRun {
  uint64_t seed = 0;
  double target_acc = 0.0;
  double source_acc = 0.0;
  double final_coral_distance = 0.0;
  deep::LossReport report;
};

struct DeepExperimentReport {
  std::vector<DeepRun> with_coral;
  std::vector<DeepRun> without_coral;
};

/// Trains the same network with and without the CORAL term for each of
/// `seeds` trials on standardized shift data.
DeepExperimentReport RunDeepExperiment(const ExperimentConfig &cfg, int seeds);

std::string CurvesCsv(const deep::LossReport &report);

nlohmann::json ToJson(const ShiftSpec &spec);
nlohmann::json ToJson(const ExperimentConfig &cfg);
nlohmann::json ToJson(const ExperimentReport &report);
nlohmann::json ToJson(const SweepReport &report);
nlohmann::json ToJson(const MismatchReport &report);
nlohmann::json ToJson(const DeepExperimentReport &report);

/// Missing keys keep their defaults; unknown keys and bad types throw
/// InvalidInput.
ShiftSpec ShiftSpecFromJson(const nlohmann::json &j);
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json &j);
MismatchConfig MismatchConfigFromJson(const nlohmann::json &j);
deep::TrainConfig TrainConfigFromJson(const nlohmann::json &j,
                                      deep::TrainConfig base = {});

}  // namespace coral

#endif  // CORAL_EXPERIMENT_H_
