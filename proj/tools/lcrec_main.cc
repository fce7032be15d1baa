// Copyright 2026 The lcrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "lcrec/cli/commands.h"

namespace {

void AddCommon(CLI::App* app, lcrec::cli::CommonArgs& common) {
  app->add_option("--config", common.config, "Key-value configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("--set", common.overrides,
                  "Override a configuration key (key=value); may repeat");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lcrec::cli;
  CLI::App app{"Interest life-cycle ranking: data preparation, training, "
               "evaluation and gradient checks"};
  app.require_subcommand(1);

  PrepareArgs prepare;
  CLI::App* prep = app.add_subcommand("prepare-data", "Build a dataset cache");
  AddCommon(prep, prepare.common);
  prep->add_flag("--synthetic", prepare.synthetic,
                 "Generate a synthetic life-cycle dataset");
  prep->add_option("--input", prepare.input, "Event log to ingest");
  prep->add_option("--format", prepare.format,
                   "Event log format: kuairand_csv or internal_tsv")
      ->capture_default_str();
  prep->add_option("--window-days", prepare.window_days,
                   "Days reserved for feature construction");
  prep->add_option("--category-map", prepare.category_map,
                   "item_id,category_id file for logs without categories");
  prep->add_option("--embeddings", prepare.embeddings,
                   "Item embeddings for soft search");
  prep->add_option("--threads", prepare.threads, "Feature-building threads");
  prep->add_option("--out", prepare.out, "Output directory")->required();

  TrainArgs train;
  CLI::App* tr = app.add_subcommand("train", "Train a ranker");
  AddCommon(tr, train.common);
  tr->add_option("--data", train.data, "Dataset cache or its directory")->required();
  tr->add_option("--out", train.out, "Output directory")->required();
  tr->add_option("--seed", train.seed, "Seed for initialization and shuffling");
  tr->add_option("--ablation", train.ablation, "baseline, ilem or full");
  tr->add_option("--epochs", train.epochs, "Number of epochs");
  tr->add_option("--threads", train.threads,
                 "Gradient shards per batch (1 is bit-reproducible)");

  EvaluateArgs evaluate;
  CLI::App* ev = app.add_subcommand("evaluate", "Score a checkpoint and write reports");
  AddCommon(ev, evaluate.common);
  ev->add_option("--data", evaluate.data, "Dataset cache or its directory")->required();
  ev->add_option("--checkpoint", evaluate.checkpoint, "Checkpoint file")->required();
  ev->add_option("--report-dir", evaluate.report_dir, "Report directory")->required();
  ev->add_option("--split", evaluate.split, "train, validation or test")
      ->capture_default_str();

  GradcheckArgs grad;
  CLI::App* gc = app.add_subcommand("gradcheck",
                                    "Finite-difference check of the full loss");
  AddCommon(gc, grad.common);
  gc->add_option("--samples", grad.samples, "Number of samples")->capture_default_str();
  gc->add_option("--tolerance", grad.tolerance, "Maximum relative error")
      ->capture_default_str();
  gc->add_option("--freeze", grad.freeze, "Parameter-group prefix to freeze");
  gc->add_option("--seed", grad.seed, "Seed for data and parameters");
  gc->add_option("--report", grad.report, "Also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*prep) return RunPrepare(prepare, std::cout);
    if (*tr) return RunTrain(train, std::cout);
    if (*ev) return RunEvaluate(evaluate, std::cout);
    if (*gc) return RunGradcheck(grad, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return 1;
}
