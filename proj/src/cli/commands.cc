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

#include "lcrec/cli/commands.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lcrec/data/dataset.h"
#include "lcrec/data/event_loader.h"
#include "lcrec/data/split.h"
#include "lcrec/errors.h"
#include "lcrec/eval/metrics.h"
#include "lcrec/eval/reports.h"
#include "lcrec/model.h"
#include "lcrec/nn/gradcheck.h"
#include "lcrec/train/trainer.h"

namespace lcrec::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

KeyValues ParseOverrides(const std::vector<std::string>& items) {
  KeyValues out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("expected key=value, got '" + item + "'");
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

RunConfig LoadCommon(const CommonArgs& common) {
  RunConfig config;
  const fs::path* file = common.config ? &*common.config : nullptr;
  LoadRunConfig(config, file, ParseOverrides(common.overrides));
  return config;
}

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir.string() + ": " +
                    ec.message());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

SearchConfig SearchFrom(const DataConfig& data) {
  SearchConfig search;
  if (data.search_mode == "hard") {
    search.mode = SearchMode::kHard;
  } else if (data.search_mode == "soft") {
    search.mode = SearchMode::kSoft;
  } else {
    throw UsageError("data.search_mode must be hard or soft, got '" +
                     data.search_mode + "'");
  }
  if (data.max_results < 1) throw UsageError("data.max_results must be positive");
  if (data.histogram_length < 1) {
    throw UsageError("data.histogram_length must be positive");
  }
  search.max_results = data.max_results;
  search.active_date_window = data.histogram_length;
  return search;
}

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Fixed(const std::optional<double>& v, int digits = 6) {
  return v ? Fixed(*v, digits) : std::string("absent");
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

ordered_json OptionalJson(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

const std::vector<RankingSample>& SplitNamed(const Dataset& d,
                                             const std::string& name) {
  if (name == "train") return d.split.train;
  if (name == "validation") return d.split.validation;
  if (name == "test") return d.split.test;
  throw UsageError("--split must be train, validation or test, got '" + name + "'");
}

// Picks up to `n` training samples, half of them clicked when possible, so
// that every loss term contributes.
std::vector<RankingSample> GradcheckSamples(const std::vector<RankingSample>& pool,
                                            std::size_t n) {
  std::vector<RankingSample> clicked, other, out;
  for (const RankingSample& s : pool) (s.label_click ? clicked : other).push_back(s);
  std::size_t want_clicked = std::min(clicked.size(), (n + 1) / 2);
  for (std::size_t i = 0; i < want_clicked; ++i) out.push_back(clicked[i]);
  for (std::size_t i = 0; i < other.size() && out.size() < n; ++i) {
    out.push_back(other[i]);
  }
  for (std::size_t i = want_clicked; i < clicked.size() && out.size() < n; ++i) {
    out.push_back(clicked[i]);
  }
  return out;
}

}  // namespace

fs::path ResolveDatasetPath(const fs::path& path) {
  return fs::is_directory(path) ? path / kDatasetFile : path;
}

int ExitCodeFor(const std::exception& error) {
  if (dynamic_cast<const UsageError*>(&error)) return 1;
  if (dynamic_cast<const DataError*>(&error)) return 2;
  if (dynamic_cast<const ShapeError*>(&error)) return 2;
  if (dynamic_cast<const fs::filesystem_error*>(&error)) return 2;
  if (dynamic_cast<const NumericError*>(&error)) return 3;
  return 1;
}

int RunPrepare(const PrepareArgs& args, std::ostream& log) {
  RunConfig config = LoadCommon(args.common);
  if (args.window_days) config.data.window_days = *args.window_days;
  if (args.threads) config.train.threads = *args.threads;
  if (args.synthetic == args.input.has_value()) {
    throw UsageError("prepare-data needs exactly one of --input or --synthetic");
  }
  PrepareOptions options;
  options.window_days = config.data.window_days;
  options.search = SearchFrom(config.data);
  options.threads = config.train.threads;

  std::vector<BehaviorEvent> events;
  std::vector<RankingSample> samples;
  EmbeddingTable embeddings;
  std::size_t total_rows = 0, rejected_rows = 0;
  std::string source;
  if (args.synthetic) {
    ValidateSyntheticConfig(config.synthetic);
    SyntheticData data = GenerateSynthetic(config.synthetic);
    events = std::move(data.events);
    samples = std::move(data.samples);
    embeddings = std::move(data.item_embeddings);
    total_rows = events.size();
    source = "synthetic";
  } else {
    const auto format = ParseEventFormat(args.format);
    if (!format) throw UsageError("unknown --format '" + args.format + "'");
    LoadOptions load;
    load.category_map = args.category_map;
    LoadResult loaded = LoadEvents(*args.input, *format, load);
    log << "loaded " << loaded.events.size() << " events from "
        << loaded.total_rows << " rows (" << loaded.rejected_rows
        << " rejected)\n";
    total_rows = loaded.total_rows;
    rejected_rows = loaded.rejected_rows;
    events = std::move(loaded.events);
    samples = SamplesFromEvents(events, options.window_days);
    if (args.embeddings) embeddings = EmbeddingTable::Load(*args.embeddings);
    source = args.input->filename().string();
  }
  if (options.search.mode == SearchMode::kSoft) {
    if (embeddings.size() == 0) {
      throw UsageError("soft search needs item embeddings (--embeddings)");
    }
    options.embeddings = &embeddings;
  }
  Dataset dataset = BuildDataset(std::move(events), std::move(samples), options);
  dataset.source = source;
  dataset.total_rows = total_rows;
  dataset.rejected_rows = rejected_rows;

  EnsureDirectory(args.out);
  SaveDataset(args.out / kDatasetFile, dataset);
  WriteText(args.out / kManifestFile, ManifestJson(dataset));
  WriteText(args.out / kEffectiveConfigFile,
            EffectiveConfigText(config, "prepare-data"));
  log << "dataset: " << dataset.split.train.size() << " train, "
      << dataset.split.validation.size() << " validation, "
      << dataset.split.test.size() << " test samples -> "
      << (args.out / kDatasetFile).string() << "\n";
  return 0;
}

int RunTrain(const TrainArgs& args, std::ostream& log) {
  RunConfig config = LoadCommon(args.common);
  if (args.seed) {
    config.train.seed = *args.seed;
    config.model.init_seed = *args.seed;
  }
  if (args.ablation) config.model.variant = ParseVariant(*args.ablation);
  if (args.epochs) config.train.epochs = *args.epochs;
  if (args.threads) config.train.threads = *args.threads;
  train::ValidateTrainConfig(config.train);

  const Dataset dataset = LoadDataset(ResolveDatasetPath(args.data));
  config.model.feature_dim = static_cast<int>(dataset.feature_dim());
  config.model.histogram_length = dataset.histogram_length;
  LifecycleRanker model(config.model);

  EnsureDirectory(args.out);
  WriteText(args.out / kEffectiveConfigFile, EffectiveConfigText(config, "train"));
  std::ofstream history(args.out / kHistoryFile, std::ios::binary | std::ios::trunc);
  if (!history) throw DataError("cannot write " + (args.out / kHistoryFile).string());
  const train::TrainResult result = train::Train(
      model, dataset.split.train, dataset.split.validation, config.train,
      [&](const train::EpochRecord& r) {
        history << train::ToJsonLine(r) << "\n";
        history.flush();
        log << "epoch " << r.epoch << ": loss " << Fixed(r.train_loss.total)
            << ", validation GAUC ctr " << Fixed(r.validation.ctr) << " cvr "
            << Fixed(r.validation.cvr) << (r.selected ? " *" : "") << "\n";
      });
  history.close();

  ordered_json summary;
  summary["variant"] = std::string(ToString(config.model.variant));
  summary["seed"] = config.train.seed;
  summary["epochs_run"] = result.history.size();
  summary["best_epoch"] = result.best_epoch;
  summary["stopped_early"] = result.stopped_early;
  if (result.best_epoch > 0) {
    const train::EpochRecord& best =
        result.history[static_cast<std::size_t>(result.best_epoch - 1)];
    summary["best_val_gauc_ctr"] = OptionalJson(best.validation.ctr);
    summary["best_val_gauc_cvr"] = OptionalJson(best.validation.cvr);
    summary["best_val_gauc_mean"] = OptionalJson(best.validation.Mean());
  }
  if (result.gates.count > 0) {
    summary["gate_min"] = result.gates.min;
    summary["gate_max"] = result.gates.max;
  }
  summary["trainable_parameters"] = model.store().TrainableScalarCount();

  KeyValues extra = {{"train.seed", std::to_string(config.train.seed)},
                     {"train.best_epoch", std::to_string(result.best_epoch)}};
  SaveModel(args.out / kCheckpointFile, model, extra);
  WriteText(args.out / kTrainSummaryFile, summary.dump(2) + "\n");
  log << "checkpoint -> " << (args.out / kCheckpointFile).string() << "\n";
  return 0;
}

int RunEvaluate(const EvaluateArgs& args, std::ostream& log) {
  RunConfig config = LoadCommon(args.common);
  const Dataset dataset = LoadDataset(ResolveDatasetPath(args.data));
  const std::vector<RankingSample>& samples = SplitNamed(dataset, args.split);
  if (samples.empty()) throw DataError("split '" + args.split + "' is empty");
  const std::unique_ptr<LifecycleRanker> model = LoadModel(args.checkpoint);
  const ModelConfig& mc = model->config();
  if (static_cast<std::size_t>(mc.feature_dim) != dataset.feature_dim()) {
    throw ShapeError("component shared-features: checkpoint expects " +
                     std::to_string(mc.feature_dim) + " features, dataset has " +
                     std::to_string(dataset.feature_dim()));
  }
  if (mc.variant != Variant::kBaseline &&
      mc.histogram_length != dataset.histogram_length) {
    throw ShapeError("component ilem.cnn: checkpoint expects histograms of length " +
                     std::to_string(mc.histogram_length) + ", dataset has " +
                     std::to_string(dataset.histogram_length));
  }
  EnsureDirectory(args.report_dir);

  const train::Predictions pred = train::Predict(*model, samples);
  std::vector<UserId> users;
  std::vector<int> clicks, conversions;
  std::vector<UserId> clicked_users;
  std::vector<double> clicked_cvr;
  std::vector<int> clicked_conv;
  std::vector<std::optional<LifecycleTag>> tags;
  std::size_t rule_tags = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RankingSample& s = samples[i];
    users.push_back(s.user_id);
    clicks.push_back(s.label_click);
    conversions.push_back(s.label_conversion);
    if (s.label_click) {
      clicked_users.push_back(s.user_id);
      clicked_cvr.push_back(pred.cvr[i]);
      clicked_conv.push_back(s.label_conversion);
    }
    if (s.lifecycle_tag) {
      tags.push_back(s.lifecycle_tag);
    } else {
      tags.push_back(eval::TagFromHistograms(s.histograms, config.tagger));
      ++rule_tags;
    }
  }
  const std::string tag_source = rule_tags == 0 ? "dataset"
                                 : rule_tags == samples.size() ? "rule"
                                                               : "mixed";

  struct TaskGauc {
    std::string task;
    std::optional<eval::GaucReport> report;
  };
  std::vector<TaskGauc> gaucs;
  auto try_gauc = [](std::span<const UserId> u, std::span<const double> s,
                     std::span<const int> l) -> std::optional<eval::GaucReport> {
    try {
      return eval::Gauc(u, s, l);
    } catch (const DataError&) {
      return std::nullopt;
    }
  };
  gaucs.push_back({"ctr", try_gauc(users, pred.ctr, clicks)});
  gaucs.push_back({"cvr", try_gauc(clicked_users, clicked_cvr, clicked_conv)});

  const eval::SliceReport slices =
      eval::LifecycleSliceReport(tags, pred.ctr, pred.cvr, clicks, conversions);
  std::optional<eval::ClusterActivationReport> clusters;
  if (!pred.clusters.empty()) {
    std::vector<LifecycleTag> plain;
    for (const auto& t : tags) plain.push_back(*t);
    clusters = eval::ClusterActivation(plain, pred.clusters, mc.vq.num_codes);
  }

  std::ostringstream text;
  std::ostringstream jsonl;
  text << "lcrec evaluation report\n"
       << "split: " << args.split << "\n"
       << "samples: " << samples.size() << "\n"
       << "variant: " << ToString(mc.variant) << "\n\n"
       << "GAUC\n  " << Pad("task", 6) << Pad("gauc", 11) << Pad("users", 8)
       << Pad("skipped", 9) << "impressions\n";
  for (const TaskGauc& g : gaucs) {
    ordered_json j;
    j["record"] = "gauc";
    j["split"] = args.split;
    j["task"] = g.task;
    if (g.report) {
      text << "  " << Pad(g.task, 6) << Pad(Fixed(g.report->gauc), 11)
           << Pad(std::to_string(g.report->users.size()), 8)
           << Pad(std::to_string(g.report->skipped_users), 9)
           << g.report->weighted_impressions << "\n";
      j["gauc"] = g.report->gauc;
      j["users"] = g.report->users.size();
      j["skipped_users"] = g.report->skipped_users;
      j["impressions"] = g.report->weighted_impressions;
    } else {
      text << "  " << Pad(g.task, 6) << "undefined (no user with both classes)\n";
      j["gauc"] = nullptr;
    }
    jsonl << j.dump() << "\n";
  }

  text << "\nLifecycle slices (tags: " << tag_source << ")\n  " << Pad("tag", 12)
       << Pad("share", 10) << Pad("ctr", 10) << Pad("cvr", 10)
       << Pad("pred_ctr", 10) << Pad("pred_cvr", 10) << "impressions\n";
  for (const eval::SliceRow& row : slices.rows) {
    text << "  " << Pad(std::string(ToString(row.tag)), 12)
         << Pad(Fixed(row.share, 4), 10) << Pad(Fixed(row.ctr, 4), 10)
         << Pad(Fixed(row.cvr, 4), 10) << Pad(Fixed(row.mean_pred_ctr, 4), 10)
         << Pad(Fixed(row.mean_pred_cvr, 4), 10) << row.impressions << "\n";
    ordered_json j;
    j["record"] = "slice";
    j["tag"] = std::string(ToString(row.tag));
    j["tag_source"] = tag_source;
    j["impressions"] = row.impressions;
    j["share"] = row.share;
    j["ctr"] = row.ctr;
    j["cvr"] = OptionalJson(row.cvr);
    j["mean_pred_ctr"] = row.mean_pred_ctr;
    j["mean_pred_cvr"] = OptionalJson(row.mean_pred_cvr);
    jsonl << j.dump() << "\n";
  }
  for (LifecycleTag tag : slices.absent) {
    text << "  " << Pad(std::string(ToString(tag)), 12) << "absent\n";
    ordered_json j;
    j["record"] = "slice";
    j["tag"] = std::string(ToString(tag));
    j["tag_source"] = tag_source;
    j["impressions"] = 0;
    j["absent"] = true;
    jsonl << j.dump() << "\n";
  }

  if (clusters) {
    text << "\nCluster activation (M=" << clusters->num_codes
         << ", AMI=" << Fixed(clusters->ami) << ")\n  " << Pad("tag", 12);
    for (int m = 0; m < clusters->num_codes; ++m) {
      text << Pad("c" + std::to_string(m), 7);
    }
    text << "majority\n";
    for (std::size_t r = 0; r < clusters->tags.size(); ++r) {
      text << "  " << Pad(std::string(ToString(clusters->tags[r])), 12);
      for (double p : clusters->distribution[r]) text << Pad(Fixed(p, 3), 7);
      text << clusters->majority[r] << "\n";
      ordered_json j;
      j["record"] = "cluster";
      j["tag"] = std::string(ToString(clusters->tags[r]));
      j["samples"] = clusters->counts[r];
      j["distribution"] = clusters->distribution[r];
      j["majority"] = clusters->majority[r];
      jsonl << j.dump() << "\n";
    }
    ordered_json j;
    j["record"] = "cluster_summary";
    j["num_codes"] = clusters->num_codes;
    j["ami"] = clusters->ami;
    jsonl << j.dump() << "\n";

    std::ostringstream tsv;
    tsv << "sample_id\tcluster\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      tsv << samples[i].sample_id << "\t" << pred.clusters[i] << "\n";
    }
    WriteText(args.report_dir / kAssignmentsFile, tsv.str());
  }
  WriteText(args.report_dir / kReportTextFile, text.str());
  WriteText(args.report_dir / kReportJsonFile, jsonl.str());
  WriteText(args.report_dir / kEffectiveConfigFile,
            EffectiveConfigText(config, "evaluate"));
  log << text.str();
  return 0;
}

int RunGradcheck(const GradcheckArgs& args, std::ostream& log) {
  RunConfig config = LoadCommon(args.common);
  if (args.seed) {
    config.synthetic.seed = *args.seed;
    config.model.init_seed = *args.seed;
  }
  if (args.samples < 1) throw UsageError("--samples must be positive");
  if (!(args.tolerance >= 0.0)) throw UsageError("--tolerance must be nonnegative");

  // A small synthetic population is enough to supply realistic histograms.
  SyntheticConfig syn = config.synthetic;
  syn.users = std::max(4, args.samples);
  ValidateSyntheticConfig(syn);
  SyntheticData data = GenerateSynthetic(syn);
  PrepareOptions options;
  options.window_days = config.data.window_days;
  options.search = SearchFrom(config.data);
  options.embeddings = &data.item_embeddings;
  const Dataset dataset =
      BuildDataset(std::move(data.events), std::move(data.samples), options);
  const std::vector<RankingSample> chosen =
      GradcheckSamples(dataset.split.train, static_cast<std::size_t>(args.samples));
  if (chosen.empty()) throw DataError("no training samples for the gradient check");

  config.model.feature_dim = static_cast<int>(dataset.feature_dim());
  config.model.histogram_length = dataset.histogram_length;
  LifecycleRanker model(config.model);
  const Batch batch = MakeBatch(chosen, dataset.histogram_length);
  std::mt19937_64 rng(config.model.init_seed);
  model.InitializeCodebook(batch, rng);
  // Move zero-initialized gates and biases off their special values so the
  // check exercises every term.
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (nn::Parameter& p : model.store()) {
    if (!p.trainable) continue;
    for (double& v : p.value.values()) v += jitter(rng);
  }
  for (const std::string& prefix : args.freeze) {
    if (model.store().FreezeGroups(prefix) == 0) {
      throw UsageError("no parameter group matches --freeze '" + prefix + "'");
    }
  }
  const LossScale scale = BatchLossScale(batch, model.config());
  // Finite differences probe the objective that backpropagation
  // differentiates: stop-gradient operands and code assignments stay at
  // their values from the unperturbed pass.
  std::vector<nn::Tensor> held;
  ForwardOptions replay;
  std::vector<int> codes;
  auto loss = [&] {
    nn::Graph g(model.store());
    g.ReplayStopGradients(&held);
    const double value = g.value(model.Forward(g, batch, scale, replay).loss)[0];
    return nn::LossProbe{value, g.relu_signature()};
  };
  auto analytic = [&] {
    held.clear();
    nn::Graph g(model.store());
    g.RecordStopGradients(&held);
    const ModelTrace trace = model.Forward(g, batch, scale);
    if (trace.vq) codes = trace.vq->indices;
    replay.fixed_codes = codes;
    nn::GradientBuffer grads = model.store().MakeGradientBuffer();
    g.Backward(trace.loss, grads);
    model.store().ZeroGrad();
    model.store().AccumulateGradients(grads);
  };
  const nn::GradCheckReport report =
      nn::FiniteDiffCheck(model.store(), loss, analytic);
  const std::string text = report.ToText(args.tolerance);
  log << text;
  if (args.report) WriteText(*args.report, text);
  return report.Passed(args.tolerance) ? 0 : 3;
}

}  // namespace lcrec::cli
