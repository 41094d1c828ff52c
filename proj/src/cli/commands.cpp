#include "commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vocalscreen/audio_io.hpp"
#include "vocalscreen/error.hpp"
#include "vocalscreen/evaluation.hpp"
#include "vocalscreen/feature_table.hpp"
#include "vocalscreen/model.hpp"
#include "vocalscreen/parallel.hpp"

namespace vocalscreen::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoFailure("write error on " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& doc) { write_text(path, doc.dump(2) + "\n"); }

// Features, optionally restricted to the rows a manifest names.
FeatureTable load_rows(const fs::path& features, const fs::path& manifest) {
  FeatureTable table = load_feature_csv(features);
  if (!manifest.empty()) table = select_rows(table, load_manifest(manifest));
  if (table.empty()) throw EmptyInput("no feature rows selected from " + features.string());
  return table;
}

void unpack(const FeatureTable& table, std::vector<FeatureValues>& x, std::vector<Label>& y) {
  x.clear();
  y.clear();
  x.reserve(table.size());
  y.reserve(table.size());
  for (const auto& row : table) {
    x.push_back(row.features.values);
    y.push_back(row.label);
  }
}

FeatureConfig feature_config_beside(const fs::path& features) {
  const fs::path sidecar = features.parent_path() / "feature_config.json";
  if (!fs::exists(sidecar)) return FeatureConfig{};
  std::ifstream in(sidecar);
  try {
    return feature_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw FeatureTableError(sidecar.string() + ": " + e.what());
  }
}

std::string split_mode_banner(const std::string& mode) {
  if (mode == "segment-level") {
    return "SPLIT MODE: SEGMENT-LEVEL (segments of one speaker can sit on both sides; speaker identity may leak)";
  }
  if (mode == "speaker-disjoint") {
    return "SPLIT MODE: SPEAKER-DISJOINT (no speaker appears in both train and test)";
  }
  return "SPLIT MODE: UNKNOWN (no split sidecar found)";
}

}  // namespace

int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out) {
  CohortSpec spec = o.cohort;
  spec.seed = g.seed;
  const auto manifest = generate_cohort(spec, g.out_dir, g.jobs);
  out << "synth: wrote " << manifest.size() << " recordings (depression=" << manifest.count(Label::Depression)
      << ", control=" << manifest.count(Label::Control) << ") to " << (g.out_dir / "manifest.csv").string() << '\n'
      << "synth: " << kSyntheticNotice << '\n';
  return 0;
}

int cmd_extract(const GlobalOptions& g, const ExtractOptions& o, std::ostream& out) {
  o.silence.validate();
  const DatasetManifest manifest = load_manifest(o.manifest);
  if (manifest.empty()) throw EmptyInput("empty manifest: " + o.manifest.string());

  const FeatureExtractor extractor(kCanonicalSampleRate, o.features);
  const fs::path base = o.manifest.parent_path();

  std::vector<FeatureTable> per_file(manifest.size());
  parallel_for(manifest.size(), g.jobs, [&](std::size_t i) {
    const ManifestRow& row = manifest.rows()[i];
    const fs::path wav = fs::path(row.path).is_absolute() ? fs::path(row.path) : base / row.path;
    AudioClip clip;
    try {
      clip = load_clip(wav);
    } catch (const IoFailure& e) {
      throw IoFailure(std::string(e.what()) + " (manifest row '" + row.path + "')");
    }
    const AudioClip voiced = clip.empty() ? clip : remove_silence(clip, o.silence);
    const SegmentSet segments = segment(voiced, o.segment_seconds, row.path);
    for (std::size_t s = 0; s < segments.segments.size(); ++s) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "#%04zu", s);
      per_file[i].push_back({extractor.extract(segments.segments[s], row.path + suffix), row.label});
    }
  });

  FeatureTable table;
  DatasetManifest segments;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    for (auto& row : per_file[i]) {
      segments.add({row.features.segment_id, row.label, manifest.rows()[i].participant});
      table.push_back(std::move(row));
    }
  }

  save_feature_csv(g.out_dir / "features.csv", table);
  save_manifest(g.out_dir / "segments.csv", segments);
  write_json(g.out_dir / "feature_config.json", to_json(o.features));
  out << "extract: " << table.size() << " segments (depression=" << segments.count(Label::Depression)
      << ", control=" << segments.count(Label::Control) << ") from " << manifest.size() << " recordings\n";
  return 0;
}

int cmd_split(const GlobalOptions& g, const SplitOptions& o, std::ostream& out) {
  const DatasetManifest manifest = load_manifest(o.manifest);
  SplitSpec spec;
  spec.train_fraction = o.train_fraction;
  spec.seed = g.seed;
  spec.mode = parse_split_mode(o.mode);
  const SplitResult result = split(manifest, spec);
  save_manifest(g.out_dir / "train.csv", result.train);
  save_manifest(g.out_dir / "test.csv", result.test);
  write_json(g.out_dir / "split.json", split_summary(spec, result));
  out << "split (" << to_string(spec.mode) << "): train=" << result.train.size() << " test=" << result.test.size()
      << '\n';
  return 0;
}

int cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& out) {
  const FeatureTable table = load_rows(o.features, o.manifest);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  unpack(table, x, y);
  const bool scaled = !o.no_scaler;
  const ScalerParams scaler = scaled ? fit_scaler(x) : ScalerParams::identity();
  const KnnModel model = knn_fit(x, y, o.k, o.p, scaler, scaled, feature_config_beside(o.features));
  save_model(model, g.out_dir / "model.json");
  out << "train: " << Candidate{o.k, o.p, scaled}.describe() << " on " << x.size() << " rows\n";
  return 0;
}

int cmd_select(const GlobalOptions& g, const SelectOptions& o, std::ostream& out) {
  const FeatureTable table = load_rows(o.features, o.manifest);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  unpack(table, x, y);
  const auto grid = default_grid();
  const SelectionReport report = grid_select(grid, x, y, o.folds, g.seed, g.jobs);
  const Candidate& best = report.best().candidate;

  const ScalerParams scaler = best.scaled ? fit_scaler(x) : ScalerParams::identity();
  const KnnModel model = knn_fit(x, y, best.k, best.p, scaler, best.scaled, feature_config_beside(o.features));

  nlohmann::json doc = to_json(report);
  doc["folds"] = o.folds;
  doc["seed"] = g.seed;
  doc["objective"] = "accuracy";
  write_json(g.out_dir / "selection.json", doc);
  save_model(model, g.out_dir / "model.json");

  std::ostringstream text;
  text << "Cross-validated grid (" << o.folds << "-fold stratified, accuracy):\n";
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& c = report.candidates[i];
    char line[160];
    std::snprintf(line, sizeof(line), "  %2zu  %-60s %.4f  best so far %.4f\n", i + 1, c.candidate.describe().c_str(),
                  c.mean_score, report.generations[i]);
    text << line;
  }
  char line[160];
  std::snprintf(line, sizeof(line), "Best pipeline: %s, mean CV accuracy %.4f\n", best.describe().c_str(),
                report.best().mean_score);
  text << line;
  write_text(g.out_dir / "selection.txt", text.str());
  out << text.str();
  return 0;
}

int cmd_evaluate(const GlobalOptions& g, const EvaluateOptions& o, std::ostream& out) {
  const KnnModel model = load_model(o.model);
  const FeatureTable table = load_rows(o.features, o.manifest);

  std::string mode = "unknown";
  fs::path split_info = o.split_info;
  if (split_info.empty() && !o.manifest.empty()) split_info = o.manifest.parent_path() / "split.json";
  nlohmann::json split_doc;
  if (!split_info.empty() && fs::exists(split_info)) {
    std::ifstream in(split_info);
    split_doc = nlohmann::json::parse(in, nullptr, false);
    if (split_doc.is_object() && split_doc.contains("mode")) mode = split_doc["mode"].get<std::string>();
  }

  std::vector<Label> predicted, truth;
  for (const auto& row : table) {
    predicted.push_back(knn_predict(model, row.features.values).label);
    truth.push_back(row.label);
  }
  const ConfusionMatrix cm = confusion(predicted, truth);
  const ScoreSummary scores = precision_recall_f1(cm);
  const Candidate pipeline{model.k, model.p, model.scaler_enabled};

  nlohmann::json report{{"split_mode", mode},
                        {"split_mode_banner", split_mode_banner(mode)},
                        {"positive_class", "depression"},
                        {"n", cm.total()},
                        {"pipeline", pipeline.describe()},
                        {"model", {{"k", model.k}, {"p", model.p}, {"scaler", model.scaler_enabled}}},
                        {"confusion", to_json(cm)},
                        {"metrics", to_json(scores)}};
  if (split_doc.is_object()) report["split"] = split_doc;
  write_json(g.out_dir / "eval.json", report);

  std::ostringstream text;
  text << "=== " << split_mode_banner(mode) << " ===\n"
       << "Pipeline: " << pipeline.describe() << "\n"
       << "Scored segments: " << cm.total() << "\n\n"
       << render_metrics_table(scores, cm);
  write_text(g.out_dir / "eval.txt", text.str());
  out << text.str();
  return 0;
}

int cmd_predict(const GlobalOptions& g, const PredictOptions& o, std::ostream& out) {
  const KnnModel model = load_model(o.model);
  const FeatureTable table = load_rows(o.features, o.manifest);
  std::ostringstream csv;
  csv << "segment_id,label,score\n";
  for (const auto& row : table) {
    const Prediction p = knn_predict(model, row.features.values);
    csv << row.features.segment_id << ',' << to_string(p.label) << ',' << format_double(p.score) << '\n';
  }
  write_text(g.out_dir / "predictions.csv", csv.str());
  out << csv.str();
  return 0;
}

int cmd_stats(const GlobalOptions& g, const StatsOptions& o, std::ostream& out) {
  const FeatureTable table = load_rows(o.features, o.manifest);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  unpack(table, x, y);
  const auto rows = descriptive_stats(x, y);
  write_json(g.out_dir / "stats.json", nlohmann::json{{"rows", to_json(rows)}, {"n", table.size()}});
  const std::string text = render_stats_table(rows);
  write_text(g.out_dir / "stats.txt", text);
  out << text;
  return 0;
}

}  // namespace vocalscreen::cli
