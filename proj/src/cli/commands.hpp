#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "vocalscreen/dataset.hpp"
#include "vocalscreen/dsp_features.hpp"
#include "vocalscreen/preprocess.hpp"
#include "vocalscreen/synth.hpp"

namespace vocalscreen::cli {

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::string config_file;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = ".";
};

struct SynthOptions {
  CohortSpec cohort;
};

struct ExtractOptions {
  std::filesystem::path manifest;
  SilenceParams silence;
  double segment_seconds = kSegmentSeconds;
  FeatureConfig features;
};

struct SplitOptions {
  std::filesystem::path manifest;
  double train_fraction = 0.8;
  std::string mode = "segment-level";
};

struct TrainOptions {
  std::filesystem::path features;
  std::filesystem::path manifest;  // optional row filter
  std::size_t k = 3;
  double p = 2.0;
  bool no_scaler = false;
};

struct SelectOptions {
  std::filesystem::path features;
  std::filesystem::path manifest;
  std::size_t folds = 5;
};

struct EvaluateOptions {
  std::filesystem::path model;
  std::filesystem::path features;
  std::filesystem::path manifest;
  std::filesystem::path split_info;  // defaults to split.json beside the manifest
};

struct PredictOptions {
  std::filesystem::path model;
  std::filesystem::path features;
  std::filesystem::path manifest;
};

struct StatsOptions {
  std::filesystem::path features;
  std::filesystem::path manifest;
};

// Each command writes its primary outputs into g.out_dir and returns 0, or
// throws; `run` turns exceptions into exit code 1.
int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out);
int cmd_extract(const GlobalOptions& g, const ExtractOptions& o, std::ostream& out);
int cmd_split(const GlobalOptions& g, const SplitOptions& o, std::ostream& out);
int cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& out);
int cmd_select(const GlobalOptions& g, const SelectOptions& o, std::ostream& out);
int cmd_evaluate(const GlobalOptions& g, const EvaluateOptions& o, std::ostream& out);
int cmd_predict(const GlobalOptions& g, const PredictOptions& o, std::ostream& out);
int cmd_stats(const GlobalOptions& g, const StatsOptions& o, std::ostream& out);

}  // namespace vocalscreen::cli
