#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vocalscreen/dataset.hpp"
#include "vocalscreen/dsp_features.hpp"

namespace vocalscreen {

// Per-dimension standardization (population std). Dimensions without variance
// get std 1 so they transform to 0.
struct ScalerParams {
  FeatureValues means{};
  FeatureValues stds{};

  static ScalerParams identity();
  friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

// Throws EmptyTrainingSet.
ScalerParams fit_scaler(std::span<const FeatureValues> features);
FeatureValues transform(const ScalerParams& scaler, const FeatureValues& v);
FeatureValues inverse_transform(const ScalerParams& scaler, const FeatureValues& z);

// (sum |a_i - b_i|^p)^(1/p); p = 1 and p = 2 take exact fast paths.
double minkowski_distance(std::span<const double> a, std::span<const double> b, double p);

struct KnnModel {
  std::vector<FeatureValues> train_matrix;  // standardized rows
  std::vector<Label> train_labels;
  std::size_t k = 3;
  double p = 2.0;
  bool scaler_enabled = true;
  ScalerParams scaler = ScalerParams::identity();
  FeatureConfig feature_config;
  std::string feature_config_digest;
};

// Standardizes `features` with `scaler` and stores them. Pass
// ScalerParams::identity() with scaler_enabled = false for an unscaled model.
// Throws EmptyTrainingSet, TooFewSamples (N < k), EvenK, InvalidArgument (p < 1).
KnnModel knn_fit(std::span<const FeatureValues> features, std::span<const Label> labels, std::size_t k,
                 double p, const ScalerParams& scaler, bool scaler_enabled = true,
                 const FeatureConfig& feature_config = {});

struct Prediction {
  Label label = Label::Control;
  double score = 0.0;  // fraction of the k neighbours voting for `label`

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Uniform vote over the k nearest training rows; equal distances are ordered
// by training-row index.
Prediction knn_predict(const KnnModel& model, const FeatureValues& v);

// Indices of the k nearest rows to an already standardized query, nearest first.
std::vector<std::size_t> nearest_neighbors(const KnnModel& model, const FeatureValues& standardized_query);

inline constexpr int kModelSchemaVersion = 1;

std::string feature_config_digest(const FeatureConfig& config);

// Model document: {version, k, p, scaler{enabled, means, stds}, feature_config,
// feature_config_digest, train{matrix, labels}, digest}. The digest is SHA-256
// of the compact dump of every other field.
nlohmann::json model_to_json(const KnnModel& model);
// Throws SchemaVersionMismatch or CorruptModelFile.
KnnModel model_from_json(const nlohmann::json& doc);

void save_model(const KnnModel& model, const std::filesystem::path& path);
KnnModel load_model(const std::filesystem::path& path);

}  // namespace vocalscreen
