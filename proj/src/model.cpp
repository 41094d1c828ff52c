#include "vocalscreen/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "vocalscreen/digest.hpp"
#include "vocalscreen/error.hpp"
#include "vocalscreen/feature_table.hpp"

namespace vocalscreen {

ScalerParams ScalerParams::identity() {
  ScalerParams s;
  s.means.fill(0.0);
  s.stds.fill(1.0);
  return s;
}

ScalerParams fit_scaler(std::span<const FeatureValues> features) {
  if (features.empty()) throw EmptyTrainingSet("cannot fit a scaler on zero rows");
  const auto n = static_cast<double>(features.size());
  ScalerParams s;
  for (std::size_t d = 0; d < kFeatureCount; ++d) {
    const double first = features.front()[d];
    const bool constant =
        std::all_of(features.begin(), features.end(), [&](const FeatureValues& v) { return v[d] == first; });
    if (constant) {
      s.means[d] = first;
      s.stds[d] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (const auto& v : features) sum += v[d];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& v : features) ss += (v[d] - mean) * (v[d] - mean);
    const double sd = std::sqrt(ss / n);
    s.means[d] = mean;
    s.stds[d] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

FeatureValues transform(const ScalerParams& scaler, const FeatureValues& v) {
  FeatureValues z;
  for (std::size_t d = 0; d < kFeatureCount; ++d) z[d] = (v[d] - scaler.means[d]) / scaler.stds[d];
  return z;
}

FeatureValues inverse_transform(const ScalerParams& scaler, const FeatureValues& z) {
  FeatureValues v;
  for (std::size_t d = 0; d < kFeatureCount; ++d) v[d] = z[d] * scaler.stds[d] + scaler.means[d];
  return v;
}

double minkowski_distance(std::span<const double> a, std::span<const double> b, double p) {
  if (a.size() != b.size()) throw LengthMismatch("minkowski_distance: vectors differ in length");
  if (!(p >= 1.0)) throw InvalidArgument("minkowski_distance: p must be >= 1");
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(acc, 1.0 / p);
}

std::string feature_config_digest(const FeatureConfig& config) { return sha256_hex(to_json(config).dump()); }

KnnModel knn_fit(std::span<const FeatureValues> features, std::span<const Label> labels, std::size_t k, double p,
                 const ScalerParams& scaler, bool scaler_enabled, const FeatureConfig& feature_config) {
  if (features.size() != labels.size()) throw LengthMismatch("knn_fit: features and labels differ in length");
  if (features.empty()) throw EmptyTrainingSet("knn_fit: no training rows");
  if (k == 0) throw InvalidArgument("knn_fit: k must be positive");
  if (k % 2 == 0) throw EvenK("knn_fit: k = " + std::to_string(k) + " is even; binary votes could tie");
  if (features.size() < k) {
    throw TooFewSamples("knn_fit: " + std::to_string(features.size()) + " rows < k = " + std::to_string(k));
  }
  if (!(p >= 1.0)) throw InvalidArgument("knn_fit: p must be >= 1");

  KnnModel m;
  m.k = k;
  m.p = p;
  m.scaler_enabled = scaler_enabled;
  m.scaler = scaler_enabled ? scaler : ScalerParams::identity();
  m.feature_config = feature_config;
  m.feature_config_digest = feature_config_digest(feature_config);
  m.train_labels.assign(labels.begin(), labels.end());
  m.train_matrix.reserve(features.size());
  for (const auto& v : features) m.train_matrix.push_back(transform(m.scaler, v));
  return m;
}

std::vector<std::size_t> nearest_neighbors(const KnnModel& model, const FeatureValues& query) {
  // Bounded insertion into a list kept sorted by (distance, index).
  using Entry = std::pair<double, std::size_t>;
  std::vector<Entry> best;
  best.reserve(model.k + 1);
  for (std::size_t i = 0; i < model.train_matrix.size(); ++i) {
    const double d = minkowski_distance(model.train_matrix[i], query, model.p);
    if (best.size() == model.k && !(Entry{d, i} < best.back())) continue;
    best.insert(std::upper_bound(best.begin(), best.end(), Entry{d, i}), Entry{d, i});
    if (best.size() > model.k) best.pop_back();
  }
  std::vector<std::size_t> out;
  out.reserve(best.size());
  for (const auto& e : best) out.push_back(e.second);
  return out;
}

Prediction knn_predict(const KnnModel& model, const FeatureValues& v) {
  const auto neighbors = nearest_neighbors(model, transform(model.scaler, v));
  std::size_t positive = 0;
  for (std::size_t i : neighbors) positive += model.train_labels[i] == Label::Depression ? 1 : 0;
  const std::size_t negative = neighbors.size() - positive;
  Prediction out;
  out.label = positive > negative ? Label::Depression : Label::Control;
  out.score = static_cast<double>(std::max(positive, negative)) / static_cast<double>(neighbors.size());
  return out;
}

namespace {

nlohmann::json values_json(const FeatureValues& v) { return nlohmann::json(std::vector<double>(v.begin(), v.end())); }

FeatureValues values_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kFeatureCount) throw CorruptModelFile("feature row has wrong length");
  FeatureValues v;
  for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = j[i].get<double>();
  return v;
}

nlohmann::json payload_json(const KnnModel& m) {
  nlohmann::json matrix = nlohmann::json::array();
  for (const auto& row : m.train_matrix) matrix.push_back(values_json(row));
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : m.train_labels) labels.push_back(to_string(l));
  return nlohmann::json{{"version", kModelSchemaVersion},
                        {"k", m.k},
                        {"p", m.p},
                        {"scaler",
                         {{"enabled", m.scaler_enabled},
                          {"means", values_json(m.scaler.means)},
                          {"stds", values_json(m.scaler.stds)}}},
                        {"feature_config", to_json(m.feature_config)},
                        {"feature_config_digest", m.feature_config_digest},
                        {"train", {{"matrix", matrix}, {"labels", labels}}}};
}

}  // namespace

nlohmann::json model_to_json(const KnnModel& model) {
  auto doc = payload_json(model);
  doc["digest"] = sha256_hex(doc.dump());
  return doc;
}

KnnModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw CorruptModelFile("model document is not a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw CorruptModelFile("model document has no integer version");
  }
  if (doc["version"].get<int>() != kModelSchemaVersion) {
    throw SchemaVersionMismatch("model schema version " + doc["version"].dump() + " is not supported (expected " +
                                std::to_string(kModelSchemaVersion) + ")");
  }
  if (!doc.contains("digest") || !doc["digest"].is_string()) throw CorruptModelFile("model digest missing");
  nlohmann::json payload = doc;
  payload.erase("digest");
  if (sha256_hex(payload.dump()) != doc["digest"].get<std::string>()) {
    throw CorruptModelFile("model digest mismatch");
  }

  try {
    KnnModel m;
    m.k = doc.at("k").get<std::size_t>();
    m.p = doc.at("p").get<double>();
    const auto& scaler = doc.at("scaler");
    m.scaler_enabled = scaler.at("enabled").get<bool>();
    m.scaler.means = values_from_json(scaler.at("means"));
    m.scaler.stds = values_from_json(scaler.at("stds"));
    m.feature_config = feature_config_from_json(doc.at("feature_config"));
    m.feature_config_digest = doc.at("feature_config_digest").get<std::string>();
    for (const auto& row : doc.at("train").at("matrix")) m.train_matrix.push_back(values_from_json(row));
    for (const auto& l : doc.at("train").at("labels")) m.train_labels.push_back(parse_label(l.get<std::string>()));
    if (m.train_matrix.size() != m.train_labels.size() || m.train_matrix.size() < m.k || m.k % 2 == 0) {
      throw CorruptModelFile("model fields are inconsistent");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptModelFile(std::string("model document malformed: ") + e.what());
  } catch (const UnknownLabel& e) {
    throw CorruptModelFile(std::string("model document malformed: ") + e.what());
  }
}

void save_model(const KnnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw IoFailure("write error on " + path.string());
}

KnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open model " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw CorruptModelFile(path.string() + ": not valid JSON (" + e.what() + ")");
  }
  return model_from_json(doc);
}

}  // namespace vocalscreen
