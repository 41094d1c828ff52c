#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vocalscreen/dataset.hpp"
#include "vocalscreen/dsp_features.hpp"

namespace vocalscreen {

struct LabeledFeatures {
  FeatureVector features;
  Label label = Label::Control;
};

using FeatureTable = std::vector<LabeledFeatures>;

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

// CSV layout: segment_id,label,mfcc0..mfcc12,centroid,complexity,zcr
std::string feature_csv_header();
void write_feature_csv(std::ostream& out, const FeatureTable& table);
void save_feature_csv(const std::filesystem::path& path, const FeatureTable& table);
// Throws FeatureTableError (bad header, field count, number) or UnknownLabel.
FeatureTable read_feature_csv(std::istream& in, const std::string& source = "<features>");
FeatureTable load_feature_csv(const std::filesystem::path& path);

// Rows named by the manifest, in manifest order. Throws FeatureTableError when
// a manifest path has no feature row or the labels disagree.
FeatureTable select_rows(const FeatureTable& table, const DatasetManifest& manifest);

nlohmann::json to_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json(const nlohmann::json& j);

}  // namespace vocalscreen
