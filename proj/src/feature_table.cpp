#include "vocalscreen/feature_table.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "vocalscreen/error.hpp"

namespace vocalscreen {

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw FeatureTableError("cannot format number");
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw FeatureTableError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string feature_csv_header() {
  std::string header = "segment_id,label";
  for (const auto& name : feature_names()) header += "," + name;
  return header;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  out << feature_csv_header() << '\n';
  for (const auto& row : table) {
    out << row.features.segment_id << ',' << to_string(row.label);
    for (double v : row.features.values) out << ',' << format_double(v);
    out << '\n';
  }
}

void save_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_feature_csv(out, table);
  if (!out) throw IoFailure("write error on " + path.string());
}

FeatureTable read_feature_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw FeatureTableError(source + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != feature_csv_header()) throw FeatureTableError(source + ": unexpected header");

  FeatureTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 2 + kFeatureCount) {
      throw FeatureTableError(where + ": expected " + std::to_string(2 + kFeatureCount) + " fields");
    }
    LabeledFeatures row;
    row.features.segment_id = std::string(fields[0]);
    try {
      row.label = parse_label(fields[1]);
      for (std::size_t i = 0; i < kFeatureCount; ++i) row.features.values[i] = parse_double(fields[2 + i]);
    } catch (const Error& e) {
      throw FeatureTableError(where + ": " + e.what());
    }
    table.push_back(std::move(row));
  }
  return table;
}

FeatureTable load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open feature table " + path.string());
  return read_feature_csv(in, path.string());
}

FeatureTable select_rows(const FeatureTable& table, const DatasetManifest& manifest) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < table.size(); ++i) index.emplace(table[i].features.segment_id, i);
  FeatureTable out;
  out.reserve(manifest.size());
  for (const auto& r : manifest.rows()) {
    const auto it = index.find(r.path);
    if (it == index.end()) throw FeatureTableError("segment '" + r.path + "' has no feature row");
    const auto& row = table[it->second];
    if (row.label != r.label) throw FeatureTableError("label mismatch for segment '" + r.path + "'");
    out.push_back(row);
  }
  return out;
}

nlohmann::json to_json(const FeatureConfig& c) {
  return nlohmann::json{{"n_fft", c.n_fft},         {"hop", c.hop},
                        {"n_mels", c.n_mels},       {"n_mfcc", c.n_mfcc},
                        {"fmin", c.fmin},           {"fmax", c.fmax},
                        {"log_floor", c.log_floor}, {"peak_threshold_db", c.peak_threshold_db}};
}

FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  FeatureConfig c;
  c.n_fft = j.at("n_fft").get<std::size_t>();
  c.hop = j.at("hop").get<std::size_t>();
  c.n_mels = j.at("n_mels").get<std::size_t>();
  c.n_mfcc = j.at("n_mfcc").get<std::size_t>();
  c.fmin = j.at("fmin").get<double>();
  c.fmax = j.at("fmax").get<double>();
  c.log_floor = j.at("log_floor").get<double>();
  c.peak_threshold_db = j.at("peak_threshold_db").get<double>();
  return c;
}

}  // namespace vocalscreen
