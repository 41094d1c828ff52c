#include "vocalscreen/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vocalscreen/error.hpp"
#include "vocalscreen/random.hpp"

namespace vocalscreen {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string_view to_string(Label label) { return label == Label::Depression ? "depression" : "control"; }

Label parse_label(std::string_view text) {
  if (text == "depression") return Label::Depression;
  if (text == "control") return Label::Control;
  throw UnknownLabel("unknown label '" + std::string(text) + "' (expected depression or control)");
}

DatasetManifest::DatasetManifest(std::vector<ManifestRow> rows) {
  rows_.reserve(rows.size());
  for (auto& row : rows) add(std::move(row));
}

void DatasetManifest::add(ManifestRow row) {
  if (!paths_.insert(row.path).second) throw DuplicatePath("duplicate path '" + row.path + "'");
  rows_.push_back(std::move(row));
}

std::size_t DatasetManifest::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [label](const ManifestRow& r) { return r.label == label; }));
}

std::vector<std::string> DatasetManifest::participants() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : rows_) {
    if (seen.insert(r.participant).second) out.push_back(r.participant);
  }
  return out;
}

DatasetManifest parse_manifest(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ManifestParseError(source + ": missing header");
  if (strip_cr(line) != kManifestHeader) {
    throw ManifestParseError(source + ": expected header '" + std::string(kManifestHeader) + "'");
  }
  DatasetManifest manifest;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = strip_cr(line);
    if (view.empty()) continue;
    auto fields = split_fields(view);
    const std::string where = source + ":" + std::to_string(line_no);
    if (fields.size() != 3) {
      throw ManifestParseError(where + ": expected 3 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ManifestParseError(where + ": empty path");
    if (fields[2].empty()) throw ManifestParseError(where + ": empty participant");
    Label label;
    try {
      label = parse_label(fields[1]);
    } catch (const UnknownLabel& e) {
      throw UnknownLabel(where + ": " + e.what());
    }
    try {
      manifest.add({std::move(fields[0]), label, std::move(fields[2])});
    } catch (const DuplicatePath& e) {
      throw DuplicatePath(where + ": " + e.what());
    }
  }
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open manifest " + path.string());
  return parse_manifest(in, path.string());
}

void write_manifest(std::ostream& out, const DatasetManifest& manifest) {
  out << kManifestHeader << '\n';
  for (const auto& r : manifest.rows()) out << r.path << ',' << to_string(r.label) << ',' << r.participant << '\n';
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_manifest(out, manifest);
  if (!out) throw IoFailure("write error on " + path.string());
}

std::string_view to_string(SplitMode mode) {
  return mode == SplitMode::SegmentLevel ? "segment-level" : "speaker-disjoint";
}

SplitMode parse_split_mode(std::string_view text) {
  if (text == "segment-level" || text == "segment") return SplitMode::SegmentLevel;
  if (text == "speaker-disjoint" || text == "speaker") return SplitMode::SpeakerDisjoint;
  throw InvalidArgument("unknown split mode '" + std::string(text) + "'");
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must lie in (0, 1)");
  }
}

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

SplitResult split(const DatasetManifest& manifest, const SplitSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  std::vector<bool> in_train(manifest.size(), false);

  if (spec.mode == SplitMode::SegmentLevel) {
    std::vector<std::size_t> order(manifest.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(std::span<std::size_t>(order), rng);
    const std::size_t n_train = round_half_up(static_cast<double>(manifest.size()) * spec.train_fraction);
    if (n_train == 0 || n_train >= manifest.size()) {
      throw DegenerateSplit("split of " + std::to_string(manifest.size()) + " rows at fraction " +
                            std::to_string(spec.train_fraction) + " leaves one side empty");
    }
    for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;
  } else {
    auto people = manifest.participants();
    shuffle(std::span<std::string>(people), rng);
    const std::size_t n_train = round_half_up(static_cast<double>(people.size()) * spec.train_fraction);
    if (n_train == 0 || n_train >= people.size()) {
      throw DegenerateSplit("speaker-disjoint split of " + std::to_string(people.size()) +
                            " participants leaves one side empty");
    }
    std::unordered_map<std::string, bool> assignment;
    for (std::size_t i = 0; i < people.size(); ++i) assignment[people[i]] = i < n_train;
    for (std::size_t r = 0; r < manifest.size(); ++r) in_train[r] = assignment.at(manifest.rows()[r].participant);
  }

  SplitResult result;
  for (std::size_t r = 0; r < manifest.size(); ++r) {
    (in_train[r] ? result.train : result.test).add(manifest.rows()[r]);
  }
  if (spec.mode == SplitMode::SpeakerDisjoint) {
    for (const auto* side : {&result.train, &result.test}) {
      if (side->count(Label::Depression) == 0 || side->count(Label::Control) == 0) {
        throw DegenerateSplit(std::string("speaker-disjoint split leaves the ") +
                              (side == &result.train ? "train" : "test") +
                              " side with a single class; try another seed");
      }
    }
  }
  return result;
}

nlohmann::json split_summary(const SplitSpec& spec, const SplitResult& result) {
  auto side = [](const DatasetManifest& m) {
    return nlohmann::json{{"total", m.size()},
                          {"depression", m.count(Label::Depression)},
                          {"control", m.count(Label::Control)},
                          {"participants", m.participants().size()}};
  };
  return nlohmann::json{{"seed", spec.seed},
                        {"mode", to_string(spec.mode)},
                        {"train_fraction", spec.train_fraction},
                        {"counts", {{"train", side(result.train)}, {"test", side(result.test)}}}};
}

}  // namespace vocalscreen
