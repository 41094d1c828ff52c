#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace vocalscreen {

// Positive class is Depression throughout scoring.
enum class Label { Control = 0, Depression = 1 };

std::string_view to_string(Label label);
// Accepts exactly "depression" or "control"; throws UnknownLabel otherwise.
Label parse_label(std::string_view text);

struct ManifestRow {
  std::string path;
  Label label = Label::Control;
  std::string participant;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

// Ordered rows with unique paths. `path` names a recording or, after
// extraction, a segment id.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  // Throws DuplicatePath.
  explicit DatasetManifest(std::vector<ManifestRow> rows);

  const std::vector<ManifestRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  std::size_t count(Label label) const;
  std::vector<std::string> participants() const;  // first-appearance order

  void add(ManifestRow row);

 private:
  std::vector<ManifestRow> rows_;
  std::unordered_set<std::string> paths_;
};

inline constexpr std::string_view kManifestHeader = "path,label,participant";

// Throws ManifestParseError, DuplicatePath or UnknownLabel; messages carry the line number.
DatasetManifest parse_manifest(std::istream& in, const std::string& source = "<manifest>");
DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(std::ostream& out, const DatasetManifest& manifest);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

enum class SplitMode { SegmentLevel, SpeakerDisjoint };

std::string_view to_string(SplitMode mode);
SplitMode parse_split_mode(std::string_view text);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  SplitMode mode = SplitMode::SegmentLevel;

  void validate() const;
};

struct SplitResult {
  DatasetManifest train;
  DatasetManifest test;
};

// floor(x + 0.5)
std::size_t round_half_up(double x);

// Seeded partition into train/test. Segment-level mode shuffles rows and puts
// the first round(N * f) in train; speaker-disjoint mode shuffles participants
// and puts the first round(P * f) of them, whole, in train. Each side keeps
// the input's row order. Throws DegenerateSplit.
SplitResult split(const DatasetManifest& manifest, const SplitSpec& spec);

// {seed, mode, train_fraction, counts{train, test}} for the split sidecar file.
nlohmann::json split_summary(const SplitSpec& spec, const SplitResult& result);

}  // namespace vocalscreen
