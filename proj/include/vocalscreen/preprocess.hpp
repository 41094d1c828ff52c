#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vocalscreen/audio_io.hpp"

namespace vocalscreen {

inline constexpr double kSegmentSeconds = 4.0;

// Frame-energy silence detector settings. A frame is voiced when its RMS is at
// least threshold_ratio times the loudest frame's RMS.
struct SilenceParams {
  double frame_seconds = 0.050;
  double hop_seconds = 0.025;
  double threshold_ratio = 0.1;

  // Throws InvalidArgument unless 0 < hop <= frame and 0 < ratio < 1.
  void validate() const;
};

// Half-open sample range [begin, end).
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  friend bool operator==(const SampleRange&, const SampleRange&) = default;
};

// Maximal runs of samples covered by at least one voiced frame, in time order.
std::vector<SampleRange> voiced_ranges(const AudioClip& clip, const SilenceParams& params = {});

// Concatenates the voiced ranges. All-silent input yields an empty clip.
AudioClip remove_silence(const AudioClip& clip, const SilenceParams& params = {});

struct SegmentSet {
  std::vector<AudioClip> segments;
  double segment_seconds = kSegmentSeconds;
  std::string source_id;
  int sample_rate = kCanonicalSampleRate;

  std::size_t samples_per_segment() const;
};

// Non-overlapping windows of exactly segment_seconds; the short tail is dropped.
SegmentSet segment(const AudioClip& clip, double segment_seconds = kSegmentSeconds,
                   std::string source_id = {});

}  // namespace vocalscreen
