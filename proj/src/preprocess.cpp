#include "vocalscreen/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "vocalscreen/error.hpp"

namespace vocalscreen {

void SilenceParams::validate() const {
  if (!(frame_seconds > 0.0)) throw InvalidArgument("silence frame length must be positive");
  if (!(hop_seconds > 0.0 && hop_seconds <= frame_seconds)) {
    throw InvalidArgument("silence hop must satisfy 0 < hop <= frame");
  }
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0)) {
    throw InvalidArgument("silence threshold ratio must lie in (0, 1)");
  }
}

std::vector<SampleRange> voiced_ranges(const AudioClip& clip, const SilenceParams& params) {
  params.validate();
  const std::size_t n = clip.samples.size();
  if (n == 0) return {};

  const auto rate = static_cast<double>(clip.sample_rate);
  const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.hop_seconds * rate)));
  // A clip shorter than one frame is analysed as a single frame.
  const std::size_t frame = std::min(
      n, std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.frame_seconds * rate))));

  std::vector<std::size_t> starts;
  std::vector<double> rms;
  for (std::size_t start = 0; start + frame <= n; start += hop) {
    double energy = 0.0;
    for (std::size_t i = start; i < start + frame; ++i) energy += clip.samples[i] * clip.samples[i];
    starts.push_back(start);
    rms.push_back(std::sqrt(energy / static_cast<double>(frame)));
  }

  const double peak = *std::max_element(rms.begin(), rms.end());
  if (peak <= 0.0) return {};
  const double threshold = params.threshold_ratio * peak;

  std::vector<SampleRange> ranges;
  for (std::size_t f = 0; f < starts.size(); ++f) {
    if (rms[f] < threshold) continue;
    const SampleRange r{starts[f], starts[f] + frame};
    if (!ranges.empty() && r.begin <= ranges.back().end) {
      ranges.back().end = std::max(ranges.back().end, r.end);
    } else {
      ranges.push_back(r);
    }
  }
  return ranges;
}

AudioClip remove_silence(const AudioClip& clip, const SilenceParams& params) {
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  for (const auto& r : voiced_ranges(clip, params)) {
    out.samples.insert(out.samples.end(), clip.samples.begin() + static_cast<std::ptrdiff_t>(r.begin),
                       clip.samples.begin() + static_cast<std::ptrdiff_t>(r.end));
  }
  return out;
}

std::size_t SegmentSet::samples_per_segment() const {
  return static_cast<std::size_t>(std::llround(segment_seconds * sample_rate));
}

SegmentSet segment(const AudioClip& clip, double segment_seconds, std::string source_id) {
  if (!(segment_seconds > 0.0)) throw InvalidArgument("segment length must be positive");
  SegmentSet set;
  set.segment_seconds = segment_seconds;
  set.source_id = std::move(source_id);
  set.sample_rate = clip.sample_rate;

  const std::size_t len = set.samples_per_segment();
  if (len == 0) throw InvalidArgument("segment length rounds to zero samples");
  const std::size_t count = clip.samples.size() / len;
  set.segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    AudioClip seg;
    seg.sample_rate = clip.sample_rate;
    const auto first = clip.samples.begin() + static_cast<std::ptrdiff_t>(s * len);
    seg.samples.assign(first, first + static_cast<std::ptrdiff_t>(len));
    set.segments.push_back(std::move(seg));
  }
  return set;
}

}  // namespace vocalscreen
