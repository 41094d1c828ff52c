#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vocalscreen {

// Every clip entering the pipeline is resampled to this rate.
inline constexpr int kCanonicalSampleRate = 16000;

// Mono audio, amplitudes in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kCanonicalSampleRate;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  bool empty() const { return samples.empty(); }

  friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

// Decoded WAV before downmixing; channels[c][i] is frame i of channel c.
struct MultiChannelClip {
  std::vector<std::vector<double>> channels;
  int sample_rate = 0;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t frame_count() const { return channels.empty() ? 0 : channels.front().size(); }
};

enum class SampleFormat { Pcm16, Float32 };

// Parses a RIFF/WAVE byte stream. Accepts PCM16 (format 1) and IEEE float32
// (format 3) with one or two channels; unknown chunks are skipped.
// Throws MalformedWav or UnsupportedFormat.
MultiChannelClip decode_wav(std::span<const std::uint8_t> bytes);

// Averages channels frame by frame. A mono clip comes back unchanged.
AudioClip to_mono(const MultiChannelClip& clip);

// Linear-interpolation resampling with endpoint hold. Output length is
// round(len * target / source); a clip already at target_rate is returned as is.
AudioClip resample(const AudioClip& clip, int target_rate);

// Serializes a mono clip as a canonical 44-byte-header WAV. PCM16 quantizes
// with round(s * 32768) clamped to the int16 range. When `comment` is non-empty
// a LIST/INFO chunk carrying it is appended after the data chunk.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip,
                                     SampleFormat format = SampleFormat::Pcm16,
                                     const std::string& comment = {});

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// decode + to_mono + resample to the canonical rate.
AudioClip load_clip(const std::filesystem::path& path, int target_rate = kCanonicalSampleRate);

}  // namespace vocalscreen
