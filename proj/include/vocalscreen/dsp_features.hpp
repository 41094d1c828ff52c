#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vocalscreen/audio_io.hpp"
#include "vocalscreen/fft.hpp"

namespace vocalscreen {

inline constexpr std::size_t kMfccCount = 13;
inline constexpr std::size_t kFeatureCount = 16;
inline constexpr std::size_t kCentroidIndex = 13;
inline constexpr std::size_t kComplexityIndex = 14;
inline constexpr std::size_t kZcrIndex = 15;

using FeatureValues = std::array<double, kFeatureCount>;

// Column names in feature order: mfcc0..mfcc12, centroid, complexity, zcr.
const std::array<std::string, kFeatureCount>& feature_names();

// One row per 4 s segment:
//   [0..12]  per-frame MFCCs averaged over the segment (dB cepstral units)
//   [13]     mean spectral centroid, as a fraction of the sample rate
//   [14]     mean spectral complexity (prominent peaks per frame)
//   [15]     zero-crossing rate, crossings per sample
struct FeatureVector {
  std::string segment_id;
  FeatureValues values{};
};

struct FeatureConfig {
  std::size_t n_fft = 2048;
  std::size_t hop = 512;
  std::size_t n_mels = 128;
  std::size_t n_mfcc = kMfccCount;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-10;
  double peak_threshold_db = 30.0;

  // Throws InvalidArgument when an invariant fails for this sample rate.
  void validate(int sample_rate) const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

enum class Window { Hann, Rectangular };

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filter stored sparsely: weights cover bins [first_bin, first_bin + weights.size()).
struct MelFilter {
  double lower_hz = 0.0;
  double center_hz = 0.0;
  double upper_hz = 0.0;
  std::size_t first_bin = 0;
  std::vector<double> weights;
};

class MelFilterbank {
 public:
  MelFilterbank(int sample_rate, const FeatureConfig& config);

  std::size_t band_count() const { return filters_.size(); }
  std::size_t bin_count() const { return bins_; }
  const std::vector<MelFilter>& filters() const { return filters_; }

  // out[m] = sum_k W[m][k] * power[k]
  void apply(std::span<const double> power, std::span<double> out) const;

  std::vector<std::vector<double>> dense() const;

 private:
  std::size_t bins_;
  std::vector<MelFilter> filters_;
};

// n_mels x (n_fft/2 + 1) weight matrix. Centers are equally spaced on the mel
// scale between fmin and fmax; each triangle is scaled by 2 / (upper - lower).
std::vector<std::vector<double>> mel_filterbank(int sample_rate, const FeatureConfig& config);

// Orthonormal DCT-II and its inverse (the transpose, i.e. DCT-III).
std::vector<double> dct_ii(std::span<const double> input);
std::vector<double> dct_iii(std::span<const double> input);

// Sum over k of (k / n_fft) * P[k] divided by the total power; 0 for silence.
double spectral_centroid(std::span<const double> power);

// Number of strict interior local maxima (in dB) lying above max_dB - threshold.
double spectral_complexity(std::span<const double> power, double peak_threshold_db);

// Fraction of adjacent sample pairs with differing sign, treating 0 as positive.
double zero_crossing_rate(std::span<const double> samples);

// Precomputes everything that depends only on (sample rate, config): window,
// FFT plan, sparse filterbank and DCT basis. Immutable and thread-safe.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(int sample_rate = kCanonicalSampleRate, FeatureConfig config = {});

  const FeatureConfig& config() const { return config_; }
  int sample_rate() const { return sample_rate_; }
  const MelFilterbank& filterbank() const { return filterbank_; }

  // One-sided power spectrum |X[k]|^2, k = 0..n_fft/2, of a windowed frame.
  std::vector<double> power_spectrum(std::span<const double> frame, Window window = Window::Hann) const;

  std::size_t frame_count(std::size_t samples) const;

  // MFCCs of one frame's power spectrum.
  std::vector<double> frame_mfcc(std::span<const double> power) const;

  // Per-segment MFCCs: frame MFCCs averaged over all full frames.
  std::vector<double> mfcc(const AudioClip& segment) const;

  FeatureVector extract(const AudioClip& segment, std::string segment_id = {}) const;

 private:
  void check_segment(const AudioClip& segment) const;

  int sample_rate_;
  FeatureConfig config_;
  Fft fft_;
  std::vector<double> hann_;
  MelFilterbank filterbank_;
  std::vector<double> dct_basis_;  // n_mfcc x n_mels, row-major
};

FeatureVector extract_features(const AudioClip& segment, const FeatureConfig& config = {},
                               std::string segment_id = {});

}  // namespace vocalscreen
