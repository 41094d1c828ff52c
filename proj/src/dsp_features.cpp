#include "vocalscreen/dsp_features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "vocalscreen/error.hpp"

namespace vocalscreen {

namespace {

double dct_scale(std::size_t j, std::size_t n) {
  return j == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
}

double dct_cos(std::size_t j, std::size_t m, std::size_t n) {
  return std::cos(std::numbers::pi * static_cast<double>(j) * (2.0 * static_cast<double>(m) + 1.0) /
                  (2.0 * static_cast<double>(n)));
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "mfcc0", "mfcc1", "mfcc2",  "mfcc3",  "mfcc4",    "mfcc5",      "mfcc6", "mfcc7",
      "mfcc8", "mfcc9", "mfcc10", "mfcc11", "mfcc12",   "centroid",   "complexity", "zcr"};
  return names;
}

void FeatureConfig::validate(int sample_rate) const {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!is_power_of_two(n_fft)) throw InvalidArgument("n_fft must be a power of two");
  if (hop == 0 || hop > n_fft) throw InvalidArgument("hop must satisfy 0 < hop <= n_fft");
  if (n_mels == 0) throw InvalidArgument("n_mels must be positive");
  if (n_mfcc == 0 || n_mfcc > n_mels) throw InvalidArgument("n_mfcc must satisfy 0 < n_mfcc <= n_mels");
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
    throw InvalidArgument("filter range must satisfy 0 <= fmin < fmax <= sample_rate / 2");
  }
  if (!(log_floor > 0.0)) throw InvalidArgument("log_floor must be positive");
  if (!(peak_threshold_db >= 0.0)) throw InvalidArgument("peak_threshold_db must be non-negative");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(int sample_rate, const FeatureConfig& config) : bins_(config.n_fft / 2 + 1) {
  config.validate(sample_rate);
  const double mel_lo = hz_to_mel(config.fmin);
  const double mel_hi = hz_to_mel(config.fmax);
  const std::size_t points = config.n_mels + 2;
  std::vector<double> edges(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    edges[i] = mel_to_hz(mel);
  }
  edges.front() = config.fmin;
  edges.back() = config.fmax;

  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(config.n_fft);
  filters_.reserve(config.n_mels);
  for (std::size_t m = 0; m < config.n_mels; ++m) {
    MelFilter f;
    f.lower_hz = edges[m];
    f.center_hz = edges[m + 1];
    f.upper_hz = edges[m + 2];
    const double norm = 2.0 / (f.upper_hz - f.lower_hz);
    bool started = false;
    for (std::size_t k = 0; k < bins_; ++k) {
      const double hz = static_cast<double>(k) * bin_hz;
      const double rising = (hz - f.lower_hz) / (f.center_hz - f.lower_hz);
      const double falling = (f.upper_hz - hz) / (f.upper_hz - f.center_hz);
      const double w = std::max(0.0, std::min(rising, falling)) * norm;
      if (w > 0.0) {
        if (!started) {
          f.first_bin = k;
          started = true;
        }
        // Zero weights between the first and last positive bin cannot occur for a triangle.
        f.weights.push_back(w);
      } else if (started) {
        break;
      }
    }
    filters_.push_back(std::move(f));
  }
}

void MelFilterbank::apply(std::span<const double> power, std::span<double> out) const {
  if (power.size() != bins_ || out.size() != filters_.size()) {
    throw InvalidArgument("filterbank input/output size mismatch");
  }
  for (std::size_t m = 0; m < filters_.size(); ++m) {
    const auto& f = filters_[m];
    double acc = 0.0;
    for (std::size_t i = 0; i < f.weights.size(); ++i) acc += f.weights[i] * power[f.first_bin + i];
    out[m] = acc;
  }
}

std::vector<std::vector<double>> MelFilterbank::dense() const {
  std::vector<std::vector<double>> matrix(filters_.size(), std::vector<double>(bins_, 0.0));
  for (std::size_t m = 0; m < filters_.size(); ++m) {
    const auto& f = filters_[m];
    std::copy(f.weights.begin(), f.weights.end(), matrix[m].begin() + static_cast<std::ptrdiff_t>(f.first_bin));
  }
  return matrix;
}

std::vector<std::vector<double>> mel_filterbank(int sample_rate, const FeatureConfig& config) {
  return MelFilterbank(sample_rate, config).dense();
}

std::vector<double> dct_ii(std::span<const double> input) {
  const std::size_t n = input.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) acc += input[m] * dct_cos(j, m, n);
    out[j] = dct_scale(j, n) * acc;
  }
  return out;
}

std::vector<double> dct_iii(std::span<const double> input) {
  const std::size_t n = input.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += dct_scale(j, n) * input[j] * dct_cos(j, m, n);
    out[m] = acc;
  }
  return out;
}

double spectral_centroid(std::span<const double> power) {
  if (power.size() < 2) return 0.0;
  const double n_fft = 2.0 * static_cast<double>(power.size() - 1);
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    weighted += (static_cast<double>(k) / n_fft) * power[k];
    total += power[k];
  }
  return total > 0.0 ? weighted / total : 0.0;
}

double spectral_complexity(std::span<const double> power, double peak_threshold_db) {
  if (power.size() < 3) return 0.0;
  std::vector<double> db(power.size());
  double max_db = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < power.size(); ++k) {
    db[k] = power[k] > 0.0 ? 10.0 * std::log10(power[k]) : -std::numeric_limits<double>::infinity();
    max_db = std::max(max_db, db[k]);
  }
  if (!std::isfinite(max_db)) return 0.0;
  const double floor_db = max_db - peak_threshold_db;
  std::size_t peaks = 0;
  for (std::size_t k = 1; k + 1 < power.size(); ++k) {
    if (db[k] > db[k - 1] && db[k] > db[k + 1] && db[k] > floor_db) ++peaks;
  }
  return static_cast<double>(peaks);
}

double zero_crossing_rate(std::span<const double> samples) {
  if (samples.size() < 2) throw SegmentTooShort("zero-crossing rate needs at least two samples");
  std::size_t crossings = 0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if ((samples[i] >= 0.0) != (samples[i + 1] >= 0.0)) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(samples.size() - 1);
}

FeatureExtractor::FeatureExtractor(int sample_rate, FeatureConfig config)
    : sample_rate_(sample_rate),
      config_(config),
      fft_((config.validate(sample_rate), config.n_fft)),
      hann_(config.n_fft),
      filterbank_(sample_rate, config),
      dct_basis_(config.n_mfcc * config.n_mels) {
  if (config_.n_mfcc != kMfccCount) {
    throw InvalidArgument("feature rows carry exactly " + std::to_string(kMfccCount) + " MFCCs");
  }
  // Periodic Hann.
  for (std::size_t n = 0; n < config_.n_fft; ++n) {
    hann_[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                    static_cast<double>(config_.n_fft));
  }
  for (std::size_t j = 0; j < config_.n_mfcc; ++j) {
    for (std::size_t m = 0; m < config_.n_mels; ++m) {
      dct_basis_[j * config_.n_mels + m] = dct_scale(j, config_.n_mels) * dct_cos(j, m, config_.n_mels);
    }
  }
}

std::vector<double> FeatureExtractor::power_spectrum(std::span<const double> frame, Window window) const {
  if (frame.size() != config_.n_fft) {
    throw InvalidArgument("power_spectrum: frame length " + std::to_string(frame.size()) +
                          " != n_fft " + std::to_string(config_.n_fft));
  }
  std::vector<std::complex<double>> buffer(config_.n_fft);
  for (std::size_t n = 0; n < config_.n_fft; ++n) {
    buffer[n] = window == Window::Hann ? frame[n] * hann_[n] : frame[n];
  }
  fft_.forward(buffer);
  std::vector<double> power(config_.n_fft / 2 + 1);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buffer[k]);
  return power;
}

std::size_t FeatureExtractor::frame_count(std::size_t samples) const {
  return samples < config_.n_fft ? 0 : 1 + (samples - config_.n_fft) / config_.hop;
}

std::vector<double> FeatureExtractor::frame_mfcc(std::span<const double> power) const {
  std::vector<double> bands(config_.n_mels);
  filterbank_.apply(power, bands);
  for (double& e : bands) e = 10.0 * std::log10(std::max(e, config_.log_floor));
  std::vector<double> coeffs(config_.n_mfcc, 0.0);
  for (std::size_t j = 0; j < config_.n_mfcc; ++j) {
    const double* row = &dct_basis_[j * config_.n_mels];
    double acc = 0.0;
    for (std::size_t m = 0; m < config_.n_mels; ++m) acc += row[m] * bands[m];
    coeffs[j] = acc;
  }
  return coeffs;
}

void FeatureExtractor::check_segment(const AudioClip& segment) const {
  if (segment.sample_rate != sample_rate_) {
    throw InvalidArgument("segment sample rate " + std::to_string(segment.sample_rate) +
                          " does not match extractor rate " + std::to_string(sample_rate_));
  }
  if (frame_count(segment.samples.size()) == 0) {
    throw SegmentTooShort("segment of " + std::to_string(segment.samples.size()) +
                          " samples is shorter than one " + std::to_string(config_.n_fft) + "-sample frame");
  }
}

std::vector<double> FeatureExtractor::mfcc(const AudioClip& segment) const {
  check_segment(segment);
  const std::size_t frames = frame_count(segment.samples.size());
  std::vector<double> sum(config_.n_mfcc, 0.0);
  const std::span<const double> samples(segment.samples);
  for (std::size_t f = 0; f < frames; ++f) {
    const auto power = power_spectrum(samples.subspan(f * config_.hop, config_.n_fft));
    const auto c = frame_mfcc(power);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += c[j];
  }
  for (double& v : sum) v /= static_cast<double>(frames);
  return sum;
}

FeatureVector FeatureExtractor::extract(const AudioClip& segment, std::string segment_id) const {
  check_segment(segment);
  const std::size_t frames = frame_count(segment.samples.size());
  const std::span<const double> samples(segment.samples);

  FeatureVector out;
  out.segment_id = std::move(segment_id);
  double centroid = 0.0;
  double complexity = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    const auto power = power_spectrum(samples.subspan(f * config_.hop, config_.n_fft));
    const auto c = frame_mfcc(power);
    for (std::size_t j = 0; j < kMfccCount; ++j) out.values[j] += c[j];
    centroid += spectral_centroid(power);
    complexity += spectral_complexity(power, config_.peak_threshold_db);
  }
  const auto n = static_cast<double>(frames);
  for (std::size_t j = 0; j < kMfccCount; ++j) out.values[j] /= n;
  out.values[kCentroidIndex] = centroid / n;
  out.values[kComplexityIndex] = complexity / n;
  out.values[kZcrIndex] = zero_crossing_rate(samples);
  return out;
}

FeatureVector extract_features(const AudioClip& segment, const FeatureConfig& config, std::string segment_id) {
  return FeatureExtractor(segment.sample_rate, config).extract(segment, std::move(segment_id));
}

}  // namespace vocalscreen
