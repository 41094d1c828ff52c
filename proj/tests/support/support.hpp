#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vocalscreen/audio_io.hpp"
#include "vocalscreen/dsp_features.hpp"

namespace testing {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Test-side generator: std::mt19937_64 is fully specified by the standard, so
// generated inputs are the same everywhere. Distributions are hand-rolled for
// the same reason.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t bits() { return eng_(); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
  int integer(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (eng_() & 1U) != 0; }
  std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

// Runs `prop` on `trials` independently seeded generators; the trial number is
// passed along so failures can be replayed.
inline void for_all(std::size_t trials, std::uint64_t seed, const std::function<void(Gen&, std::size_t)>& prop) {
  for (std::size_t t = 0; t < trials; ++t) {
    Gen g(seed * 1000003ULL + t);
    prop(g, t);
  }
}

inline vocalscreen::AudioClip tone(double hz, double amplitude, double seconds, int sr = 16000, double phase = 0.0) {
  vocalscreen::AudioClip c;
  c.sample_rate = sr;
  c.samples.resize(static_cast<std::size_t>(std::llround(seconds * sr)));
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    c.samples[i] = amplitude * std::sin(2.0 * kPi * hz * static_cast<double>(i) / sr + phase);
  }
  return c;
}

inline vocalscreen::AudioClip chirp(double f0, double f1, double amplitude, double seconds, int sr = 16000) {
  vocalscreen::AudioClip c;
  c.sample_rate = sr;
  c.samples.resize(static_cast<std::size_t>(std::llround(seconds * sr)));
  const double rate = (f1 - f0) / seconds;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const double t = static_cast<double>(i) / sr;
    c.samples[i] = amplitude * std::sin(2.0 * kPi * (f0 * t + 0.5 * rate * t * t));
  }
  return c;
}

inline vocalscreen::AudioClip noise(double amplitude, double seconds, std::uint64_t seed, int sr = 16000) {
  Gen g(seed);
  vocalscreen::AudioClip c;
  c.sample_rate = sr;
  c.samples = g.vec(static_cast<std::size_t>(std::llround(seconds * sr)), -amplitude, amplitude);
  return c;
}

inline vocalscreen::AudioClip silence(double seconds, int sr = 16000) {
  vocalscreen::AudioClip c;
  c.sample_rate = sr;
  c.samples.assign(static_cast<std::size_t>(std::llround(seconds * sr)), 0.0);
  return c;
}

inline vocalscreen::AudioClip concat(const vocalscreen::AudioClip& a, const vocalscreen::AudioClip& b) {
  vocalscreen::AudioClip c = a;
  c.samples.insert(c.samples.end(), b.samples.begin(), b.samples.end());
  return c;
}

inline vocalscreen::AudioClip mix(const vocalscreen::AudioClip& a, const vocalscreen::AudioClip& b) {
  vocalscreen::AudioClip c = a;
  for (std::size_t i = 0; i < c.samples.size() && i < b.samples.size(); ++i) c.samples[i] += b.samples[i];
  return c;
}

struct GoldenClip {
  std::string name;
  vocalscreen::AudioClip clip;
};

// Ten short clips covering tones, chirps, noise and silence. The first is the
// full-length 4 s tone; the rest are 0.25 s to keep the O(N^2) oracle cheap.
inline std::vector<GoldenClip> golden_clips() {
  const double s = 0.25;
  return {
      {"tone 440 Hz, 4 s", tone(440.0, 0.5, 4.0)},
      {"tone 1 kHz", tone(1000.0, 0.8, s)},
      {"quiet tone 3.1 kHz", tone(3100.0, 0.01, s, 16000, 0.7)},
      {"chirp 100 Hz -> 4 kHz", chirp(100.0, 4000.0, 0.6, s)},
      {"chirp 7 kHz -> 200 Hz", chirp(7000.0, 200.0, 0.3, s)},
      {"white noise", noise(0.5, s, 11)},
      {"faint noise", noise(1e-4, s, 12)},
      {"silence", silence(s)},
      {"tone + noise", mix(tone(220.0, 0.4, s), noise(0.05, s, 13))},
      {"two tones", mix(tone(500.0, 0.3, s), tone(2500.0, 0.3, s))},
  };
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("vocalscreen-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace testing
