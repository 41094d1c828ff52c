#include "vocalscreen/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "vocalscreen/error.hpp"
#include "vocalscreen/parallel.hpp"
#include "vocalscreen/random.hpp"

namespace vocalscreen {

namespace {

constexpr int kHarmonics = 9;  // f0 plus 8 overtones
constexpr double kVoiceLevel = 0.5;
constexpr double kPeakLimit = 0.9;
constexpr double kRampSeconds = 0.005;

std::string participant_id(Label label, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth-%s-%02zu", label == Label::Depression ? "dep" : "ctl", index + 1);
  return buf;
}

void check_profile(const ClassProfile& p, const char* name) {
  const bool ok = p.f0_mean_hz > 0.0 && p.f0_sd_hz >= 0.0 && p.tilt_db_per_octave_sd >= 0.0 &&
                  p.noise_floor_db_sd >= 0.0 && p.pause_density_per_min >= 0.0 && p.noise_floor_db_mean < 0.0;
  if (!ok) throw InvalidArgument(std::string("invalid ") + name + " profile");
}

bool same_profile(const ClassProfile& a, const ClassProfile& b) {
  return a.f0_mean_hz == b.f0_mean_hz && a.f0_sd_hz == b.f0_sd_hz &&
         a.tilt_db_per_octave_mean == b.tilt_db_per_octave_mean &&
         a.tilt_db_per_octave_sd == b.tilt_db_per_octave_sd && a.noise_floor_db_mean == b.noise_floor_db_mean &&
         a.noise_floor_db_sd == b.noise_floor_db_sd && a.pause_density_per_min == b.pause_density_per_min;
}

nlohmann::json profile_json(const ClassProfile& p) {
  return nlohmann::json{{"f0_mean_hz", p.f0_mean_hz},
                        {"f0_sd_hz", p.f0_sd_hz},
                        {"tilt_db_per_octave_mean", p.tilt_db_per_octave_mean},
                        {"tilt_db_per_octave_sd", p.tilt_db_per_octave_sd},
                        {"noise_floor_db_mean", p.noise_floor_db_mean},
                        {"noise_floor_db_sd", p.noise_floor_db_sd},
                        {"pause_density_per_min", p.pause_density_per_min}};
}

}  // namespace

ClassProfile CohortSpec::default_depression_profile() {
  ClassProfile p;
  p.f0_mean_hz = 125.0;
  p.f0_sd_hz = 15.0;
  p.tilt_db_per_octave_mean = -12.0;
  p.tilt_db_per_octave_sd = 1.5;
  p.noise_floor_db_mean = -46.0;
  p.noise_floor_db_sd = 2.0;
  p.pause_density_per_min = 12.0;
  return p;
}

ClassProfile CohortSpec::default_control_profile() {
  ClassProfile p;
  p.f0_mean_hz = 170.0;
  p.f0_sd_hz = 15.0;
  p.tilt_db_per_octave_mean = -8.0;
  p.tilt_db_per_octave_sd = 1.5;
  p.noise_floor_db_mean = -50.0;
  p.noise_floor_db_sd = 2.0;
  p.pause_density_per_min = 8.0;
  return p;
}

void CohortSpec::validate() const {
  if (speakers_per_class < 1) throw InvalidArgument("speakers_per_class must be at least 1");
  if (!(seconds_per_speaker > 0.0)) throw InvalidArgument("seconds_per_speaker must be positive");
  if (sample_rate <= 0) throw InvalidArgument("sample_rate must be positive");
  check_profile(depression, "depression");
  check_profile(control, "control");
  if (same_profile(depression, control)) throw InvalidArgument("class profiles must differ in at least one parameter");
}

SpeakerRender render_speaker(const CohortSpec& spec, Label label, std::size_t index) {
  const ClassProfile& profile = label == Label::Depression ? spec.depression : spec.control;
  const std::uint64_t stream = (label == Label::Depression ? 0 : spec.speakers_per_class) + index;
  SplitMix64 rng(derive_seed(spec.seed, stream));

  SpeakerRender r;
  r.participant = participant_id(label, index);
  r.label = label;
  r.f0_hz = std::max(60.0, rng.normal(profile.f0_mean_hz, profile.f0_sd_hz));
  r.tilt_db_per_octave = rng.normal(profile.tilt_db_per_octave_mean, profile.tilt_db_per_octave_sd);
  r.noise_floor_db = rng.normal(profile.noise_floor_db_mean, profile.noise_floor_db_sd);

  // Intonation and syllable-rate modulation parameters.
  const double intonation_rate = 0.2 + 0.4 * rng.uniform();
  const double intonation_phase = 2.0 * std::numbers::pi * rng.uniform();
  const double jitter_rate = 2.0 + 3.0 * rng.uniform();
  const double jitter_phase = 2.0 * std::numbers::pi * rng.uniform();
  const double syllable_rate = 3.0 + 2.0 * rng.uniform();
  const double syllable_phase = 2.0 * std::numbers::pi * rng.uniform();

  const double sr = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.seconds_per_speaker * sr));

  // Pause onsets form a Poisson process; durations are uniform in [0.3, 0.8) s.
  if (profile.pause_density_per_min > 0.0) {
    const double rate = profile.pause_density_per_min / 60.0;
    for (double t = rng.exponential(rate); t < spec.seconds_per_speaker; t += rng.exponential(rate)) {
      const double length = 0.3 + 0.5 * rng.uniform();
      const auto begin = static_cast<std::size_t>(t * sr);
      const auto end = std::min(n, static_cast<std::size_t>((t + length) * sr));
      if (!r.pauses.empty() && begin <= r.pauses.back().end) {
        r.pauses.back().end = std::max(r.pauses.back().end, end);
      } else {
        r.pauses.push_back({begin, end});
      }
    }
  }

  std::array<double, kHarmonics> amplitude{};
  double amplitude_sum = 0.0;
  for (int h = 0; h < kHarmonics; ++h) {
    amplitude[h] = std::pow(10.0, r.tilt_db_per_octave * std::log2(h + 1.0) / 20.0);
    amplitude_sum += amplitude[h];
  }
  const double noise_rms = std::pow(10.0, r.noise_floor_db / 20.0);
  const auto ramp = static_cast<std::size_t>(kRampSeconds * sr);

  r.clip.sample_rate = spec.sample_rate;
  r.clip.samples.resize(n);
  double phase = 0.0;
  std::size_t pause_idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double f = r.f0_hz * (1.0 + 0.05 * std::sin(2.0 * std::numbers::pi * intonation_rate * t + intonation_phase) +
                                0.01 * std::sin(2.0 * std::numbers::pi * jitter_rate * t + jitter_phase));
    phase = std::fmod(phase + 2.0 * std::numbers::pi * f / sr, 2.0 * std::numbers::pi);

    // sin(h * phase) by the Chebyshev recurrence; harmonics at or above 0.45 * sr are dropped.
    const double s1 = std::sin(phase);
    const double c1 = std::cos(phase);
    double prev = 0.0;
    double cur = s1;
    double voice = 0.0;
    for (int h = 0; h < kHarmonics; ++h) {
      if ((h + 1) * f < 0.45 * sr) voice += amplitude[h] * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    voice /= amplitude_sum;

    const double envelope = 0.7 + 0.3 * std::sin(2.0 * std::numbers::pi * syllable_rate * t + syllable_phase);

    double gate = 1.0;
    while (pause_idx < r.pauses.size() && r.pauses[pause_idx].end + ramp <= i) ++pause_idx;
    if (pause_idx < r.pauses.size()) {
      const auto& p = r.pauses[pause_idx];
      if (i >= p.begin && i < p.end) {
        gate = 0.0;
      } else if (ramp > 0 && i + ramp > p.begin && i < p.begin) {
        gate = static_cast<double>(p.begin - i) / static_cast<double>(ramp);
      } else if (ramp > 0 && i >= p.end && i < p.end + ramp) {
        gate = static_cast<double>(i - p.end) / static_cast<double>(ramp);
      }
    }

    r.clip.samples[i] = kVoiceLevel * envelope * voice * gate + noise_rms * rng.normal();
  }

  double peak = 0.0;
  for (double s : r.clip.samples) peak = std::max(peak, std::abs(s));
  if (peak > kPeakLimit) {
    const double scale = kPeakLimit / peak;
    for (double& s : r.clip.samples) s *= scale;
  }
  return r;
}

DatasetManifest generate_cohort(const CohortSpec& spec, const std::filesystem::path& out_dir, std::size_t jobs) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir.string() + ": " + ec.message());

  const std::size_t total = 2 * spec.speakers_per_class;
  std::vector<nlohmann::json> speaker_info(total);
  std::vector<ManifestRow> rows(total);
  parallel_for(total, jobs, [&](std::size_t s) {
    const Label label = s < spec.speakers_per_class ? Label::Depression : Label::Control;
    const std::size_t index = s % spec.speakers_per_class;
    const SpeakerRender r = render_speaker(spec, label, index);
    const std::string file = r.participant + ".wav";
    write_file_bytes(out_dir / file, encode_wav(r.clip, SampleFormat::Pcm16, kSyntheticNotice));
    rows[s] = {file, label, r.participant};
    speaker_info[s] = {{"participant", r.participant},
                       {"label", to_string(label)},
                       {"f0_hz", r.f0_hz},
                       {"tilt_db_per_octave", r.tilt_db_per_octave},
                       {"noise_floor_db", r.noise_floor_db},
                       {"pauses", r.pauses.size()}};
  });

  DatasetManifest manifest(std::move(rows));
  save_manifest(out_dir / "manifest.csv", manifest);

  nlohmann::json info = to_json(spec);
  info["speakers"] = speaker_info;
  std::ofstream out(out_dir / "cohort.json", std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + (out_dir / "cohort.json").string());
  out << info.dump(2) << '\n';
  return manifest;
}

nlohmann::json to_json(const CohortSpec& spec) {
  return nlohmann::json{{"notice", kSyntheticNotice},
                        {"speakers_per_class", spec.speakers_per_class},
                        {"seconds_per_speaker", spec.seconds_per_speaker},
                        {"sample_rate", spec.sample_rate},
                        {"seed", spec.seed},
                        {"profiles", {{"depression", profile_json(spec.depression)},
                                      {"control", profile_json(spec.control)}}}};
}

}  // namespace vocalscreen
