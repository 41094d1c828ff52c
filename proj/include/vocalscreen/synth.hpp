#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vocalscreen/audio_io.hpp"
#include "vocalscreen/dataset.hpp"
#include "vocalscreen/preprocess.hpp"

namespace vocalscreen {

inline constexpr const char* kSyntheticNotice =
    "SYNTHETIC NON-CLINICAL DATA: generated signal, not recordings of real people";

// Distribution of per-speaker voice parameters for one class. Each speaker
// draws f0, tilt and noise level from normals with these means and SDs.
struct ClassProfile {
  double f0_mean_hz = 150.0;
  double f0_sd_hz = 15.0;
  double tilt_db_per_octave_mean = -9.0;
  double tilt_db_per_octave_sd = 1.0;
  double noise_floor_db_mean = -48.0;  // dBFS of the white-noise RMS
  double noise_floor_db_sd = 2.0;
  double pause_density_per_min = 8.0;  // Poisson rate of inserted silent pauses
};

struct CohortSpec {
  std::size_t speakers_per_class = 12;
  double seconds_per_speaker = 120.0;
  int sample_rate = kCanonicalSampleRate;
  ClassProfile depression = default_depression_profile();
  ClassProfile control = default_control_profile();
  std::uint64_t seed = 42;

  static ClassProfile default_depression_profile();
  static ClassProfile default_control_profile();

  // Throws InvalidArgument.
  void validate() const;
};

// Voice parameters actually drawn for one speaker, plus where pauses landed.
struct SpeakerRender {
  std::string participant;
  Label label = Label::Control;
  double f0_hz = 0.0;
  double tilt_db_per_octave = 0.0;
  double noise_floor_db = 0.0;
  std::vector<SampleRange> pauses;  // merged, in time order
  AudioClip clip;
};

// Harmonic stack (f0 plus 8 harmonics, tilted) with slow pitch jitter and a
// syllable-rate envelope, silenced over Poisson-placed pauses, plus white
// noise throughout. Peak amplitude never exceeds 0.9.
SpeakerRender render_speaker(const CohortSpec& spec, Label label, std::size_t index);

// Writes <participant>.wav for every speaker and manifest.csv into out_dir;
// manifest paths are relative to out_dir. Depression speakers come first.
// Throws IoFailure.
DatasetManifest generate_cohort(const CohortSpec& spec, const std::filesystem::path& out_dir,
                                std::size_t jobs = 1);

nlohmann::json to_json(const CohortSpec& spec);

}  // namespace vocalscreen
