#pragma once

#include <stdexcept>
#include <string>

namespace vocalscreen {

// Root of every failure the library reports. Each named failure mode gets its
// own type so callers (and tests) can match on the exact condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define VOCALSCREEN_DEFINE_ERROR(Name)    \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

// audio_io
VOCALSCREEN_DEFINE_ERROR(MalformedWav)
VOCALSCREEN_DEFINE_ERROR(UnsupportedFormat)
VOCALSCREEN_DEFINE_ERROR(IoFailure)

// dsp_features
VOCALSCREEN_DEFINE_ERROR(SegmentTooShort)
VOCALSCREEN_DEFINE_ERROR(FeatureTableError)

// dataset
VOCALSCREEN_DEFINE_ERROR(ManifestParseError)
VOCALSCREEN_DEFINE_ERROR(DuplicatePath)
VOCALSCREEN_DEFINE_ERROR(UnknownLabel)
VOCALSCREEN_DEFINE_ERROR(DegenerateSplit)

// model
VOCALSCREEN_DEFINE_ERROR(EmptyTrainingSet)
VOCALSCREEN_DEFINE_ERROR(TooFewSamples)
VOCALSCREEN_DEFINE_ERROR(EvenK)
VOCALSCREEN_DEFINE_ERROR(SchemaVersionMismatch)
VOCALSCREEN_DEFINE_ERROR(CorruptModelFile)

// evaluation
VOCALSCREEN_DEFINE_ERROR(LengthMismatch)
VOCALSCREEN_DEFINE_ERROR(EmptyInput)
VOCALSCREEN_DEFINE_ERROR(TooFewSamplesPerClass)
VOCALSCREEN_DEFINE_ERROR(GroupTooSmall)

// Violated parameter invariants (bad config values, not bad data).
VOCALSCREEN_DEFINE_ERROR(InvalidArgument)

#undef VOCALSCREEN_DEFINE_ERROR

}  // namespace vocalscreen
