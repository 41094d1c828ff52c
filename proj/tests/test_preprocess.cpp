#include <doctest.h>

#include "support/support.hpp"
#include "vocalscreen/error.hpp"
#include "vocalscreen/preprocess.hpp"

using namespace vocalscreen;

namespace {

// Literal frame-RMS rule: which samples are covered by a frame whose RMS is at
// least ratio * loudest frame RMS.
std::vector<bool> voiced_mask(const std::vector<double>& x, std::size_t frame, std::size_t hop, double ratio) {
  std::vector<double> rms;
  for (std::size_t s = 0; s + frame <= x.size(); s += hop) {
    double e = 0.0;
    for (std::size_t i = 0; i < frame; ++i) e += x[s + i] * x[s + i];
    rms.push_back(std::sqrt(e / frame));
  }
  double peak = 0.0;
  for (double r : rms) peak = std::max(peak, r);
  std::vector<bool> mask(x.size(), false);
  if (peak == 0.0) return mask;
  for (std::size_t f = 0; f < rms.size(); ++f) {
    if (rms[f] >= ratio * peak) {
      for (std::size_t i = 0; i < frame; ++i) mask[f * hop + i] = true;
    }
  }
  return mask;
}

}  // namespace

TEST_CASE("remove_silence: 1 s of zeros then 1 s of tone") {
  const auto tone = testing::tone(440.0, 0.5, 1.0);
  const auto clip = testing::concat(testing::silence(1.0), tone);
  const auto out = remove_silence(clip, {});
  CHECK(std::abs(out.duration_seconds() - 1.0) <= 0.05);
  REQUIRE(out.samples.size() >= tone.samples.size());
  // The whole tone survives, at the end; anything before it is leading silence.
  const std::size_t lead = out.samples.size() - tone.samples.size();
  CHECK(std::equal(tone.samples.begin(), tone.samples.end(), out.samples.begin() + lead));
  for (std::size_t i = 0; i < lead; ++i) CHECK(out.samples[i] == 0.0);
  // Hand-applied rule: frames of 800, hop 400; the frame starting at 15600
  // holds 400 tone samples and passes, the one at 15200 holds none.
  CHECK(lead == 400);
}

TEST_CASE("remove_silence: all zeros gives an empty clip") {
  CHECK(remove_silence(testing::silence(2.0), {}).empty());
  CHECK(voiced_ranges(testing::silence(0.3), {}).empty());
}

TEST_CASE("remove_silence: constant amplitude is kept up to the trailing partial frame") {
  AudioClip c;
  c.samples.assign(16000 + 123, 0.3);
  const auto out = remove_silence(c, {});
  CHECK(out.samples.size() <= c.samples.size());
  CHECK(c.samples.size() - out.samples.size() < 800);
  CHECK(out.samples.size() == 16000);  // last full frame ends at 15200 + 800
}

TEST_CASE("remove_silence: clip shorter than a frame is one frame") {
  AudioClip c{{0.1, -0.2, 0.3}, 16000};
  CHECK(remove_silence(c, {}).samples == c.samples);
}

TEST_CASE("SilenceParams validation") {
  CHECK_NOTHROW(SilenceParams{}.validate());
  CHECK_THROWS_AS((SilenceParams{0.05, 0.06, 0.1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((SilenceParams{0.05, 0.0, 0.1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((SilenceParams{0.05, 0.025, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((SilenceParams{0.05, 0.025, 0.0}.validate()), InvalidArgument);
}

TEST_CASE("property: remove_silence matches the literal frame mask and keeps order") {
  testing::for_all(40, 10, [](testing::Gen& g, std::size_t) {
    // Bursts of noise separated by gaps of silence or faint noise.
    AudioClip c;
    const int bursts = g.integer(1, 5);
    for (int b = 0; b < bursts; ++b) {
      const auto gap = static_cast<std::size_t>(g.integer(0, 6000));
      const double faint = g.coin() ? 0.0 : 1e-4;
      for (std::size_t i = 0; i < gap; ++i) c.samples.push_back(faint * g.uniform(-1, 1));
      const auto len = static_cast<std::size_t>(g.integer(100, 5000));
      const double amp = g.uniform(0.05, 0.9);
      for (std::size_t i = 0; i < len; ++i) c.samples.push_back(amp * g.uniform(-1, 1));
    }
    if (c.samples.size() < 800) return;

    const auto mask = voiced_mask(c.samples, 800, 400, 0.1);
    std::vector<double> expected;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) expected.push_back(c.samples[i]);
    }
    const auto out = remove_silence(c, {});
    CHECK(out.samples == expected);
    CHECK(out.samples.size() <= c.samples.size());

    const auto ranges = voiced_ranges(c, {});
    for (std::size_t r = 0; r < ranges.size(); ++r) {
      CHECK(ranges[r].begin < ranges[r].end);
      CHECK(ranges[r].end <= c.samples.size());
      if (r > 0) CHECK(ranges[r - 1].end < ranges[r].begin);
    }
  });
}

TEST_CASE("segment examples") {
  CHECK(segment(testing::silence(10.0), 4.0).segments.size() == 2);
  const auto exact = segment(testing::silence(4.0), 4.0);
  REQUIRE(exact.segments.size() == 1);
  CHECK(exact.segments[0].samples.size() == 64000);
  CHECK(segment(testing::silence(3.9), 4.0).segments.empty());
  CHECK(segment(AudioClip{}, 4.0).segments.empty());
  CHECK_THROWS_AS(segment(testing::silence(1.0), 0.0), InvalidArgument);
}

TEST_CASE("property: segment count and prefix reconstruction") {
  testing::for_all(40, 11, [](testing::Gen& g, std::size_t) {
    AudioClip c;
    c.sample_rate = g.coin() ? 16000 : 8000;
    c.samples = g.vec(g.index(200000));
    const double seconds = g.uniform(0.1, 5.0);
    const auto set = segment(c, seconds, "src");
    const std::size_t len = set.samples_per_segment();
    CHECK(len == static_cast<std::size_t>(std::llround(seconds * c.sample_rate)));
    CHECK(set.segments.size() == c.samples.size() / len);
    CHECK(set.source_id == "src");
    std::vector<double> joined;
    for (const auto& s : set.segments) {
      CHECK(s.samples.size() == len);
      CHECK(s.sample_rate == c.sample_rate);
      joined.insert(joined.end(), s.samples.begin(), s.samples.end());
    }
    CHECK(std::equal(joined.begin(), joined.end(), c.samples.begin()));
  });
}
