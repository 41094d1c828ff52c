#include "vocalscreen/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "vocalscreen/error.hpp"

namespace vocalscreen {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

  void require(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw MalformedWav(std::string("truncated ") + what);
    }
  }

  std::string tag() {
    require(4, "chunk id");
    std::string id(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return id;
  }

  std::uint16_t u16() {
    require(2, "header field");
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    require(4, "header field");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    require(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void skip(std::size_t n) {
    // A final odd-sized chunk may legitimately omit its pad byte.
    pos_ = std::min(bytes_.size(), pos_ + n);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct FormatChunk {
  std::uint16_t format_code = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

MultiChannelClip decode_wav(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  if (reader.tag() != "RIFF") throw MalformedWav("missing RIFF magic");
  reader.u32();  // RIFF size; writers disagree on it, chunk sizes are checked instead
  if (reader.tag() != "WAVE") throw MalformedWav("missing WAVE magic");

  FormatChunk fmt;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  while (reader.remaining() >= 8 && !(have_fmt && have_data)) {
    const std::string id = reader.tag();
    const std::uint32_t size = reader.u32();
    if (id == "fmt ") {
      if (size < 16) throw MalformedWav("fmt chunk too small");
      auto body = reader.take(size, "fmt chunk");
      ByteReader f(body);
      fmt.format_code = f.u16();
      fmt.channels = f.u16();
      fmt.sample_rate = f.u32();
      f.u32();  // byte rate
      fmt.block_align = f.u16();
      fmt.bits_per_sample = f.u16();
      if (fmt.format_code == 0xFFFE && size >= 40) {
        // WAVE_FORMAT_EXTENSIBLE: the real code is the first two bytes of the subformat GUID.
        f.skip(2 + 2 + 4);
        fmt.format_code = f.u16();
      }
      have_fmt = true;
    } else if (id == "data") {
      data = reader.take(size, "data chunk");
      have_data = true;
    } else {
      reader.skip(size);
    }
    if (size % 2 == 1) reader.skip(1);
  }

  if (!have_fmt) throw MalformedWav("missing fmt chunk");
  if (!have_data) throw MalformedWav("missing data chunk");

  SampleFormat sample_format;
  if (fmt.format_code == kFormatPcm && fmt.bits_per_sample == 16) {
    sample_format = SampleFormat::Pcm16;
  } else if (fmt.format_code == kFormatFloat && fmt.bits_per_sample == 32) {
    sample_format = SampleFormat::Float32;
  } else {
    throw UnsupportedFormat("unsupported WAV encoding: format code " +
                            std::to_string(fmt.format_code) + ", " +
                            std::to_string(fmt.bits_per_sample) + " bits");
  }
  if (fmt.channels < 1 || fmt.channels > 2) {
    throw UnsupportedFormat("unsupported channel count " + std::to_string(fmt.channels));
  }
  if (fmt.sample_rate == 0) throw MalformedWav("zero sample rate");

  const std::size_t bytes_per_sample = sample_format == SampleFormat::Pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  if (data.size() % frame_bytes != 0) throw MalformedWav("data chunk ends mid-frame");
  const std::size_t frames = data.size() / frame_bytes;

  MultiChannelClip out;
  out.sample_rate = static_cast<int>(fmt.sample_rate);
  out.channels.assign(fmt.channels, std::vector<double>(frames));
  const std::uint8_t* p = data.data();
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      double v;
      if (sample_format == SampleFormat::Pcm16) {
        const auto raw = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
        v = raw / 32768.0;
      } else {
        const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                   (static_cast<std::uint32_t>(p[2]) << 16) |
                                   (static_cast<std::uint32_t>(p[3]) << 24);
        const float f = std::bit_cast<float>(bits);
        v = std::isfinite(f) ? std::clamp(static_cast<double>(f), -1.0, 1.0) : 0.0;
      }
      out.channels[c][i] = v;
      p += bytes_per_sample;
    }
  }
  return out;
}

AudioClip to_mono(const MultiChannelClip& clip) {
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (clip.channels.empty()) return out;
  if (clip.channels.size() == 1) {
    out.samples = clip.channels.front();
    return out;
  }
  if (clip.channels.size() > 2) {
    throw UnsupportedFormat("to_mono accepts one or two channels");
  }
  const auto& left = clip.channels[0];
  const auto& right = clip.channels[1];
  out.samples.resize(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) out.samples[i] = 0.5 * (left[i] + right[i]);
  return out;
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw InvalidArgument("resample: target rate must be positive");
  if (clip.sample_rate <= 0) throw InvalidArgument("resample: source rate must be positive");
  if (clip.sample_rate == target_rate) return clip;

  const auto source = static_cast<std::uint64_t>(clip.sample_rate);
  const auto target = static_cast<std::uint64_t>(target_rate);
  const std::size_t n_in = clip.samples.size();
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_in) * static_cast<double>(target) / static_cast<double>(source)));

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);
  if (n_in == 0) return out;
  for (std::size_t j = 0; j < n_out; ++j) {
    // Source position j * source / target, split into integer and fractional parts exactly.
    const std::uint64_t scaled = j * source;
    const std::size_t idx = static_cast<std::size_t>(scaled / target);
    const double frac = static_cast<double>(scaled % target) / static_cast<double>(target);
    if (idx + 1 >= n_in) {
      out.samples[j] = clip.samples[n_in - 1];
    } else {
      out.samples[j] = clip.samples[idx] + frac * (clip.samples[idx + 1] - clip.samples[idx]);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip, SampleFormat format, const std::string& comment) {
  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(clip.samples.size() * block_align);

  std::vector<std::uint8_t> list_chunk;
  if (!comment.empty()) {
    std::string text = comment;
    text.push_back('\0');
    if (text.size() % 2 == 1) text.push_back('\0');
    put_tag(list_chunk, "LIST");
    put_u32(list_chunk, static_cast<std::uint32_t>(4 + 8 + text.size()));
    put_tag(list_chunk, "INFO");
    put_tag(list_chunk, "ICMT");
    put_u32(list_chunk, static_cast<std::uint32_t>(text.size()));
    list_chunk.insert(list_chunk.end(), text.begin(), text.end());
  }

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size + list_chunk.size());
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_size + list_chunk.size()));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);
  for (double s : clip.samples) {
    if (format == SampleFormat::Pcm16) {
      const long q = std::clamp(std::lround(s * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  out.insert(out.end(), list_chunk.begin(), list_chunk.end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("read error on " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoFailure("write error on " + path.string());
}

AudioClip load_clip(const std::filesystem::path& path, int target_rate) {
  const auto bytes = read_file_bytes(path);
  try {
    return resample(to_mono(decode_wav(bytes)), target_rate);
  } catch (const MalformedWav& e) {
    throw MalformedWav(path.string() + ": " + e.what());
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(path.string() + ": " + e.what());
  }
}

}  // namespace vocalscreen
