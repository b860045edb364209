#include "sffkit/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "sffkit/error.hpp"

namespace sffkit {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double decode_sample(const unsigned char* p, std::uint16_t format, std::uint16_t bits) {
  if (format == kFormatIeeeFloat) {
    const std::uint32_t u = read_u32(p);
    float f;
    std::memcpy(&f, &u, sizeof f);
    if (!std::isfinite(f)) return 0.0;
    return std::clamp(static_cast<double>(f), -1.0, 1.0);
  }
  switch (bits) {
    case 8:
      // 8-bit PCM is unsigned with midpoint 128.
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: {
      const auto v = static_cast<std::int16_t>(read_u16(p));
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default: {  // 32
      const auto v = static_cast<std::int32_t>(read_u32(p));
      return v / 2147483648.0;
    }
  }
}

}  // namespace

SignalBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::file_not_found, "load_wav: cannot open " + path.string());
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
  const auto fail = [&](const std::string& why) -> Error {
    return Error(errc::malformed_wav, "load_wav: " + path.string() + ": " + why);
  };

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_offset = 0, data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) throw fail("truncated chunk");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw fail("fmt chunk too small");
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        // Actual format sits in the first two bytes of the SubFormat GUID.
        if (chunk_size < 40) throw fail("extensible fmt chunk too small");
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_offset = body;
      data_size = chunk_size;
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw fail("missing fmt chunk");
  if (!have_data) throw fail("missing data chunk");
  if (channels == 0) throw fail("zero channels");
  if (sample_rate == 0) throw fail("zero sample rate");

  const bool supported = (format == kFormatPcm && (bits == 8 || bits == 16 || bits == 24 || bits == 32)) ||
                         (format == kFormatIeeeFloat && bits == 32);
  if (!supported) {
    throw Error(errc::unsupported_wav_encoding,
                "load_wav: " + path.string() + ": unsupported encoding (format tag " +
                    std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }

  const std::size_t bytes_per_sample = bits / 8u;
  const std::size_t frame_size = bytes_per_sample * channels;
  const std::size_t n_frames = data_size / frame_size;
  if (n_frames == 0) throw fail("data chunk holds no complete frame");

  SignalBuffer out;
  out.sample_rate_hz = static_cast<int>(sample_rate);
  out.samples.resize(n_frames);
  const unsigned char* data = bytes.data() + data_offset;
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      acc += decode_sample(data + i * frame_size + ch * bytes_per_sample, format, bits);
    }
    out.samples[i] = acc / channels;
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const SignalBuffer& signal) {
  if (signal.samples.empty()) throw Error(errc::empty_input, "write_wav: empty signal");
  if (signal.sample_rate_hz <= 0) {
    throw Error(errc::invalid_argument, "write_wav: sample rate must be positive");
  }
  const std::uint32_t data_size = static_cast<std::uint32_t>(signal.samples.size() * 2);
  std::vector<unsigned char> bytes;
  bytes.reserve(44 + data_size);
  const auto push_u16 = [&](std::uint16_t v) {
    bytes.push_back(static_cast<unsigned char>(v & 0xFF));
    bytes.push_back(static_cast<unsigned char>(v >> 8));
  };
  const auto push_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  };
  const auto push_tag = [&](const char* tag) {
    bytes.insert(bytes.end(), tag, tag + 4);
  };

  push_tag("RIFF");
  push_u32(36 + data_size);
  push_tag("WAVE");
  push_tag("fmt ");
  push_u32(16);
  push_u16(kFormatPcm);
  push_u16(1);  // mono
  push_u32(static_cast<std::uint32_t>(signal.sample_rate_hz));
  push_u32(static_cast<std::uint32_t>(signal.sample_rate_hz) * 2);
  push_u16(2);   // block align
  push_u16(16);  // bits
  push_tag("data");
  push_u32(data_size);
  for (const double s : signal.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const long q = std::lround(clamped * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp<long>(q, -32768, 32767));
    push_u16(static_cast<std::uint16_t>(v));
  }

  std::ofstream outf(path, std::ios::binary | std::ios::trunc);
  if (!outf) throw Error(errc::io_failure, "write_wav: cannot open " + path.string());
  outf.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!outf) throw Error(errc::io_failure, "write_wav: write failed for " + path.string());
}

}  // namespace sffkit
