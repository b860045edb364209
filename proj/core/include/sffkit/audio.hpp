#pragma once

#include <filesystem>
#include <vector>

namespace sffkit {

/// Mono audio at a known sample rate. Samples are normalized to [-1, 1]:
/// integer PCM is divided by its full-scale value, float data is clamped.
struct SignalBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
};

/// Reads a RIFF/WAVE file. Accepts little-endian integer PCM at 8, 16, 24 or
/// 32 bits and IEEE float32, mono or multichannel; channels are averaged to
/// mono. Unknown chunks are skipped.
///
/// Errors: errc::file_not_found, errc::malformed_wav (bad or truncated RIFF
/// structure, empty data), errc::unsupported_wav_encoding (compressed
/// formats, unsupported bit depths).
SignalBuffer load_wav(const std::filesystem::path& path);

/// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] and rounded to the
/// nearest quantization level, so a write/load round trip is exact to within
/// half an LSB (2^-16, and 2^-15 at the clamped positive rail).
void write_wav(const std::filesystem::path& path, const SignalBuffer& signal);

}  // namespace sffkit
