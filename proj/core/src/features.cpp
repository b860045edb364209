#include "sffkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "sffkit/error.hpp"
#include "sffkit/transforms.hpp"

namespace sffkit {

const char* to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::mfcc: return "mfcc";
    case FeatureKind::sffcc: return "sffcc";
    default: return "mfcc-sff";
  }
}

FeatureKind feature_kind_from_string(const std::string& token) {
  if (token == "mfcc") return FeatureKind::mfcc;
  if (token == "sffcc") return FeatureKind::sffcc;
  if (token == "mfcc-sff" || token == "mfcc_sff") return FeatureKind::mfcc_sff;
  throw Error(errc::invalid_argument, "unknown feature kind '" + token + "'");
}

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void validate_feature_config(const FeatureConfig& config) {
  if (config.n_cepstra < 1) {
    throw Error(errc::invalid_argument, "features: n_cepstra must be >= 1");
  }
  if (!(config.log_floor > 0.0)) {
    throw Error(errc::invalid_argument, "features: log_floor must be positive");
  }
  if (config.delta_window < 1) {
    throw Error(errc::invalid_argument, "features: delta_window must be >= 1");
  }
  if (!(config.hop_s > 0.0)) {
    throw Error(errc::invalid_argument, "features: hop must be positive");
  }
}

std::vector<double> log_clamped(const std::vector<double>& v, double floor) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(std::max(v[i], floor));
  return out;
}

// Mel log-energies -> first n_cepstra DCT-II coefficients.
std::vector<double> truncated_dct(const std::vector<double>& log_energies, int n_cepstra) {
  std::vector<double> all = dct2(log_energies);
  all.resize(static_cast<std::size_t>(n_cepstra));
  return all;
}

std::vector<std::vector<double>> delta_of(const std::vector<std::vector<double>>& c, int m_max) {
  const std::size_t n_frames = c.size();
  const std::size_t width = c.front().size();
  double denom = 0.0;
  for (int m = 1; m <= m_max; ++m) denom += static_cast<double>(m) * m;
  denom *= 2.0;
  const auto clamp_idx = [&](long long t) {
    return static_cast<std::size_t>(std::clamp<long long>(t, 0, static_cast<long long>(n_frames) - 1));
  };
  std::vector<std::vector<double>> d(n_frames, std::vector<double>(width, 0.0));
  for (std::size_t t = 0; t < n_frames; ++t) {
    for (std::size_t j = 0; j < width; ++j) {
      double acc = 0.0;
      for (int m = 1; m <= m_max; ++m) {
        const auto lo = clamp_idx(static_cast<long long>(t) - m);
        const auto hi = clamp_idx(static_cast<long long>(t) + m);
        acc += m * (c[hi][j] - c[lo][j]);
      }
      d[t][j] = acc / denom;
    }
  }
  return d;
}

}  // namespace

std::vector<double> cepstrum_from_spectrum(const std::vector<double>& spectrum_frame,
                                           int n_cepstra, double log_floor) {
  if (spectrum_frame.empty()) throw Error(errc::empty_input, "cepstrum_from_spectrum: empty frame");
  if (n_cepstra < 1 || static_cast<std::size_t>(n_cepstra) > spectrum_frame.size()) {
    throw Error(errc::invalid_argument,
                "cepstrum_from_spectrum: n_cepstra must be in [1, frame length]");
  }
  if (!(log_floor > 0.0)) {
    throw Error(errc::invalid_argument, "cepstrum_from_spectrum: log_floor must be positive");
  }
  const std::size_t k = spectrum_frame.size();
  const std::vector<double> lv = log_clamped(spectrum_frame, log_floor);

  // The grid has no DC bin, so the even-symmetric completion over one full
  // period is {v1..vK, vK..v1}; its inverse FFT is real up to rounding.
  const std::size_t n = next_pow2(2 * k);
  std::vector<cdouble> ext(n, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < k; ++i) {
    ext[i] = cdouble{lv[i], 0.0};
    ext[2 * k - 1 - i] = cdouble{lv[i], 0.0};
  }
  const std::vector<cdouble> ceps = ifft(ext);
  std::vector<double> out(static_cast<std::size_t>(n_cepstra));
  for (int i = 0; i < n_cepstra; ++i) out[static_cast<std::size_t>(i)] = ceps[static_cast<std::size_t>(i)].real();
  return out;
}

FeatureMatrix sffcc(const SignalBuffer& signal, const SffConfig& sff_config,
                    const FeatureConfig& config) {
  validate_feature_config(config);
  const Spectrogram frames = sff_envelope_frames(signal, sff_config, config.hop_s);
  const std::size_t n_channels = frames.frames.front().size();
  if (static_cast<std::size_t>(config.n_cepstra) > n_channels) {
    throw Error(errc::invalid_argument, "sffcc: n_cepstra exceeds channel count");
  }
  std::vector<std::vector<double>> statics;
  statics.reserve(frames.frames.size());
  for (const auto& frame : frames.frames) {
    statics.push_back(cepstrum_from_spectrum(frame, config.n_cepstra, config.log_floor));
  }
  FeatureMatrix out;
  out.frames = append_deltas(statics, config.delta_window);
  out.kind = FeatureKind::sffcc;
  out.hop_s = config.hop_s;
  return out;
}

FeatureMatrix mfcc_sff(const SignalBuffer& signal, const SffConfig& sff_config,
                       const FeatureConfig& config) {
  validate_feature_config(config);
  const int n_mel = config.resolved_mel_filters(FeatureKind::mfcc_sff);
  if (config.n_cepstra > n_mel) {
    throw Error(errc::invalid_argument, "mfcc_sff: n_cepstra exceeds mel filter count");
  }
  const Spectrogram frames = sff_envelope_frames(signal, sff_config, config.hop_s);
  const MelFilterbank bank =
      build_mel_filterbank(n_mel, sff_channel_frequencies(sff_config, signal.sample_rate_hz),
                           signal.sample_rate_hz, 0.0, signal.sample_rate_hz / 2.0);
  std::vector<std::vector<double>> statics;
  statics.reserve(frames.frames.size());
  std::vector<double> power(frames.frames.front().size());
  for (const auto& frame : frames.frames) {
    for (std::size_t b = 0; b < frame.size(); ++b) power[b] = frame[b] * frame[b];
    const std::vector<double> mel = apply_filterbank(bank, power);
    statics.push_back(truncated_dct(log_clamped(mel, config.log_floor), config.n_cepstra));
  }
  FeatureMatrix out;
  out.frames = append_deltas(statics, config.delta_window);
  out.kind = FeatureKind::mfcc_sff;
  out.hop_s = config.hop_s;
  return out;
}

FeatureMatrix mfcc_baseline(const SignalBuffer& signal, const FeatureConfig& config) {
  validate_feature_config(config);
  if (!(config.window_s > 0.0)) {
    throw Error(errc::invalid_argument, "mfcc_baseline: window must be positive");
  }
  const int n_mel = config.resolved_mel_filters(FeatureKind::mfcc);
  if (config.n_cepstra > n_mel) {
    throw Error(errc::invalid_argument, "mfcc_baseline: n_cepstra exceeds mel filter count");
  }
  const Spectrogram spec = stft_magnitude(signal, config.window_s, config.hop_s);
  const MelFilterbank bank =
      build_mel_filterbank(n_mel, static_cast<int>(spec.frames.front().size()),
                           signal.sample_rate_hz, 0.0, signal.sample_rate_hz / 2.0);
  std::vector<std::vector<double>> statics;
  statics.reserve(spec.frames.size());
  std::vector<double> power(spec.frames.front().size());
  for (const auto& frame : spec.frames) {
    for (std::size_t b = 0; b < frame.size(); ++b) power[b] = frame[b] * frame[b];
    const std::vector<double> mel = apply_filterbank(bank, power);
    statics.push_back(truncated_dct(log_clamped(mel, config.log_floor), config.n_cepstra));
  }
  FeatureMatrix out;
  out.frames = append_deltas(statics, config.delta_window);
  out.kind = FeatureKind::mfcc;
  out.hop_s = config.hop_s;
  return out;
}

std::vector<std::vector<double>> append_deltas(const std::vector<std::vector<double>>& statics,
                                               int delta_window) {
  if (statics.empty()) throw Error(errc::empty_input, "append_deltas: no frames");
  if (delta_window < 1) throw Error(errc::invalid_argument, "append_deltas: window must be >= 1");
  const std::size_t width = statics.front().size();
  for (const auto& row : statics) {
    if (row.size() != width) throw Error(errc::length_mismatch, "append_deltas: ragged rows");
  }
  const auto d = delta_of(statics, delta_window);
  const auto dd = delta_of(d, delta_window);
  std::vector<std::vector<double>> out(statics.size());
  for (std::size_t t = 0; t < statics.size(); ++t) {
    out[t].reserve(3 * width);
    out[t].insert(out[t].end(), statics[t].begin(), statics[t].end());
    out[t].insert(out[t].end(), d[t].begin(), d[t].end());
    out[t].insert(out[t].end(), dd[t].begin(), dd[t].end());
  }
  return out;
}

FeatureVector mean_pool(const FeatureMatrix& features) {
  if (features.frames.empty()) throw Error(errc::empty_input, "mean_pool: no frames");
  const std::size_t width = features.frames.front().size();
  FeatureVector out;
  out.kind = features.kind;
  out.values.assign(width, 0.0);
  for (const auto& row : features.frames) {
    if (row.size() != width) throw Error(errc::length_mismatch, "mean_pool: ragged rows");
    for (std::size_t j = 0; j < width; ++j) out.values[j] += row[j];
  }
  const double inv = 1.0 / static_cast<double>(features.frames.size());
  for (auto& v : out.values) v *= inv;
  return out;
}

}  // namespace sffkit
