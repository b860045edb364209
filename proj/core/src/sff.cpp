#include "sffkit/sff.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "sffkit/error.hpp"

namespace sffkit {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_config(const SffConfig& config, int sample_rate_hz) {
  if (sample_rate_hz <= 0) {
    throw Error(errc::invalid_argument, "sff: sample rate must be positive");
  }
  if (!(config.r >= 0.0) || !(config.r < 1.0)) {
    throw Error(errc::invalid_argument, "sff: pole radius r must be in [0, 1)");
  }
  if (!(config.delta_f_hz > 0.0)) {
    throw Error(errc::invalid_argument, "sff: channel spacing must be positive");
  }
  if (config.delta_f_hz > sample_rate_hz / 2.0) {
    throw Error(errc::invalid_argument, "sff: channel spacing exceeds Nyquist");
  }
}

// Heterodyne-and-filter recursion for one channel: the oscillator
// exp(-j*2*pi*fbar*n/fs) advances by one complex multiply per sample and
// y[n] = -r*y[n-1] + s[n]*osc[n] starts from zero state. The sink sees every
// sample in order, so callers can either store all of them or a subset with
// identical arithmetic.
template <typename Sink>
void scan_channel(const std::vector<double>& samples, double fs, double r, double fbar,
                  Sink&& sink) {
  const std::complex<double> step = std::polar(1.0, -2.0 * kPi * fbar / fs);
  std::complex<double> osc{1.0, 0.0};
  double yr = 0.0;
  double yi = 0.0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double s = samples[n];
    yr = -r * yr + s * osc.real();
    yi = -r * yi + s * osc.imag();
    sink(n, yr, yi);
    osc *= step;
  }
}

double envelope_of(double yr, double yi) { return std::sqrt(yr * yr + yi * yi); }

double phase_of(double yr, double yi) {
  if (yr == 0.0 && yi == 0.0) return 0.0;
  return std::atan2(yi, yr);
}

}  // namespace

int sff_channel_count(const SffConfig& config, int sample_rate_hz) {
  validate_config(config, sample_rate_hz);
  if (config.explicit_k) {
    if (*config.explicit_k < 1) {
      throw Error(errc::invalid_argument, "sff: explicit channel count must be >= 1");
    }
    return *config.explicit_k;
  }
  // The small epsilon rescues counts like 255.9999997 produced by an inexact
  // division; spacings that divide the half-band exactly are unaffected.
  const int k = static_cast<int>(std::floor(sample_rate_hz / 2.0 / config.delta_f_hz + 1e-9));
  if (k < 1) throw Error(errc::invalid_argument, "sff: no channel fits below Nyquist");
  return k;
}

std::vector<double> sff_channel_frequencies(const SffConfig& config, int sample_rate_hz) {
  const int k = sff_channel_count(config, sample_rate_hz);
  std::vector<double> freqs(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    freqs[static_cast<std::size_t>(i)] = (i + 1) * config.delta_f_hz;
  }
  return freqs;
}

SffDecomposition sff_analyze(const SignalBuffer& signal, const SffConfig& config) {
  if (signal.samples.empty()) throw Error(errc::empty_input, "sff_analyze: empty signal");
  const int n_channels = sff_channel_count(config, signal.sample_rate_hz);
  const auto fs = static_cast<double>(signal.sample_rate_hz);
  const std::size_t n = signal.samples.size();

  SffDecomposition out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.config = config;
  out.frequencies_hz = sff_channel_frequencies(config, signal.sample_rate_hz);
  out.envelope.assign(n, std::vector<double>(static_cast<std::size_t>(n_channels), 0.0));
  out.phase.assign(n, std::vector<double>(static_cast<std::size_t>(n_channels), 0.0));

  for (int k = 0; k < n_channels; ++k) {
    const double fbar = fs / 2.0 - out.frequencies_hz[static_cast<std::size_t>(k)];
    scan_channel(signal.samples, fs, config.r, fbar, [&](std::size_t i, double yr, double yi) {
      out.envelope[i][static_cast<std::size_t>(k)] = envelope_of(yr, yi);
      out.phase[i][static_cast<std::size_t>(k)] = phase_of(yr, yi);
    });
  }
  return out;
}

Spectrogram sff_spectrum_at(const SffDecomposition& decomposition,
                            const std::vector<double>& times_s) {
  if (times_s.empty()) throw Error(errc::empty_input, "sff_spectrum_at: no times given");
  if (decomposition.envelope.empty()) {
    throw Error(errc::empty_input, "sff_spectrum_at: empty decomposition");
  }
  const auto fs = static_cast<double>(decomposition.sample_rate_hz);
  const auto n = static_cast<long long>(decomposition.envelope.size());

  Spectrogram out;
  out.frames.reserve(times_s.size());
  for (std::size_t j = 0; j < times_s.size(); ++j) {
    if (j > 0 && !(times_s[j] > times_s[j - 1])) {
      throw Error(errc::invalid_argument, "sff_spectrum_at: times must strictly increase");
    }
    const long long idx = std::llround(times_s[j] * fs);
    if (idx < 0 || idx >= n) {
      throw Error(errc::invalid_argument,
                  "sff_spectrum_at: time " + std::to_string(times_s[j]) + "s falls outside the signal");
    }
    out.frames.push_back(decomposition.envelope[static_cast<std::size_t>(idx)]);
  }
  out.bin_spacing_hz = decomposition.config.delta_f_hz;
  out.bin_start_hz = decomposition.config.delta_f_hz;
  out.hop_s = times_s.size() >= 2 ? times_s[1] - times_s[0] : 1.0 / fs;
  out.sample_rate_hz = decomposition.sample_rate_hz;
  out.origin = SpectrogramOrigin::sff;
  return out;
}

Spectrogram sff_envelope_frames(const SignalBuffer& signal, const SffConfig& config,
                                double hop_s) {
  if (signal.samples.empty()) throw Error(errc::empty_input, "sff_envelope_frames: empty signal");
  const int n_channels = sff_channel_count(config, signal.sample_rate_hz);
  const auto fs = static_cast<double>(signal.sample_rate_hz);
  if (!(hop_s > 0.0) || hop_s * fs < 1.0) {
    throw Error(errc::invalid_argument, "sff_envelope_frames: hop must be at least one sample");
  }

  const auto n = static_cast<long long>(signal.samples.size());
  std::vector<std::size_t> rows;
  for (long long j = 0;; ++j) {
    const long long idx = std::llround(static_cast<double>(j) * hop_s * fs);
    if (idx >= n) break;
    rows.push_back(static_cast<std::size_t>(idx));
  }

  const std::vector<double> freqs = sff_channel_frequencies(config, signal.sample_rate_hz);
  Spectrogram out;
  out.frames.assign(rows.size(), std::vector<double>(static_cast<std::size_t>(n_channels), 0.0));
  for (int k = 0; k < n_channels; ++k) {
    const double fbar = fs / 2.0 - freqs[static_cast<std::size_t>(k)];
    std::size_t next = 0;
    scan_channel(signal.samples, fs, config.r, fbar, [&](std::size_t i, double yr, double yi) {
      if (next < rows.size() && i == rows[next]) {
        out.frames[next][static_cast<std::size_t>(k)] = envelope_of(yr, yi);
        ++next;
      }
    });
  }
  out.bin_spacing_hz = config.delta_f_hz;
  out.bin_start_hz = config.delta_f_hz;
  out.hop_s = hop_s;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.origin = SpectrogramOrigin::sff;
  return out;
}

}  // namespace sffkit
