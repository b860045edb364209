#pragma once

#include <optional>
#include <vector>

#include "sffkit/audio.hpp"
#include "sffkit/transforms.hpp"

namespace sffkit {

/// Single-frequency-filtering parameters. Each analysis channel k targets
/// frequency f_k = (k+1) * delta_f_hz; the signal is heterodyned by
/// exp(-j*2*pi*(fs/2 - f_k)*n/fs) and passed through the one-pole filter
/// H(z) = 1/(1 + r*z^-1), whose root at z = -r gives a gain of 1/(1-r) at
/// the shifted frequency. Larger r narrows the channel bandwidth.
struct SffConfig {
  double r = 0.99;
  double delta_f_hz = 31.25;
  /// Channel count override. Default: floor((fs/2)/delta_f_hz), which covers
  /// 0..Nyquist. Pinning a larger count extends the grid past Nyquist, where
  /// channels mirror; that is allowed for reproducing fixed-size layouts.
  std::optional<int> explicit_k;
};

/// Channel count for a sample rate: explicit_k if set, else
/// floor((fs/2)/delta_f_hz). Errors: errc::invalid_argument when the result
/// would be < 1 or when r is outside [0, 1).
int sff_channel_count(const SffConfig& config, int sample_rate_hz);

/// Channel center frequencies f_k = (k+1) * delta_f_hz, k = 0..K-1.
std::vector<double> sff_channel_frequencies(const SffConfig& config, int sample_rate_hz);

/// Full-rate decomposition: one envelope and phase value per input sample per
/// channel. envelope[n][k] = |y[n,k]| and phase[n][k] = atan2(Im y, Re y)
/// (0 when y is exactly zero), where y is the filtered heterodyned signal
/// with zero initial state.
struct SffDecomposition {
  std::vector<std::vector<double>> envelope;  // n_samples x K
  std::vector<std::vector<double>> phase;     // n_samples x K
  std::vector<double> frequencies_hz;         // K
  int sample_rate_hz = 0;
  SffConfig config;
};

/// Errors: errc::empty_input for an empty signal; errc::invalid_argument for
/// a bad config (see sff_channel_count) or delta_f_hz > fs/2.
SffDecomposition sff_analyze(const SignalBuffer& signal, const SffConfig& config);

/// Envelope rows at the given times (seconds). Each time maps to sample index
/// round(t * fs), which must land inside the signal
/// (errc::invalid_argument otherwise). hop_s in the result is the spacing of
/// the first two times, or 1/fs for a single time.
Spectrogram sff_spectrum_at(const SffDecomposition& decomposition,
                            const std::vector<double>& times_s);

/// Envelope frames at a uniform hop without materializing the full-rate
/// decomposition: the per-channel recursion runs over every sample but only
/// rows at sample indices round(j * hop_s * fs), j = 0, 1, ..., are kept.
/// Identical arithmetic to sff_analyze, so kept rows match it exactly.
Spectrogram sff_envelope_frames(const SignalBuffer& signal, const SffConfig& config,
                                double hop_s);

}  // namespace sffkit
