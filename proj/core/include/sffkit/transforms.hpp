#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "sffkit/audio.hpp"

namespace sffkit {

using cdouble = std::complex<double>;

/// Radix-2 FFT. The input is zero-padded or truncated to length n, which must
/// be a power of two (errc::invalid_argument otherwise; errc::empty_input for
/// an empty x).
std::vector<cdouble> fft(const std::vector<cdouble>& x, std::size_t n);

/// Inverse FFT with 1/n scaling. X.size() must be a power of two.
std::vector<cdouble> ifft(const std::vector<cdouble>& X);

/// Orthonormal DCT-II:
///   C[k] = s(k) * sum_m x[m] * cos(pi*k*(2m+1)/(2M)),
///   s(0) = sqrt(1/M), s(k>0) = sqrt(2/M).
/// Orthonormality means the transpose inverts it exactly.
std::vector<double> dct2(const std::vector<double>& x);

/// Hamming window, w[m] = 0.54 - 0.46*cos(2*pi*m/(n-1)). n = 1 gives {1.0}.
std::vector<double> hamming(std::size_t n);

enum class SpectrogramOrigin { stft, sff };

/// Frame-by-frame spectral magnitudes. frames[t][b] is the magnitude of bin b
/// in frame t; bin b sits at frequency bin_start_hz + b * bin_spacing_hz
/// (bin_start_hz is 0 for STFT output and one channel spacing for
/// single-frequency-filtering output, whose grid has no DC channel).
struct Spectrogram {
  std::vector<std::vector<double>> frames;
  double bin_spacing_hz = 0.0;
  double bin_start_hz = 0.0;
  double hop_s = 0.0;
  int sample_rate_hz = 0;
  SpectrogramOrigin origin = SpectrogramOrigin::stft;
};

/// Short-time magnitude spectrum with a Hamming window. The FFT size is the
/// smallest power of two >= the window length and n_fft/2+1 one-sided bins
/// are kept. Frames start at t = 0 and advance by the hop; after the last
/// full window, one zero-padded frame is emitted iff at least one hop of
/// samples remains. A signal shorter than one window yields a single
/// zero-padded frame.
Spectrogram stft_magnitude(const SignalBuffer& signal, double window_s, double hop_s);

/// Triangular mel filterbank. weights[f][b] is filter f's weight on spectrum
/// bin b; every row rises to a single peak of 1 and falls again (no area
/// normalization), and center frequencies strictly increase.
struct MelFilterbank {
  int n_filters = 0;
  int fft_bins = 0;
  std::vector<std::vector<double>> weights;
  std::vector<double> center_frequencies_hz;
  int sample_rate_hz = 0;
};

double hz_to_mel(double hz);   // 2595 * log10(1 + hz/700)
double mel_to_hz(double mel);

/// Builds a filterbank over a uniform spectrum grid of fft_bins bins spanning
/// 0..Nyquist (the one-sided STFT layout). Filter edges are spaced uniformly
/// in mel between f_min and f_max, snapped to the nearest bin; when snapping
/// collides, edges are pushed up one bin to keep centers strictly increasing.
///
/// Errors: errc::invalid_argument (n_filters < 1, fft_bins < 3, f_max above
/// Nyquist or not above f_min); errc::filterbank_degenerate, naming the first
/// offending filter, when n_filters is too large for the bin resolution.
MelFilterbank build_mel_filterbank(int n_filters, int fft_bins, int sample_rate_hz,
                                   double f_min, double f_max);

/// Same construction over an explicit ascending grid of bin center
/// frequencies (used for filtering-based spectra, whose grid starts one
/// channel spacing above DC).
MelFilterbank build_mel_filterbank(int n_filters, const std::vector<double>& bin_frequencies_hz,
                                   int sample_rate_hz, double f_min, double f_max);

/// Filterbank energies for one spectrum frame: out[f] = sum_b w[f][b] * power[b].
/// Errors: errc::length_mismatch if power.size() != fft_bins.
std::vector<double> apply_filterbank(const MelFilterbank& bank,
                                     const std::vector<double>& power_spectrum);

}  // namespace sffkit
