#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sffkit/audio.hpp"
#include "sffkit/manifest.hpp"
#include "sffkit/sff.hpp"

namespace sffkit {

enum class FeatureKind : int { mfcc = 0, sffcc = 1, mfcc_sff = 2 };

const char* to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& token);

struct FeatureConfig {
  int n_cepstra = 13;  // includes the 0th coefficient
  /// Mel filter count for the mel-based paths. Unset picks the path default:
  /// 80 for mfcc_sff, 40 for the baseline mfcc.
  std::optional<int> n_mel_filters;
  double hop_s = 0.010;
  double window_s = 0.030;  // STFT path only
  int delta_window = 2;
  double log_floor = 1e-10;  // spectra are clamped here before log

  int resolved_mel_filters(FeatureKind kind) const {
    return n_mel_filters.value_or(kind == FeatureKind::mfcc ? 40 : 80);
  }
};

/// Per-frame feature vectors, one row per analysis frame. After
/// append_deltas each row is [static, delta, delta-delta], 3x the static
/// width (39 for the default 13 cepstra).
struct FeatureMatrix {
  std::vector<std::vector<double>> frames;
  FeatureKind kind = FeatureKind::mfcc;
  double hop_s = 0.0;
};

struct FeatureVector {
  std::vector<double> values;
  FeatureKind kind = FeatureKind::mfcc;
};

/// Cepstrum of one magnitude-spectrum frame over a grid with no DC bin: the
/// frame is clamped to log_floor, logged, reflected into the even-symmetric
/// sequence {v1..vK, vK..v1}, inverse-FFT'd (zero-padded to a power of two)
/// and the real part's first n_cepstra terms are kept. For 2K a power of two
/// a flat frame of value c gives exactly {log c, 0, 0, ...}.
/// Errors: errc::empty_input; errc::invalid_argument if n_cepstra < 1 or
/// exceeds the frame length.
std::vector<double> cepstrum_from_spectrum(const std::vector<double>& spectrum_frame,
                                           int n_cepstra, double log_floor);

/// Cepstral coefficients of the single-frequency-filtering envelope, sampled
/// every hop_s, with deltas appended.
FeatureMatrix sffcc(const SignalBuffer& signal, const SffConfig& sff_config,
                    const FeatureConfig& config);

/// Mel cepstra of the squared single-frequency-filtering envelope: mel
/// filterbank on the channel grid, log, orthonormal DCT-II, first n_cepstra
/// coefficients, deltas appended.
FeatureMatrix mfcc_sff(const SignalBuffer& signal, const SffConfig& sff_config,
                       const FeatureConfig& config);

/// Conventional mel cepstra from the short-time power spectrum (Hamming
/// window, window_s/hop_s framing), deltas appended.
FeatureMatrix mfcc_baseline(const SignalBuffer& signal, const FeatureConfig& config);

/// Appends delta and delta-delta rows of regression window M:
///   d[t] = sum_{m=1..M} m*(c[t+m] - c[t-m]) / (2*sum m^2),
/// with edge frames replicated. Output rows are 3x the input width.
/// Errors: errc::empty_input; errc::invalid_argument for M < 1;
/// errc::length_mismatch for ragged input rows.
std::vector<std::vector<double>> append_deltas(const std::vector<std::vector<double>>& statics,
                                               int delta_window);

/// Mean over frames, one value per coordinate. Errors: errc::empty_input.
FeatureVector mean_pool(const FeatureMatrix& features);

/// One extracted utterance, as persisted to feature CSV files.
struct FeatureRow {
  std::string utterance_id;
  std::string speaker_id;
  ClassLabel class_label = ClassLabel::healthy;
  Task task = Task::vowel;
  FeatureKind kind = FeatureKind::mfcc;
  std::vector<double> values;
};

}  // namespace sffkit
