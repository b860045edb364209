#include "sffkit/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include "sffkit/error.hpp"

namespace sffkit {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 transform; sign -1 is the forward direction.
// Twiddles are evaluated directly per index so no rounding accumulates
// across butterfly stages.
void transform_pow2(std::vector<cdouble>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cdouble> twiddle(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    twiddle[j] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cdouble u = a[start + j];
        const cdouble v = a[start + j + len / 2] * twiddle[j * stride];
        a[start + j] = u + v;
        a[start + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

std::vector<cdouble> fft(const std::vector<cdouble>& x, std::size_t n) {
  if (x.empty()) throw Error(errc::empty_input, "fft: empty input");
  if (!is_pow2(n)) {
    throw Error(errc::invalid_argument, "fft: size must be a power of two, got " + std::to_string(n));
  }
  std::vector<cdouble> a(x);
  a.resize(n, cdouble{0.0, 0.0});
  transform_pow2(a, -1);
  return a;
}

std::vector<cdouble> ifft(const std::vector<cdouble>& X) {
  if (X.empty()) throw Error(errc::empty_input, "ifft: empty input");
  if (!is_pow2(X.size())) {
    throw Error(errc::invalid_argument,
                "ifft: size must be a power of two, got " + std::to_string(X.size()));
  }
  std::vector<cdouble> a(X);
  transform_pow2(a, +1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
  return a;
}

std::vector<double> dct2(const std::vector<double>& x) {
  if (x.empty()) throw Error(errc::empty_input, "dct2: empty input");
  const std::size_t m = x.size();
  // cos(pi*k*(2j+1)/(2M)) has period 4M in the integer argument k*(2j+1);
  // reducing mod 4M keeps every evaluation at a small, exact angle.
  std::vector<double> table(4 * m);
  for (std::size_t t = 0; t < 4 * m; ++t) {
    table[t] = std::cos(kPi * static_cast<double>(t) / (2.0 * static_cast<double>(m)));
  }
  const double s0 = std::sqrt(1.0 / static_cast<double>(m));
  const double sk = std::sqrt(2.0 / static_cast<double>(m));
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += x[j] * table[(k * (2 * j + 1)) % (4 * m)];
    }
    out[k] = (k == 0 ? s0 : sk) * acc;
  }
  return out;
}

std::vector<double> hamming(std::size_t n) {
  if (n == 0) throw Error(errc::empty_input, "hamming: zero-length window");
  if (n == 1) return {1.0};
  std::vector<double> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    w[m] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(m) / static_cast<double>(n - 1));
  }
  return w;
}

Spectrogram stft_magnitude(const SignalBuffer& signal, double window_s, double hop_s) {
  if (signal.samples.empty()) throw Error(errc::empty_input, "stft_magnitude: empty signal");
  if (signal.sample_rate_hz <= 0) {
    throw Error(errc::invalid_argument, "stft_magnitude: sample rate must be positive");
  }
  if (!(window_s > 0.0) || !(hop_s > 0.0)) {
    throw Error(errc::invalid_argument, "stft_magnitude: window and hop must be positive");
  }
  const auto fs = static_cast<double>(signal.sample_rate_hz);
  const auto win = static_cast<std::size_t>(std::lround(window_s * fs));
  const auto hop = static_cast<std::size_t>(std::lround(hop_s * fs));
  if (win == 0 || hop == 0) {
    throw Error(errc::invalid_argument, "stft_magnitude: window or hop rounds to zero samples");
  }
  const std::size_t n_fft = next_pow2(win);
  const std::size_t n_bins = n_fft / 2 + 1;
  const std::vector<double> window = hamming(win);
  const std::size_t len = signal.samples.size();

  std::vector<std::size_t> starts;
  if (len < win) {
    starts.push_back(0);  // single zero-padded frame
  } else {
    const std::size_t n_full = (len - win) / hop + 1;
    for (std::size_t j = 0; j < n_full; ++j) starts.push_back(j * hop);
    // One zero-padded tail frame when at least a hop's worth of samples sits
    // past the last full frame start's successor.
    const std::size_t next = n_full * hop;
    if (len > next && len - next >= hop) starts.push_back(next);
  }

  Spectrogram out;
  out.frames.reserve(starts.size());
  std::vector<cdouble> buf(n_fft);
  for (const std::size_t start : starts) {
    std::fill(buf.begin(), buf.end(), cdouble{0.0, 0.0});
    const std::size_t take = std::min(win, len > start ? len - start : 0);
    for (std::size_t i = 0; i < take; ++i) {
      buf[i] = cdouble{signal.samples[start + i] * window[i], 0.0};
    }
    transform_pow2(buf, -1);
    std::vector<double> mag(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) mag[b] = std::abs(buf[b]);
    out.frames.push_back(std::move(mag));
  }
  out.bin_spacing_hz = fs / static_cast<double>(n_fft);
  out.bin_start_hz = 0.0;
  out.hop_s = hop_s;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.origin = SpectrogramOrigin::stft;
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank build_mel_filterbank(int n_filters, int fft_bins, int sample_rate_hz,
                                   double f_min, double f_max) {
  if (fft_bins < 3) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: need at least 3 bins");
  }
  if (sample_rate_hz <= 0) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: sample rate must be positive");
  }
  const double nyquist = sample_rate_hz / 2.0;
  std::vector<double> grid(static_cast<std::size_t>(fft_bins));
  for (int b = 0; b < fft_bins; ++b) {
    grid[static_cast<std::size_t>(b)] = nyquist * static_cast<double>(b) / static_cast<double>(fft_bins - 1);
  }
  return build_mel_filterbank(n_filters, grid, sample_rate_hz, f_min, f_max);
}

MelFilterbank build_mel_filterbank(int n_filters, const std::vector<double>& bin_frequencies_hz,
                                   int sample_rate_hz, double f_min, double f_max) {
  if (n_filters < 1) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: n_filters must be >= 1");
  }
  if (sample_rate_hz <= 0) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: sample rate must be positive");
  }
  const std::size_t n_bins = bin_frequencies_hz.size();
  if (n_bins < 3) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: need at least 3 bins");
  }
  for (std::size_t b = 1; b < n_bins; ++b) {
    if (!(bin_frequencies_hz[b] > bin_frequencies_hz[b - 1])) {
      throw Error(errc::invalid_argument,
                  "build_mel_filterbank: bin frequencies must strictly increase");
    }
  }
  const double nyquist = sample_rate_hz / 2.0;
  if (f_max > nyquist + 1e-9) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: f_max exceeds Nyquist");
  }
  if (!(f_min >= 0.0) || !(f_max > f_min)) {
    throw Error(errc::invalid_argument, "build_mel_filterbank: need 0 <= f_min < f_max");
  }

  // Filter edges: n_filters + 2 points uniform in mel, snapped to the
  // nearest grid bin. A snap collision would stack two filters on one
  // center, so collided edges get pushed up one bin; running off the end of
  // the grid means the resolution cannot carry this many filters.
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  const int n_edges = n_filters + 2;
  std::vector<std::size_t> edge(static_cast<std::size_t>(n_edges));
  for (int i = 0; i < n_edges; ++i) {
    const double hz = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                             static_cast<double>(n_edges - 1));
    const auto it = std::lower_bound(bin_frequencies_hz.begin(), bin_frequencies_hz.end(), hz);
    std::size_t idx = static_cast<std::size_t>(it - bin_frequencies_hz.begin());
    if (idx == n_bins) {
      idx = n_bins - 1;
    } else if (idx > 0 && hz - bin_frequencies_hz[idx - 1] <= bin_frequencies_hz[idx] - hz) {
      idx -= 1;
    }
    edge[static_cast<std::size_t>(i)] = idx;
  }
  for (int i = 1; i < n_edges; ++i) {
    auto& e = edge[static_cast<std::size_t>(i)];
    const auto prev = edge[static_cast<std::size_t>(i - 1)];
    if (e <= prev) e = prev + 1;
    if (e >= n_bins) {
      const int filter_idx = std::min(i, n_filters);
      throw Error(errc::filterbank_degenerate,
                  "build_mel_filterbank: filter " + std::to_string(filter_idx) + " of " +
                      std::to_string(n_filters) + " has no bin to sit on; fewer filters or more bins needed");
    }
  }

  MelFilterbank bank;
  bank.n_filters = n_filters;
  bank.fft_bins = static_cast<int>(n_bins);
  bank.sample_rate_hz = sample_rate_hz;
  bank.weights.assign(static_cast<std::size_t>(n_filters), std::vector<double>(n_bins, 0.0));
  bank.center_frequencies_hz.resize(static_cast<std::size_t>(n_filters));
  for (int f = 0; f < n_filters; ++f) {
    const std::size_t b0 = edge[static_cast<std::size_t>(f)];
    const std::size_t b1 = edge[static_cast<std::size_t>(f + 1)];
    const std::size_t b2 = edge[static_cast<std::size_t>(f + 2)];
    const double v0 = bin_frequencies_hz[b0];
    const double v1 = bin_frequencies_hz[b1];
    const double v2 = bin_frequencies_hz[b2];
    auto& row = bank.weights[static_cast<std::size_t>(f)];
    for (std::size_t b = b0 + 1; b <= b1; ++b) {
      row[b] = (bin_frequencies_hz[b] - v0) / (v1 - v0);
    }
    for (std::size_t b = b1 + 1; b < b2; ++b) {
      row[b] = (v2 - bin_frequencies_hz[b]) / (v2 - v1);
    }
    bank.center_frequencies_hz[static_cast<std::size_t>(f)] = v1;
  }
  return bank;
}

std::vector<double> apply_filterbank(const MelFilterbank& bank,
                                     const std::vector<double>& power_spectrum) {
  if (power_spectrum.size() != static_cast<std::size_t>(bank.fft_bins)) {
    throw Error(errc::length_mismatch,
                "apply_filterbank: spectrum has " + std::to_string(power_spectrum.size()) +
                    " bins, filterbank expects " + std::to_string(bank.fft_bins));
  }
  std::vector<double> out(static_cast<std::size_t>(bank.n_filters), 0.0);
  for (int f = 0; f < bank.n_filters; ++f) {
    const auto& row = bank.weights[static_cast<std::size_t>(f)];
    double acc = 0.0;
    for (std::size_t b = 0; b < row.size(); ++b) acc += row[b] * power_spectrum[b];
    out[static_cast<std::size_t>(f)] = acc;
  }
  return out;
}

}  // namespace sffkit
