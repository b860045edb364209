#pragma once

// Reference transforms computed by direct summation, deliberately slow and
// obvious. Twiddle angles are reduced by exact integer arithmetic before the
// trig call so the references stay accurate at the largest sizes tested.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double angle = 2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      acc += x[m] * std::complex<double>(std::cos(angle), -std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double angle = 2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      acc += x[m] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

// Orthonormal DCT-II, direct evaluation; angle index reduced mod 4M.
inline std::vector<double> dct2(const std::vector<double>& x) {
  const std::size_t m = x.size();
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t idx = (k * (2 * j + 1)) % (4 * m);
      acc += x[j] * std::cos(kPi * static_cast<double>(idx) / (2.0 * static_cast<double>(m)));
    }
    const double scale =
        k == 0 ? std::sqrt(1.0 / static_cast<double>(m)) : std::sqrt(2.0 / static_cast<double>(m));
    out[k] = scale * acc;
  }
  return out;
}

// Inverse of the orthonormal DCT-II (i.e. DCT-III with matching scaling).
inline std::vector<double> idct2(const std::vector<double>& c) {
  const std::size_t m = c.size();
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = std::sqrt(1.0 / static_cast<double>(m)) * c[0];
    for (std::size_t k = 1; k < m; ++k) {
      const std::size_t idx = (k * (2 * j + 1)) % (4 * m);
      acc += std::sqrt(2.0 / static_cast<double>(m)) * c[k] *
             std::cos(kPi * static_cast<double>(idx) / (2.0 * static_cast<double>(m)));
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace oracle
