#pragma once

// Independent reference solver for the soft-margin linear SVM dual:
//
//   min_a  1/2 a^T Q a - e^T a   s.t.  0 <= a <= C,  y^T a = 0,
//
// by projected gradient with a fixed 1/L step. The projection onto the
// box-hyperplane intersection is computed by bisection on the hyperplane
// multiplier. Slow and simple on purpose; shares no code with the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct PgSvmResult {
  std::vector<double> alpha;
  double dual_objective = 0.0;  // e^T a - 1/2 a^T Q a (the maximization form)
};

namespace pgdetail {

inline double clip(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Projects v onto {0 <= a <= C, y^T a = 0} via a(lambda)_i = clip(v_i - lambda*y_i).
inline std::vector<double> project(const std::vector<double>& v, const std::vector<int>& y,
                                   double c) {
  const std::size_t n = v.size();
  const auto residual = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += y[i] * clip(v[i] - lambda * y[i], 0.0, c);
    }
    return s;
  };
  double lo = 0.0, hi = 0.0;
  for (const double vi : v) {
    lo = std::min(lo, -std::abs(vi) - c - 1.0);
    hi = std::max(hi, std::abs(vi) + c + 1.0);
  }
  // residual is non-increasing in lambda; bisect to the root.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = clip(v[i] - lambda * y[i], 0.0, c);
  return out;
}

}  // namespace pgdetail

inline PgSvmResult pg_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          double c, int max_iter = 200000) {
  const std::size_t n = x.size();
  const std::size_t dim = x.front().size();

  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += x[i][d] * x[j][d];
      q[i][j] = q[j][i] = y[i] * y[j] * dot;
    }
  }

  // Lipschitz constant: largest eigenvalue of Q by power iteration.
  std::vector<double> v(n, 1.0), qv(n);
  double lipschitz = 1.0;
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += q[i][j] * v[j];
      qv[i] = s;
    }
    double norm = 0.0;
    for (const double t : qv) norm += t * t;
    norm = std::sqrt(norm);
    if (norm < 1e-300) break;
    lipschitz = norm;
    for (std::size_t i = 0; i < n; ++i) v[i] = qv[i] / norm;
  }
  const double step = 1.0 / (1.1 * lipschitz + 1e-12);

  std::vector<double> alpha(n, 0.0), grad(n), trial(n);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = -1.0;
      for (std::size_t j = 0; j < n; ++j) s += q[i][j] * alpha[j];
      grad[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) trial[i] = alpha[i] - step * grad[i];
    trial = pgdetail::project(trial, y, c);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(trial[i] - alpha[i]));
    alpha.swap(trial);
    if (moved < 1e-12 * (1.0 + c)) break;
  }

  PgSvmResult result;
  result.alpha = alpha;
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < n; ++j) quad += alpha[i] * q[i][j] * alpha[j];
  }
  result.dual_objective = lin - 0.5 * quad;
  return result;
}

}  // namespace oracle
