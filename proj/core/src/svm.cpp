#include "sffkit/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "sffkit/error.hpp"

namespace sffkit {

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& x) {
  if (x.empty()) throw Error(errc::empty_input, "Standardizer::fit: no samples");
  const std::size_t dim = x.front().size();
  for (const auto& row : x) {
    if (row.size() != dim) throw Error(errc::length_mismatch, "Standardizer::fit: ragged rows");
  }
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.stddev.assign(dim, 0.0);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (const auto& row : x) {
    for (std::size_t j = 0; j < dim; ++j) s.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < dim; ++j) s.mean[j] *= inv_n;
  for (const auto& row : x) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = row[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt(s.stddev[j] * inv_n);
    // A constant coordinate carries no information; stddev 0 marks it and
    // apply() pins it to 0 instead of dividing by a tiny floor.
    s.stddev[j] = sd < 1e-12 ? 0.0 : sd;
  }
  return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& v) const {
  if (v.size() != mean.size()) {
    throw Error(errc::length_mismatch, "Standardizer::apply: dimension mismatch");
  }
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = stddev[j] > 0.0 ? (v[j] - mean[j]) / stddev[j] : 0.0;
  }
  return out;
}

std::vector<std::vector<double>> Standardizer::apply_all(
    const std::vector<std::vector<double>>& x) const {
  std::vector<std::vector<double>> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(apply(row));
  return out;
}

double BinarySvmModel::decision(const std::vector<double>& x) const {
  if (x.size() != weights.size()) {
    throw Error(errc::length_mismatch, "BinarySvmModel::decision: dimension mismatch");
  }
  double acc = bias;
  for (std::size_t j = 0; j < x.size(); ++j) acc += weights[j] * x[j];
  return acc;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc;
}

}  // namespace

// Pairwise coordinate ascent on the soft-margin dual
//   max  sum(alpha) - 0.5 * sum_ij alpha_i alpha_j y_i y_j <x_i, x_j>
//   s.t. 0 <= alpha <= C,  sum(alpha_i y_i) = 0.
// Each step picks the maximally KKT-violating pair, moves it along the
// equality-feasible direction to the clipped unconstrained optimum, and
// maintains the dual gradient incrementally.
BinarySvmModel train_binary_svm(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, double c, double tol,
                                SvmTrainInfo* info) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(errc::empty_input, "train_binary_svm: no samples");
  if (y.size() != n) throw Error(errc::length_mismatch, "train_binary_svm: label count mismatch");
  if (!(c > 0.0)) throw Error(errc::invalid_argument, "train_binary_svm: C must be positive");
  if (!(tol > 0.0)) throw Error(errc::invalid_argument, "train_binary_svm: tol must be positive");
  const std::size_t dim = x.front().size();
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != dim) throw Error(errc::length_mismatch, "train_binary_svm: ragged rows");
    if (y[i] == 1) {
      has_pos = true;
    } else if (y[i] == -1) {
      has_neg = true;
    } else {
      throw Error(errc::invalid_argument, "train_binary_svm: labels must be +1/-1");
    }
  }
  if (!has_pos || !has_neg) {
    throw Error(errc::invalid_argument, "train_binary_svm: both classes must be present");
  }

  std::vector<std::vector<double>> gram(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      gram[i][j] = gram[j][i] = dot(x[i], x[j]);
    }
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the min form, Q*alpha - 1
  const long max_iter = std::max<long>(500000, static_cast<long>(200 * n));
  long iter = 0;
  double violation = std::numeric_limits<double>::infinity();

  while (iter < max_iter) {
    // candidate bias from each point: b_t = y_t - w.x_t = -y_t * grad_t
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::size_t up_idx = n;
    std::size_t low_idx = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double bt = -y[t] * grad[t];
      const bool in_up = (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
      const bool in_low = (y[t] == -1 && alpha[t] < c) || (y[t] == 1 && alpha[t] > 0.0);
      if (in_up && bt > up_best) {
        up_best = bt;
        up_idx = t;
      }
      if (in_low && bt < low_best) {
        low_best = bt;
        low_idx = t;
      }
    }
    violation = up_best - low_best;
    if (!(violation > tol)) break;

    const std::size_t i = up_idx;
    const std::size_t j = low_idx;
    const double eta = std::max(gram[i][i] + gram[j][j] - 2.0 * gram[i][j], 1e-12);
    double step = violation / eta;
    // clip so alpha_i + y_i*step and alpha_j - y_j*step stay inside [0, C]
    const double room_i = (y[i] == 1) ? c - alpha[i] : alpha[i];
    const double room_j = (y[j] == 1) ? alpha[j] : c - alpha[j];
    step = std::min(step, std::min(room_i, room_j));
    alpha[i] = std::clamp(alpha[i] + y[i] * step, 0.0, c);
    alpha[j] = std::clamp(alpha[j] - y[j] * step, 0.0, c);
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += step * y[t] * (gram[t][i] - gram[t][j]);
    }
    ++iter;
  }

  if (violation > tol) {
    throw SolverNotConverged("train_binary_svm: iteration cap hit with KKT violation " +
                                 std::to_string(violation),
                             violation);
  }

  BinarySvmModel model;
  model.c_value = c;
  model.weights.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0.0) continue;
    const double coeff = alpha[i] * y[i];
    for (std::size_t j = 0; j < dim; ++j) model.weights[j] += coeff * x[i][j];
  }

  const double bound_eps = 1e-12 * std::max(1.0, c);
  double bias_acc = 0.0;
  int n_free = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > bound_eps && alpha[i] < c - bound_eps) {
      bias_acc += y[i] - dot(model.weights, x[i]);
      ++n_free;
    }
  }
  if (n_free > 0) {
    model.bias = bias_acc / n_free;
  } else {
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double bt = y[t] - dot(model.weights, x[t]);
      const bool in_up = (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
      const bool in_low = (y[t] == -1 && alpha[t] < c) || (y[t] == 1 && alpha[t] > 0.0);
      if (in_up) up_best = std::max(up_best, bt);
      if (in_low) low_best = std::min(low_best, bt);
    }
    model.bias = (up_best + low_best) / 2.0;
  }

  if (info) {
    info->alpha = alpha;
    info->kkt_violation = violation;
    info->iterations = static_cast<int>(iter);
    double quad = 0.0;  // alpha'Q alpha = sum_i alpha_i * (grad_i + 1)
    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      quad += alpha[i] * (grad[i] + 1.0);
      lin += alpha[i];
    }
    info->dual_objective = lin - 0.5 * quad;
  }
  return model;
}

int OvoModel::predict(const std::vector<double>& x) const {
  const std::vector<double> z = standardizer.apply(x);
  std::map<int, int> votes;
  std::map<int, double> evidence;  // sum |decision| of duels the class won
  for (const int cls : classes) {
    votes[cls] = 0;
    evidence[cls] = 0.0;
  }
  for (const auto& m : models) {
    const double d = m.decision(z);
    const int winner = d > 0.0 ? m.class_pair.first : m.class_pair.second;
    votes[winner] += 1;
    evidence[winner] += std::abs(d);
  }
  int best = classes.front();
  for (const int cls : classes) {
    if (votes[cls] > votes[best] ||
        (votes[cls] == votes[best] && evidence[cls] > evidence[best])) {
      best = cls;
    }
    // equal votes and evidence keeps the lower class index (scan order)
  }
  return best;
}

std::vector<double> OvoModel::decision_values(const std::vector<double>& x) const {
  const std::vector<double> z = standardizer.apply(x);
  std::vector<double> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(m.decision(z));
  return out;
}

OvoModel train_ovo(const Dataset& train, double c, double tol) {
  if (train.x.empty()) throw Error(errc::empty_input, "train_ovo: no samples");
  if (train.y.size() != train.x.size()) {
    throw Error(errc::length_mismatch, "train_ovo: label count mismatch");
  }
  std::set<int> class_set(train.y.begin(), train.y.end());
  if (class_set.size() < 2) {
    throw Error(errc::invalid_argument, "train_ovo: need at least two classes");
  }

  OvoModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.c_value = c;
  model.standardizer = Standardizer::fit(train.x);
  const auto z = model.standardizer.apply_all(train.x);

  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      const int cls_a = model.classes[a];
      const int cls_b = model.classes[b];
      std::vector<std::vector<double>> xs;
      std::vector<int> ys;
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (train.y[i] == cls_a) {
          xs.push_back(z[i]);
          ys.push_back(1);
        } else if (train.y[i] == cls_b) {
          xs.push_back(z[i]);
          ys.push_back(-1);
        }
      }
      BinarySvmModel m = train_binary_svm(xs, ys, c, tol);
      m.class_pair = {cls_a, cls_b};
      model.models.push_back(std::move(m));
    }
  }
  return model;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int e = -4; e <= 4; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

GridSearchResult grid_search_c(const Dataset& train, const std::vector<double>& c_grid,
                               double tol) {
  if (train.x.empty()) throw Error(errc::empty_input, "grid_search_c: no samples");
  if (train.speaker_ids.size() != train.x.size()) {
    throw Error(errc::length_mismatch, "grid_search_c: speaker attribution missing");
  }
  if (c_grid.empty()) throw Error(errc::invalid_argument, "grid_search_c: empty grid");
  for (const double c : c_grid) {
    if (!(c > 0.0)) throw Error(errc::invalid_argument, "grid_search_c: C values must be positive");
  }

  std::set<std::string> speaker_set(train.speaker_ids.begin(), train.speaker_ids.end());
  if (speaker_set.size() < 2) {
    throw Error(errc::insufficient_speakers, "grid_search_c: need at least two speakers");
  }
  const std::vector<std::string> speakers(speaker_set.begin(), speaker_set.end());
  const std::set<int> full_classes(train.y.begin(), train.y.end());
  int max_label = 0;
  for (const int label : train.y) max_label = std::max(max_label, label);

  GridSearchResult result;

  // A fold is viable if dropping its speaker keeps every class represented;
  // viability does not depend on C, so report skipped folds once.
  std::vector<std::string> viable;
  for (const auto& s : speakers) {
    std::set<int> inner_classes;
    for (std::size_t i = 0; i < train.y.size(); ++i) {
      if (train.speaker_ids[i] != s) inner_classes.insert(train.y[i]);
    }
    if (inner_classes.size() == full_classes.size()) {
      viable.push_back(s);
    } else {
      result.warnings.push_back("inner fold holding out speaker '" + s +
                                "' would drop a class entirely; fold skipped");
    }
  }
  if (viable.empty()) {
    throw Error(errc::insufficient_speakers,
                "grid_search_c: every inner fold would drop a class");
  }

  double best_c = 0.0;
  double best_score = -1.0;
  for (const double c : c_grid) {
    std::vector<long long> correct(static_cast<std::size_t>(max_label) + 1, 0);
    std::vector<long long> total(static_cast<std::size_t>(max_label) + 1, 0);
    for (const auto& s : viable) {
      Dataset inner;
      std::vector<std::size_t> held;
      for (std::size_t i = 0; i < train.x.size(); ++i) {
        if (train.speaker_ids[i] == s) {
          held.push_back(i);
        } else {
          inner.x.push_back(train.x[i]);
          inner.y.push_back(train.y[i]);
          inner.speaker_ids.push_back(train.speaker_ids[i]);
        }
      }
      const OvoModel model = train_ovo(inner, c, tol);
      for (const std::size_t i : held) {
        const auto cls = static_cast<std::size_t>(train.y[i]);
        total[cls] += 1;
        if (model.predict(train.x[i]) == train.y[i]) correct[cls] += 1;
      }
    }
    double recall_sum = 0.0;
    int n_present = 0;
    for (std::size_t cls = 0; cls < total.size(); ++cls) {
      if (total[cls] > 0) {
        recall_sum += static_cast<double>(correct[cls]) / static_cast<double>(total[cls]);
        ++n_present;
      }
    }
    const double score = n_present > 0 ? recall_sum / n_present : 0.0;
    result.scores.emplace_back(c, score);
    if (score > best_score || (score == best_score && c < best_c)) {
      best_score = score;
      best_c = c;
    }
  }
  result.best_c = best_c;
  return result;
}

}  // namespace sffkit
