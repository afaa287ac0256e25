#pragma once

// Shapley feature attribution for any real-valued predictor. The value of a
// feature subset S at a row x is the model output averaged over a background
// sample with the features outside S replaced by background values; exact
// attributions enumerate all 2^m subsets with the combinatorial Shapley
// weights, and a permutation-sampling estimator covers wider feature counts.

#include <functional>
#include <random>

#include "tabtext/curation.hpp"
#include "tabtext/metrics.hpp"

namespace tabtext {

// A fitted predictor reduced to a single real output per row (for
// classifiers: the positive-class probability or a chosen class margin).
using RealModel = std::function<double(const std::vector<double>&)>;

struct ShapResult {
  std::vector<FeatureScore> scores;  // mean |φ_j| over rows, one per feature
  Matrix per_row;                    // n × m signed φ_j(x) values
  double base_value = 0.0;           // model output with every feature masked
};

namespace detail {

// Model output with features outside `mask` replaced by each background row,
// averaged over the background sample.
inline double masked_value(const RealModel& f, const std::vector<double>& x,
                           const Matrix& background, uint64_t mask) {
  double acc = 0.0;
  std::vector<double> z(x.size());
  for (const auto& b : background) {
    for (size_t i = 0; i < x.size(); ++i) z[i] = (mask >> i) & 1 ? x[i] : b[i];
    acc += f(z);
  }
  return acc / static_cast<double>(background.size());
}

inline void check_shap_inputs(const Matrix& X, const Matrix& background) {
  if (X.empty()) fail("shapley: no rows given");
  if (background.empty()) fail("shapley: background sample is empty");
  size_t m = X[0].size();
  if (m == 0) fail("shapley: rows have no features");
  for (const auto& r : X)
    if (r.size() != m) fail("shapley: ragged row matrix");
  for (const auto& b : background)
    if (b.size() != m) fail("shapley: background width mismatch");
}

}  // namespace detail

// Exact Shapley values by full subset enumeration. Weight of a subset S not
// containing feature j is |S|!·(m−|S|−1)!/m! = 1/(m·C(m−1,|S|)).
inline ShapResult shapley_scores_exact(const RealModel& f, const Matrix& X,
                                       const Matrix& background,
                                       size_t max_features = 15) {
  detail::check_shap_inputs(X, background);
  const size_t m = X[0].size();
  if (m > max_features)
    fail("shapley: " + std::to_string(m) +
         " features exceeds the exact-enumeration limit of " +
         std::to_string(max_features) + "; use the sampling variant");

  std::vector<double> weight(m);  // indexed by |S|
  {
    double binom = 1.0;  // C(m-1, s), built incrementally
    for (size_t s = 0; s < m; ++s) {
      weight[s] = 1.0 / (static_cast<double>(m) * binom);
      binom = binom * static_cast<double>(m - 1 - s) / static_cast<double>(s + 1);
    }
  }

  ShapResult out;
  out.base_value = detail::masked_value(f, X[0], background, 0);  // x-independent
  std::vector<double> abs_sum(m, 0.0);
  const uint64_t n_masks = uint64_t{1} << m;
  std::vector<double> v(n_masks);

  for (const auto& x : X) {
    for (uint64_t mask = 0; mask < n_masks; ++mask)
      v[mask] = detail::masked_value(f, x, background, mask);
    std::vector<double> phi(m, 0.0);
    for (uint64_t mask = 0; mask < n_masks; ++mask) {
      size_t size = static_cast<size_t>(__builtin_popcountll(mask));
      for (size_t j = 0; j < m; ++j) {
        if ((mask >> j) & 1) continue;
        phi[j] += weight[size] * (v[mask | (uint64_t{1} << j)] - v[mask]);
      }
    }
    for (size_t j = 0; j < m; ++j) abs_sum[j] += std::abs(phi[j]);
    out.per_row.push_back(std::move(phi));
  }

  for (size_t j = 0; j < m; ++j)
    out.scores.push_back({"f" + std::to_string(j),
                          abs_sum[j] / static_cast<double>(X.size()), ScoreMethod::shap});
  return out;
}

// Unbiased permutation-sampling estimate: for each sampled feature order,
// each feature's marginal contribution is the value change when it joins the
// coalition of features preceding it.
inline ShapResult shapley_scores_sampled(const RealModel& f, const Matrix& X,
                                         const Matrix& background,
                                         size_t n_permutations, uint64_t seed) {
  detail::check_shap_inputs(X, background);
  if (n_permutations == 0) fail("shapley: need at least one permutation");
  const size_t m = X[0].size();
  if (m > 63) fail("shapley: more than 63 features is unsupported");

  std::mt19937_64 rng(seed);
  std::vector<size_t> order(m);
  for (size_t i = 0; i < m; ++i) order[i] = i;

  ShapResult out;
  out.base_value = detail::masked_value(f, X[0], background, 0);
  out.per_row.assign(X.size(), std::vector<double>(m, 0.0));

  for (size_t p = 0; p < n_permutations; ++p) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t r = 0; r < X.size(); ++r) {
      uint64_t mask = 0;
      double prev = out.base_value;
      for (size_t j : order) {
        mask |= uint64_t{1} << j;
        double cur = detail::masked_value(f, X[r], background, mask);
        out.per_row[r][j] += cur - prev;
        prev = cur;
      }
    }
  }

  std::vector<double> abs_sum(m, 0.0);
  for (auto& row : out.per_row)
    for (size_t j = 0; j < m; ++j) {
      row[j] /= static_cast<double>(n_permutations);
      abs_sum[j] += std::abs(row[j]);
    }
  for (size_t j = 0; j < m; ++j)
    out.scores.push_back({"f" + std::to_string(j),
                          abs_sum[j] / static_cast<double>(X.size()), ScoreMethod::shap});
  return out;
}

// Convenience: background = the first `limit` training rows (the estimator's
// default background sample size is 100).
inline Matrix background_from(const Matrix& train, size_t limit = 100) {
  if (train.empty()) fail("shapley: background source is empty");
  Matrix b(train.begin(), train.begin() + std::min(train.size(), limit));
  return b;
}

}  // namespace tabtext
