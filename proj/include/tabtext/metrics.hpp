#pragma once

// Classification metrics: accuracy, precision/recall, F1 (binary/macro),
// AUROC (rank-based with 0.5 tie credit; macro one-vs-rest), AUPRC, MCC
// (binary formula and its confusion-matrix multiclass generalization),
// logit-delta sensitivity summaries, and a wall-clock runtime probe.

#include <array>
#include <chrono>
#include <cstdint>
#include <json.hpp>

#include "tabtext/common.hpp"

namespace tabtext {

using Matrix = std::vector<std::vector<double>>;

enum class Averaging { binary, macro };

namespace detail {

inline void check_lengths(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty()) fail("metric input is empty");
  if (a.size() != b.size()) fail("metric input length mismatch");
}

inline size_t infer_classes(const std::vector<int>& yt, const std::vector<int>& yp) {
  int mx = 0;
  for (int v : yt) mx = std::max(mx, v);
  for (int v : yp) mx = std::max(mx, v);
  return static_cast<size_t>(mx) + 1;
}

}  // namespace detail

// ------------------------------------------------------------ confusion

struct ConfusionCounts {
  std::vector<std::vector<size_t>> matrix;  // [true][pred]
  size_t n = 0;

  static ConfusionCounts from(const std::vector<int>& yt, const std::vector<int>& yp,
                              size_t k = 0) {
    detail::check_lengths(yt, yp);
    size_t present = detail::infer_classes(yt, yp);
    if (k == 0) k = present;
    else if (present > k) fail("label id exceeds declared class count");
    ConfusionCounts c;
    c.matrix.assign(k, std::vector<size_t>(k, 0));
    for (size_t i = 0; i < yt.size(); ++i)
      c.matrix[static_cast<size_t>(yt[i])][static_cast<size_t>(yp[i])]++;
    c.n = yt.size();
    return c;
  }

  size_t k() const { return matrix.size(); }
  size_t tp(size_t c) const { return matrix[c][c]; }
  size_t fn(size_t c) const {
    size_t s = 0;
    for (size_t j = 0; j < k(); ++j)
      if (j != c) s += matrix[c][j];
    return s;
  }
  size_t fp(size_t c) const {
    size_t s = 0;
    for (size_t i = 0; i < k(); ++i)
      if (i != c) s += matrix[i][c];
    return s;
  }
  size_t tn(size_t c) const { return n - tp(c) - fn(c) - fp(c); }
};

// ------------------------------------------------------------ count metrics

inline double accuracy(const std::vector<int>& yt, const std::vector<int>& yp) {
  detail::check_lengths(yt, yp);
  size_t hit = 0;
  for (size_t i = 0; i < yt.size(); ++i) hit += yt[i] == yp[i];
  return static_cast<double>(hit) / static_cast<double>(yt.size());
}

namespace detail {

// per-class precision/recall/F1 with the 0/0 -> 0 convention
inline void prf_for_class(const ConfusionCounts& c, size_t cls, double& p, double& r,
                          double& f) {
  double tp = static_cast<double>(c.tp(cls));
  double fp = static_cast<double>(c.fp(cls));
  double fn = static_cast<double>(c.fn(cls));
  p = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
  r = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
  f = (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace detail

namespace detail {
// Binary averaging needs a 2-wide confusion matrix even for degenerate
// single-class inputs.
inline size_t widen_for(Averaging avg, size_t k, const std::vector<int>& yt,
                        const std::vector<int>& yp) {
  if (k != 0) return k;
  size_t present = infer_classes(yt, yp);
  return avg == Averaging::binary ? std::max<size_t>(present, 2) : present;
}
}  // namespace detail

inline double precision_score(const std::vector<int>& yt, const std::vector<int>& yp,
                              Averaging avg = Averaging::binary, size_t k = 0) {
  auto c = ConfusionCounts::from(yt, yp, detail::widen_for(avg, k, yt, yp));
  if (avg == Averaging::binary) {
    if (c.k() > 2) fail("binary averaging on multiclass input");
    double p, r, f;
    detail::prf_for_class(c, 1, p, r, f);
    return p;
  }
  double s = 0.0;
  for (size_t cls = 0; cls < c.k(); ++cls) {
    double p, r, f;
    detail::prf_for_class(c, cls, p, r, f);
    s += p;
  }
  return s / static_cast<double>(c.k());
}

inline double recall_score(const std::vector<int>& yt, const std::vector<int>& yp,
                           Averaging avg = Averaging::binary, size_t k = 0) {
  auto c = ConfusionCounts::from(yt, yp, detail::widen_for(avg, k, yt, yp));
  if (avg == Averaging::binary) {
    if (c.k() > 2) fail("binary averaging on multiclass input");
    double p, r, f;
    detail::prf_for_class(c, 1, p, r, f);
    return r;
  }
  double s = 0.0;
  for (size_t cls = 0; cls < c.k(); ++cls) {
    double p, r, f;
    detail::prf_for_class(c, cls, p, r, f);
    s += r;
  }
  return s / static_cast<double>(c.k());
}

inline double f1(const std::vector<int>& yt, const std::vector<int>& yp,
                 Averaging avg = Averaging::binary, size_t k = 0) {
  auto c = ConfusionCounts::from(yt, yp, detail::widen_for(avg, k, yt, yp));
  if (avg == Averaging::binary) {
    if (c.k() > 2) fail("binary averaging on multiclass input");
    double p, r, f;
    detail::prf_for_class(c, 1, p, r, f);
    return f;
  }
  double s = 0.0;
  for (size_t cls = 0; cls < c.k(); ++cls) {
    double p, r, f;
    detail::prf_for_class(c, cls, p, r, f);
    s += f;
  }
  return s / static_cast<double>(c.k());
}

// MCC from a confusion matrix: the correlation-style generalization
//   (s·trace − Σ_k t_k p_k) / sqrt((s² − Σ p_k²)(s² − Σ t_k²)),
// which reduces to the familiar binary formula at k = 2. Zero denominator
// yields 0 by convention. Always lands in [−1, 1].
inline double mcc_from_confusion(const std::vector<std::vector<size_t>>& m) {
  size_t k = m.size();
  double s = 0.0, trace = 0.0;
  std::vector<double> t(k, 0.0), p(k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    trace += static_cast<double>(m[i][i]);
    for (size_t j = 0; j < k; ++j) {
      double v = static_cast<double>(m[i][j]);
      s += v;
      t[i] += v;
      p[j] += v;
    }
  }
  double tp_sum = 0.0, pp_sum = 0.0, tt_sum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    tp_sum += t[i] * p[i];
    pp_sum += p[i] * p[i];
    tt_sum += t[i] * t[i];
  }
  double num = s * trace - tp_sum;
  double den = std::sqrt(s * s - pp_sum) * std::sqrt(s * s - tt_sum);
  if (den == 0.0) return 0.0;
  double v = num / den;
  return std::clamp(v, -1.0, 1.0);  // guard against rounding drift only
}

inline double mcc(const std::vector<int>& yt, const std::vector<int>& yp, size_t k = 0) {
  return mcc_from_confusion(ConfusionCounts::from(yt, yp, k).matrix);
}

// ------------------------------------------------------------ rank metrics

// Binary AUROC as the normalized Mann-Whitney statistic: average ranks give
// tied pairs 0.5 credit, matching the trapezoidal ROC integral.
inline double auroc_binary(const std::vector<int>& yt, const std::vector<double>& scores) {
  if (yt.empty()) fail("metric input is empty");
  if (yt.size() != scores.size()) fail("metric input length mismatch");
  size_t n_pos = 0;
  for (int y : yt) n_pos += y == 1;
  size_t n_neg = yt.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) fail("AUROC undefined: need both classes present");

  std::vector<size_t> order(yt.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (size_t q = i; q < j; ++q)
      if (yt[order[q]] == 1) rank_sum_pos += avg_rank;
    i = j;
  }
  double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Macro one-vs-rest AUROC over class-probability columns. Every class with
// support in y_true contributes; a class entirely absent from y_true has no
// defined one-vs-rest curve and is excluded from the mean.
inline double auroc_macro_ovr(const std::vector<int>& yt, const Matrix& probs) {
  if (yt.empty()) fail("metric input is empty");
  if (probs.size() != yt.size()) fail("probability matrix row count mismatch");
  size_t k = probs[0].size();
  double sum = 0.0;
  size_t used = 0;
  for (size_t c = 0; c < k; ++c) {
    size_t pos = 0;
    for (int y : yt) pos += static_cast<size_t>(y) == c;
    if (pos == 0 || pos == yt.size()) continue;
    std::vector<int> bin(yt.size());
    std::vector<double> col(yt.size());
    for (size_t i = 0; i < yt.size(); ++i) {
      bin[i] = static_cast<size_t>(yt[i]) == c ? 1 : 0;
      col[i] = probs[i][c];
    }
    sum += auroc_binary(bin, col);
    ++used;
  }
  if (used == 0) fail("AUROC undefined: single-class input");
  return sum / static_cast<double>(used);
}

// Average precision (AUPRC): precision steps at each distinct threshold,
// weighted by the recall gained there.
inline double auprc_binary(const std::vector<int>& yt, const std::vector<double>& scores) {
  if (yt.empty()) fail("metric input is empty");
  if (yt.size() != scores.size()) fail("metric input length mismatch");
  size_t n_pos = 0;
  for (int y : yt) n_pos += y == 1;
  if (n_pos == 0) fail("AUPRC undefined: no positive samples");

  std::vector<size_t> order(yt.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  double ap = 0.0;
  size_t tp = 0, seen = 0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    size_t tp_block = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      tp_block += yt[order[j]] == 1;
      ++j;
    }
    size_t prev_tp = tp;
    tp += tp_block;
    seen = j;
    double precision = static_cast<double>(tp) / static_cast<double>(seen);
    double recall_gain =
        static_cast<double>(tp - prev_tp) / static_cast<double>(n_pos);
    ap += precision * recall_gain;
    i = j;
  }
  return ap;
}

inline double auprc_macro_ovr(const std::vector<int>& yt, const Matrix& probs) {
  if (yt.empty()) fail("metric input is empty");
  size_t k = probs[0].size();
  double sum = 0.0;
  size_t used = 0;
  for (size_t c = 0; c < k; ++c) {
    size_t pos = 0;
    for (int y : yt) pos += static_cast<size_t>(y) == c;
    if (pos == 0) continue;
    std::vector<int> bin(yt.size());
    std::vector<double> col(yt.size());
    for (size_t i = 0; i < yt.size(); ++i) {
      bin[i] = static_cast<size_t>(yt[i]) == c ? 1 : 0;
      col[i] = probs[i][c];
    }
    sum += auprc_binary(bin, col);
    ++used;
  }
  if (used == 0) fail("AUPRC undefined: no class has support");
  return sum / static_cast<double>(used);
}

// ------------------------------------------------------------ logit deltas

struct LogitMatrix {
  Matrix values;                         // n × k raw pre-softmax scores
  std::vector<std::string> class_order;  // display names, index == class id
  std::string provenance;                // "model@corpus" style tag

  size_t rows() const { return values.size(); }
  size_t cols() const { return values.empty() ? 0 : values[0].size(); }
};

struct LogitDelta {
  Matrix delta;                  // variant − baseline, per sample per class
  std::vector<uint8_t> flipped;  // argmax changed
  double mean_abs = 0.0;
  double flipped_fraction = 0.0;
};

namespace detail {
inline size_t argmax_row(const std::vector<double>& v) {
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}
}  // namespace detail

inline LogitDelta logit_delta(const LogitMatrix& baseline, const LogitMatrix& variant) {
  if (baseline.rows() != variant.rows() || baseline.cols() != variant.cols())
    fail("logit matrices have mismatched shapes");
  if (baseline.class_order != variant.class_order)
    fail("logit matrices have mismatched class order");
  LogitDelta out;
  out.delta.reserve(baseline.rows());
  double abs_sum = 0.0;
  size_t flips = 0, cells = 0;
  for (size_t i = 0; i < baseline.rows(); ++i) {
    std::vector<double> d(baseline.cols());
    for (size_t j = 0; j < baseline.cols(); ++j) {
      d[j] = variant.values[i][j] - baseline.values[i][j];
      if (!std::isfinite(d[j])) fail("non-finite logit delta");
      abs_sum += std::abs(d[j]);
      ++cells;
    }
    bool flip = detail::argmax_row(variant.values[i]) != detail::argmax_row(baseline.values[i]);
    flips += flip;
    out.flipped.push_back(flip ? 1 : 0);
    out.delta.push_back(std::move(d));
  }
  out.mean_abs = cells ? abs_sum / static_cast<double>(cells) : 0.0;
  out.flipped_fraction =
      baseline.rows() ? static_cast<double>(flips) / static_cast<double>(baseline.rows()) : 0.0;
  return out;
}

// ------------------------------------------------------------ runtime probe

struct ProbeResult {
  double wall_seconds = 0.0;
  double samples_per_second = 0.0;
};

template <class F>
ProbeResult runtime_probe(F&& unit, size_t n_samples) {
  if (n_samples == 0) fail("runtime_probe needs a non-empty input");
  auto t0 = std::chrono::steady_clock::now();
  unit();
  auto t1 = std::chrono::steady_clock::now();
  ProbeResult r;
  r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  r.samples_per_second =
      r.wall_seconds > 0.0 ? static_cast<double>(n_samples) / r.wall_seconds
                           : std::numeric_limits<double>::infinity();
  return r;
}

// ------------------------------------------------------------ report bundle

struct EvalReport {
  std::string model;
  size_t n = 0;
  size_t n_classes = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auroc = 0.0;
  bool has_auroc = false;
  double auprc = 0.0;
  bool has_auprc = false;
  double mcc = 0.0;
  double loss = 0.0;
  bool has_loss = false;
  double runtime_seconds = 0.0;
  double samples_per_second = 0.0;
  std::vector<std::array<double, 3>> per_class;  // precision, recall, f1
  bool failed = false;
  std::string failure;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["n"] = n;
    j["n_classes"] = n_classes;
    if (failed) {
      j["failed"] = true;
      j["failure"] = failure;
      return j;
    }
    j["accuracy"] = accuracy;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f1"] = f1;
    if (has_auroc) j["auroc"] = auroc;
    if (has_auprc) j["auprc"] = auprc;
    j["mcc"] = mcc;
    if (has_loss) j["loss"] = loss;
    j["runtime_seconds"] = runtime_seconds;
    j["samples_per_second"] = samples_per_second;
    nlohmann::json pc = nlohmann::json::array();
    for (const auto& c : per_class)
      pc.push_back({{"precision", c[0]}, {"recall", c[1]}, {"f1", c[2]}});
    j["per_class"] = pc;
    return j;
  }
};

// Assemble the standard metric bundle from labels, predictions, and (when
// available) class probabilities. Binary tasks use the positive-class column
// for the rank metrics; multiclass uses macro averaging throughout.
inline EvalReport evaluate(const std::vector<int>& yt, const std::vector<int>& yp,
                           const Matrix* probs = nullptr, size_t k = 0) {
  detail::check_lengths(yt, yp);
  if (k == 0) k = detail::infer_classes(yt, yp);
  if (k < 2) k = 2;
  EvalReport r;
  r.n = yt.size();
  r.n_classes = k;
  Averaging avg = k <= 2 ? Averaging::binary : Averaging::macro;
  r.accuracy = accuracy(yt, yp);
  r.precision = precision_score(yt, yp, avg, k);
  r.recall = recall_score(yt, yp, avg, k);
  r.f1 = f1(yt, yp, avg, k);
  r.mcc = mcc(yt, yp, k);
  auto c = ConfusionCounts::from(yt, yp, k);
  for (size_t cls = 0; cls < k; ++cls) {
    double p, rr, f;
    detail::prf_for_class(c, cls, p, rr, f);
    r.per_class.push_back({p, rr, f});
  }
  if (probs) {
    try {
      if (k <= 2) {
        std::vector<double> pos(yt.size());
        for (size_t i = 0; i < yt.size(); ++i)
          pos[i] = (*probs)[i].size() > 1 ? (*probs)[i][1] : (*probs)[i][0];
        r.auroc = auroc_binary(yt, pos);
        r.auprc = auprc_binary(yt, pos);
      } else {
        r.auroc = auroc_macro_ovr(yt, *probs);
        r.auprc = auprc_macro_ovr(yt, *probs);
      }
      r.has_auroc = true;
      r.has_auprc = true;
    } catch (const error&) {
      r.has_auroc = false;  // single-class folds etc.; callers render "---"
      r.has_auprc = false;
    }
  }
  return r;
}

}  // namespace tabtext
