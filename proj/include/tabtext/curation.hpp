#pragma once

// Data-curation levers: ANOVA F-test feature scoring, threshold selection,
// feature scaling (standardize / normalize / log-transform) fitted on
// training data only, and per-feature missing-value policy overrides.

#include <functional>
#include <json.hpp>

#include "tabtext/dataset.hpp"

namespace tabtext {

// ------------------------------------------------------------ missing policy

enum class MissingPolicyKind { drop_clause, filler_unrelated, filler_related };

struct MissingPolicy {
  MissingPolicyKind kind = MissingPolicyKind::drop_clause;
  std::string filler;

  bool operator==(const MissingPolicy&) const = default;

  static MissingPolicy drop() { return {MissingPolicyKind::drop_clause, ""}; }
  static MissingPolicy unrelated(std::string f) {
    return {MissingPolicyKind::filler_unrelated, std::move(f)};
  }
  static MissingPolicy related(std::string f) {
    return {MissingPolicyKind::filler_related, std::move(f)};
  }
};

inline const char* policy_name(MissingPolicyKind k) {
  switch (k) {
    case MissingPolicyKind::drop_clause: return "drop_clause";
    case MissingPolicyKind::filler_unrelated: return "filler_unrelated";
    case MissingPolicyKind::filler_related: return "filler_related";
  }
  return "?";
}

inline MissingPolicyKind policy_from_name(const std::string& s) {
  if (s == "drop_clause") return MissingPolicyKind::drop_clause;
  if (s == "filler_unrelated") return MissingPolicyKind::filler_unrelated;
  if (s == "filler_related") return MissingPolicyKind::filler_related;
  fail("unknown missing policy: " + s);
}

// ------------------------------------------------------------ feature scores

enum class ScoreMethod { anova_f, shap };

struct FeatureScore {
  std::string feature;
  double score = 0.0;
  ScoreMethod method = ScoreMethod::anova_f;
};

struct AnovaResult {
  std::vector<FeatureScore> scores;          // in feature order
  std::vector<std::string> zero_variance;    // features hitting the 0/0 convention
};

// One-way ANOVA F for a single feature column against class labels.
// Procedure: per-class means, overall mean, between-group sum of squares
// SSB = Σ n_j (μ_j − μ)², within-group SSW = Σ (x_i − μ_{y_i})², then
// F = (SSB/(k−1)) / (SSW/(n−k)). Missing cells are excluded pairwise.
// Globally constant features (SSB = SSW = 0) score 0 by convention.
inline double anova_f_single(const std::vector<double>& x, const std::vector<uint8_t>& miss,
                             const std::vector<int>& y, size_t k, bool* zero_variance = nullptr) {
  std::vector<double> sum(k, 0.0);
  std::vector<size_t> cnt(k, 0);
  size_t n = 0;
  double total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!miss.empty() && miss[i]) continue;
    size_t c = static_cast<size_t>(y[i]);
    sum[c] += x[i];
    cnt[c]++;
    total += x[i];
    ++n;
  }
  size_t present_classes = 0;
  for (size_t c = 0; c < k; ++c)
    if (cnt[c] > 0) ++present_classes;
  if (present_classes < 2) fail("ANOVA needs at least 2 classes with data");
  if (n <= present_classes) fail("ANOVA needs more samples than classes");

  const double mu = total / static_cast<double>(n);
  double ssb = 0.0;
  for (size_t c = 0; c < k; ++c) {
    if (cnt[c] == 0) continue;
    double mc = sum[c] / static_cast<double>(cnt[c]);
    double d = mc - mu;
    ssb += static_cast<double>(cnt[c]) * d * d;
  }
  double ssw = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!miss.empty() && miss[i]) continue;
    size_t c = static_cast<size_t>(y[i]);
    double d = x[i] - sum[c] / static_cast<double>(cnt[c]);
    ssw += d * d;
  }
  if (ssw == 0.0) {
    if (zero_variance) *zero_variance = true;
    if (ssb == 0.0) return 0.0;                          // 0/0 convention
    return std::numeric_limits<double>::infinity();      // perfect separation
  }
  const double df_b = static_cast<double>(present_classes - 1);
  const double df_w = static_cast<double>(n - present_classes);
  return (ssb / df_b) / (ssw / df_w);
}

// Score the named features (default: every numeric feature) of a dataset.
inline AnovaResult anova_f_scores(const TabularDataset& ds,
                                  std::vector<std::string> features = {}) {
  if (ds.n_classes() < 2) fail("ANOVA needs at least 2 classes");
  if (features.empty())
    for (const auto& c : ds.features)
      if (c.kind == FeatureKind::numeric) features.push_back(c.name);
  AnovaResult out;
  for (const auto& name : features) {
    const Column& c = ds.col(name);
    if (c.kind != FeatureKind::numeric) fail("ANOVA requires numeric feature: " + name);
    bool zv = false;
    double f = anova_f_single(c.nums, c.miss, ds.labels, ds.n_classes(), &zv);
    if (std::isnan(f)) fail("ANOVA produced NaN for feature: " + name);
    if (zv) out.zero_variance.push_back(name);
    if (std::isinf(f)) f = std::numeric_limits<double>::max();  // scores stay finite
    out.scores.push_back({name, f, ScoreMethod::anova_f});
  }
  return out;
}

// Keep features scoring ≥ tau. Errors when nothing survives.
inline std::set<std::string> select_by_threshold(const std::vector<FeatureScore>& scores,
                                                 double tau) {
  if (scores.empty()) fail("select_by_threshold: no scores given");
  std::set<std::string> keep;
  for (const auto& s : scores)
    if (s.score >= tau) keep.insert(s.feature);
  if (keep.empty()) fail("selection threshold drops every feature");
  return keep;
}

inline std::vector<FeatureScore> ranked(std::vector<FeatureScore> scores) {
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.score > b.score; });
  return scores;
}

// ------------------------------------------------------------ scaling

enum class ScaleKind { none, standardize, normalize, log_transform };

inline const char* scale_name(ScaleKind k) {
  switch (k) {
    case ScaleKind::none: return "none";
    case ScaleKind::standardize: return "standardize";
    case ScaleKind::normalize: return "normalize";
    case ScaleKind::log_transform: return "log_transform";
  }
  return "?";
}

inline ScaleKind scale_from_name(const std::string& s) {
  if (s == "none") return ScaleKind::none;
  if (s == "standardize") return ScaleKind::standardize;
  if (s == "normalize") return ScaleKind::normalize;
  if (s == "log_transform" || s == "log1p" || s == "log") return ScaleKind::log_transform;
  fail("unknown scaling kind: " + s);
}

// Fitted statistics live with the scaler so applying to held-out data can
// never read held-out statistics. The log transform computes log(1+x) by
// default; `plain_log` switches to log(x) for strictly positive columns.
struct FittedScaler {
  ScaleKind kind = ScaleKind::none;
  double mean = 0.0;
  double stdev = 1.0;
  double max_value = 1.0;
  bool plain_log = false;

  bool operator==(const FittedScaler&) const = default;
};

inline FittedScaler fit_scaler(const std::vector<double>& values,
                               const std::vector<uint8_t>& miss, ScaleKind kind,
                               bool plain_log = false) {
  FittedScaler s;
  s.kind = kind;
  s.plain_log = plain_log;
  if (kind == ScaleKind::none) return s;

  std::vector<double> xs;
  for (size_t i = 0; i < values.size(); ++i)
    if (miss.empty() || !miss[i]) xs.push_back(values[i]);
  if (xs.size() < 2) fail("fit_scaler needs at least 2 non-missing values");

  switch (kind) {
    case ScaleKind::standardize: {
      double mu = mean_of(xs);
      double ss = 0.0;
      for (double v : xs) ss += (v - mu) * (v - mu);
      double sd = std::sqrt(ss / static_cast<double>(xs.size()));
      if (sd <= 0.0) fail("standardize: zero variance column");
      s.mean = mu;
      s.stdev = sd;
      break;
    }
    case ScaleKind::normalize: {
      double mx = *std::max_element(xs.begin(), xs.end());
      if (mx <= 0.0) fail("normalize: non-positive maximum");
      s.max_value = mx;
      break;
    }
    case ScaleKind::log_transform: {
      for (double v : xs) {
        if (plain_log && v <= 0.0) fail("log transform: non-positive value");
        if (!plain_log && v <= -1.0) fail("log transform: value not above -1");
      }
      break;
    }
    case ScaleKind::none: break;
  }
  return s;
}

inline FittedScaler fit_scaler(const Column& col, ScaleKind kind, bool plain_log = false) {
  if (col.kind != FeatureKind::numeric) fail("scaling requires a numeric feature: " + col.name);
  return fit_scaler(col.nums, col.miss, kind, plain_log);
}

inline double apply_scaler(double v, const FittedScaler& s) {
  if (std::isnan(v)) return v;  // missing in, missing out; policy applied downstream
  switch (s.kind) {
    case ScaleKind::none: return v;
    case ScaleKind::standardize: return (v - s.mean) / s.stdev;
    case ScaleKind::normalize: return v / s.max_value;
    case ScaleKind::log_transform:
      if (s.plain_log) {
        if (v <= 0.0) fail("log transform: non-positive value");
        return std::log(v);
      }
      if (v <= -1.0) fail("log transform: value not above -1");
      return std::log1p(v);
  }
  return v;
}

// ------------------------------------------------------------ curation plan

// The train-fitted bundle handed to the renderer: which features survive
// selection, how numeric values are rescaled, and per-feature overrides of
// the clause missing policies.
struct CurationPlan {
  std::optional<std::set<std::string>> selected;  // nullopt = keep everything
  std::map<std::string, FittedScaler> scaling;
  std::map<std::string, MissingPolicy> imputation;

  // provenance
  std::string dataset;
  std::string method;  // e.g. "anova_f", "manual"
  double tau = 0.0;
  uint64_t fit_seed = 0;
  std::string fit_population;  // "train" or "full"

  bool keeps(const std::string& feature) const {
    return !selected || selected->count(feature) > 0;
  }
  const FittedScaler* scaler_for(const std::string& feature) const {
    auto it = scaling.find(feature);
    return it == scaling.end() ? nullptr : &it->second;
  }
  const MissingPolicy* imputation_for(const std::string& feature) const {
    auto it = imputation.find(feature);
    return it == imputation.end() ? nullptr : &it->second;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["method"] = method;
    j["tau"] = tau;
    j["fit_seed"] = fit_seed;
    j["fit_population"] = fit_population;
    if (selected) j["selected"] = *selected;
    nlohmann::json sc = nlohmann::json::object();
    for (const auto& [name, s] : scaling) {
      sc[name] = {{"kind", scale_name(s.kind)},
                  {"mean", s.mean},
                  {"stdev", s.stdev},
                  {"max", s.max_value},
                  {"plain_log", s.plain_log}};
    }
    j["scaling"] = sc;
    nlohmann::json im = nlohmann::json::object();
    for (const auto& [name, p] : imputation)
      im[name] = {{"policy", policy_name(p.kind)}, {"filler", p.filler}};
    j["imputation"] = im;
    return j;
  }

  static CurationPlan from_json(const nlohmann::json& j) {
    CurationPlan p;
    p.dataset = j.value("dataset", "");
    p.method = j.value("method", "");
    p.tau = j.value("tau", 0.0);
    p.fit_seed = j.value("fit_seed", uint64_t{0});
    p.fit_population = j.value("fit_population", "");
    if (j.contains("selected"))
      p.selected = std::set<std::string>(j["selected"].begin(), j["selected"].end());
    if (j.contains("scaling"))
      for (auto& [name, s] : j["scaling"].items()) {
        FittedScaler f;
        f.kind = scale_from_name(s.value("kind", "none"));
        f.mean = s.value("mean", 0.0);
        f.stdev = s.value("stdev", 1.0);
        f.max_value = s.value("max", 1.0);
        f.plain_log = s.value("plain_log", false);
        p.scaling[name] = f;
      }
    if (j.contains("imputation"))
      for (auto& [name, q] : j["imputation"].items())
        p.imputation[name] = {policy_from_name(q.value("policy", "drop_clause")),
                              q.value("filler", "")};
    return p;
  }
};

}  // namespace tabtext
