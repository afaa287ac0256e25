#pragma once

// Classical baselines behind one interface: two gradient-boosting engines and
// an RBF-kernel SVM, each tuned by exhaustive grid search over its published
// hyperparameter grid with stratified K-fold cross-validation. The search is
// deterministic: folds derive from a fixed seed, every grid point is visited
// in declaration order (first axis slowest), and score ties keep the earliest
// point. The winning configuration is refit on the full training split.
//
// Optional external baselines (attention-based tabular learners) run through
// a Python subprocess bridge; when the dependency is missing they raise
// AdapterUnavailableError so report code can print a "---" cell instead of
// a number.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "tabtext/common.hpp"
#include "tabtext/dataset.hpp"
#include "tabtext/feature_matrix.hpp"
#include "tabtext/metrics.hpp"
#include "tabtext/svm.hpp"
#include "tabtext/tree_boost.hpp"

namespace tabtext {

// ------------------------------------------------------------ families

enum class ModelFamily { gbdt_a, gbdt_b, svm_rbf };

inline std::string family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::gbdt_a: return "gbdt_a";
    case ModelFamily::gbdt_b: return "gbdt_b";
    case ModelFamily::svm_rbf: return "svm_rbf";
  }
  return "?";
}

inline ModelFamily family_from_name(const std::string& s) {
  if (s == "gbdt_a") return ModelFamily::gbdt_a;
  if (s == "gbdt_b") return ModelFamily::gbdt_b;
  if (s == "svm_rbf") return ModelFamily::svm_rbf;
  fail("unknown model family '" + s + "' (expected gbdt_a, gbdt_b or svm_rbf)");
}

// ------------------------------------------------------------ grids

// A hyperparameter value is either a number or a symbolic token ("auto",
// "scale", "rbf").
struct ParamValue {
  bool is_number = true;
  double num = 0.0;
  std::string text;

  static ParamValue number(double v) { return {true, v, {}}; }
  static ParamValue token(std::string t) { return {false, 0.0, std::move(t)}; }

  std::string str() const { return is_number ? fmt_roundtrip(num) : text; }
  bool operator==(const ParamValue& o) const {
    return is_number == o.is_number && (is_number ? num == o.num : text == o.text);
  }
};

using Params = std::vector<std::pair<std::string, ParamValue>>;

inline const ParamValue& param(const Params& p, const std::string& name) {
  for (const auto& [k, v] : p)
    if (k == name) return v;
  fail("missing hyperparameter '" + name + "'");
}

inline nlohmann::json params_to_json(const Params& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : p) {
    if (v.is_number)
      j[k] = v.num;
    else
      j[k] = v.text;
  }
  return j;
}

// Ordered cross-product of named axes. Enumeration is row-major over the
// declared order: the first axis varies slowest, the last fastest.
struct HyperGrid {
  std::vector<std::pair<std::string, std::vector<ParamValue>>> axes;

  size_t cardinality() const {
    size_t n = 1;
    for (const auto& [_, vals] : axes) n *= vals.size();
    return n;
  }

  Params at(size_t index) const {
    if (index >= cardinality()) fail("grid index out of range");
    Params out(axes.size());
    for (size_t a = axes.size(); a-- > 0;) {
      const auto& [name, vals] = axes[a];
      out[a] = {name, vals[index % vals.size()]};
      index /= vals.size();
    }
    return out;
  }

  bool contains(const Params& p) const {
    if (p.size() != axes.size()) return false;
    for (size_t a = 0; a < axes.size(); ++a) {
      if (p[a].first != axes[a].first) return false;
      bool hit = false;
      for (const auto& v : axes[a].second)
        if (v == p[a].second) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  }
};

namespace detail {
inline std::vector<ParamValue> num_axis(std::initializer_list<double> vs) {
  std::vector<ParamValue> out;
  for (double v : vs) out.push_back(ParamValue::number(v));
  return out;
}
}  // namespace detail

// The published tuning grids. gbdt_a follows the depth-limited booster's
// conventions (max_depth, eta), gbdt_b the leaf-budget booster's (num_leaves,
// learning_rate); both share the L1/L2 regularization axes. svm_rbf tunes the
// box constraint and kernel width.
inline HyperGrid builtin_grid(ModelFamily f) {
  using detail::num_axis;
  HyperGrid g;
  switch (f) {
    case ModelFamily::gbdt_a:
      g.axes = {
          {"max_depth", num_axis({2, 4, 6, 8, 10, 12})},
          {"lambda_l1",
           num_axis({1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0})},
          {"lambda_l2",
           num_axis({1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0})},
          {"eta", num_axis({0.01, 0.03, 0.1, 0.3})},
      };
      break;
    case ModelFamily::gbdt_b:
      g.axes = {
          {"num_leaves",
           num_axis({2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096})},
          {"lambda_l1",
           num_axis({1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0})},
          {"lambda_l2",
           num_axis({1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0})},
          {"learning_rate", num_axis({0.01, 0.03, 0.1, 0.3})},
      };
      break;
    case ModelFamily::svm_rbf:
      g.axes = {
          {"C", num_axis({0.1, 1, 10, 100})},
          {"gamma",
           {ParamValue::number(0.001), ParamValue::number(0.01),
            ParamValue::number(0.1), ParamValue::number(1),
            ParamValue::token("auto"), ParamValue::token("scale")}},
          {"kernel", {ParamValue::token("rbf")}},
      };
      break;
  }
  return g;
}

// ------------------------------------------------------------ fitted models

struct AnyModel {
  ModelFamily family = ModelFamily::gbdt_a;
  GbdtModel gbdt;
  SvmModel svm;

  Matrix predict_proba(const Matrix& X) const {
    return family == ModelFamily::svm_rbf ? svm.predict_proba(X)
                                          : gbdt.predict_proba(X);
  }

  nlohmann::json to_json() const {
    nlohmann::json j =
        family == ModelFamily::svm_rbf ? svm.to_json() : gbdt.to_json();
    j["family"] = family_name(family);
    return j;
  }

  static AnyModel from_json(const nlohmann::json& j) {
    AnyModel m;
    m.family = family_from_name(j.at("family").get<std::string>());
    if (m.family == ModelFamily::svm_rbf)
      m.svm = SvmModel::from_json(j);
    else
      m.gbdt = GbdtModel::from_json(j);
    return m;
  }
};

inline FeaturizeMode featurize_mode_for(ModelFamily f) {
  return f == ModelFamily::svm_rbf ? FeaturizeMode::margin : FeaturizeMode::tree;
}

// Columns the classical baselines should never see: row identifiers and
// near-unique sparse fields that carry no signal a fold could generalize
// from. Free-text columns are already dropped by the featurizer itself.
inline std::set<std::string> default_model_excludes(const std::string& dataset) {
  if (dataset == "titanic") return {"PassengerId", "Cabin"};
  return {};
}

inline AnyModel fit_family(ModelFamily family, const Params& p, const Matrix& X,
                           const std::vector<int>& y, size_t n_classes) {
  AnyModel m;
  m.family = family;
  if (family == ModelFamily::svm_rbf) {
    const ParamValue& kernel = param(p, "kernel");
    if (kernel.is_number || kernel.text != "rbf")
      fail("svm_rbf supports only the rbf kernel");
    SvmParams sp;
    sp.C = param(p, "C").num;
    sp.gamma = param(p, "gamma").str();
    m.svm.fit(X, y, n_classes, sp);
    return m;
  }
  GbdtParams gp;
  gp.lambda_l1 = param(p, "lambda_l1").num;
  gp.lambda_l2 = param(p, "lambda_l2").num;
  if (family == ModelFamily::gbdt_a) {
    gp.growth = TreeGrowth::depth_wise;
    gp.max_depth = static_cast<int>(param(p, "max_depth").num);
    gp.learning_rate = param(p, "eta").num;
  } else {
    gp.growth = TreeGrowth::leaf_wise;
    gp.num_leaves = static_cast<int>(param(p, "num_leaves").num);
    gp.learning_rate = param(p, "learning_rate").num;
  }
  m.gbdt.fit(X, y, n_classes, gp);
  return m;
}

// ------------------------------------------------------------ scorers

// A scorer maps held-out labels and predicted class probabilities to a score
// to MAXIMIZE. Returning NaN marks the fold as undefined for this metric.
using Scorer = std::function<double(const std::vector<int>&, const Matrix&)>;

inline std::vector<int> argmax_labels(const Matrix& proba) {
  std::vector<int> out(proba.size());
  for (size_t i = 0; i < proba.size(); ++i)
    out[i] = static_cast<int>(detail::argmax_row(proba[i]));
  return out;
}

inline Scorer accuracy_scorer() {
  return [](const std::vector<int>& yt, const Matrix& proba) {
    return accuracy(yt, argmax_labels(proba));
  };
}

inline Scorer auroc_scorer() {
  return [](const std::vector<int>& yt, const Matrix& proba) -> double {
    if (proba.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (proba[0].size() == 2) {
      std::vector<double> s(proba.size());
      for (size_t i = 0; i < proba.size(); ++i) s[i] = proba[i][1];
      return auroc_binary(yt, s);
    }
    return auroc_macro_ovr(yt, proba);
  };
}

inline Scorer scorer_by_name(const std::string& name) {
  if (name == "accuracy") return accuracy_scorer();
  if (name == "auroc") return auroc_scorer();
  fail("unknown scorer '" + name + "' (expected accuracy or auroc)");
}

// ------------------------------------------------------------ folds

// Stratified K-fold assignment: within each class, indices are shuffled with
// the seeded generator and dealt round-robin, so every fold holds each class
// in proportion. Errors when any class has fewer members than folds.
inline std::vector<int> stratified_fold_assignments(const std::vector<int>& y,
                                                    size_t n_classes, int folds,
                                                    uint64_t seed) {
  if (folds < 2) fail("cross-validation needs at least 2 folds");
  std::vector<std::vector<size_t>> per_class(n_classes);
  for (size_t i = 0; i < y.size(); ++i)
    per_class[static_cast<size_t>(y[i])].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(y.size(), -1);
  for (size_t c = 0; c < n_classes; ++c) {
    if (per_class[c].size() < static_cast<size_t>(folds))
      fail("class " + std::to_string(c) + " has " +
           std::to_string(per_class[c].size()) + " members; " +
           std::to_string(folds) + "-fold stratified CV needs at least " +
           std::to_string(folds) + " per class");
    std::shuffle(per_class[c].begin(), per_class[c].end(), rng);
    for (size_t k = 0; k < per_class[c].size(); ++k)
      fold_of[per_class[c][k]] = static_cast<int>(k % static_cast<size_t>(folds));
  }
  return fold_of;
}

// ------------------------------------------------------------ grid search

struct GridSearchOptions {
  int folds = 5;
  uint64_t seed = 42;
  std::string scorer_name = "accuracy";  // selection metric
  std::set<std::string> exclude_columns;  // identifier-like columns to drop
  // Probe hook: called once per grid point, in evaluation order. Used by
  // tests to verify the search is exhaustive.
  std::function<void(size_t, const Params&)> on_point;
};

struct FitResult {
  ModelFamily family = ModelFamily::gbdt_a;
  Params best_params;
  std::vector<double> cv_scores;  // per-fold scores of the winning point
  double cv_mean = 0.0;
  size_t grid_points_evaluated = 0;
  uint64_t seed = 42;
  std::string scorer_name;
  std::vector<std::string> warnings;  // skipped folds etc.
  std::vector<std::string> class_names;
  Featurizer featurizer;
  AnyModel model;
};

inline FitResult grid_search(ModelFamily family, const HyperGrid& grid,
                             const TabularDataset& train,
                             GridSearchOptions opt = {}) {
  if (grid.axes.empty() || grid.cardinality() == 0) fail("empty hyperparameter grid");
  size_t k = train.classes.size();
  if (k < 2) fail("training split holds a single class");
  Scorer scorer = scorer_by_name(opt.scorer_name);

  FitResult result;
  result.family = family;
  result.seed = opt.seed;
  result.scorer_name = opt.scorer_name;
  result.class_names = train.classes;

  std::vector<int> fold_of =
      stratified_fold_assignments(train.labels, k, opt.folds, opt.seed);

  // Per-fold featurized matrices are independent of the grid point, so they
  // are prepared once. The featurizer is fit on the fold's training part only.
  struct FoldData {
    Matrix Xtr, Xval;
    std::vector<int> ytr, yval;
    bool usable = true;
  };
  std::vector<FoldData> fold_data(static_cast<size_t>(opt.folds));
  for (int f = 0; f < opt.folds; ++f) {
    std::vector<size_t> tr_idx, val_idx;
    for (size_t i = 0; i < train.n_rows(); ++i)
      (fold_of[i] == f ? val_idx : tr_idx).push_back(i);
    TabularDataset dtr = train.take(tr_idx);
    TabularDataset dval = train.take(val_idx);
    FoldData& fd = fold_data[static_cast<size_t>(f)];
    fd.ytr = dtr.labels;
    fd.yval = dval.labels;
    std::set<int> distinct(fd.ytr.begin(), fd.ytr.end());
    if (distinct.size() < 2) {
      fd.usable = false;
      result.warnings.push_back("fold " + std::to_string(f) +
                                " skipped: training part is single-class");
      continue;
    }
    Featurizer fz;
    fz.mode = featurize_mode_for(family);
    fz.exclude = opt.exclude_columns;
    fz.fit(dtr);
    fd.Xtr = fz.transform(dtr);
    fd.Xval = fz.transform(dval);
  }

  double best_score = -std::numeric_limits<double>::infinity();
  size_t best_index = 0;
  std::vector<double> best_fold_scores;
  size_t total = grid.cardinality();
  for (size_t g = 0; g < total; ++g) {
    Params p = grid.at(g);
    if (opt.on_point) opt.on_point(g, p);
    std::vector<double> fold_scores;
    for (int f = 0; f < opt.folds; ++f) {
      const FoldData& fd = fold_data[static_cast<size_t>(f)];
      if (!fd.usable) continue;
      AnyModel m = fit_family(family, p, fd.Xtr, fd.ytr, k);
      double s = scorer(fd.yval, m.predict_proba(fd.Xval));
      if (std::isnan(s)) {
        if (g == 0)
          result.warnings.push_back("fold " + std::to_string(f) + " skipped: " +
                                    opt.scorer_name + " undefined on its labels");
        continue;
      }
      fold_scores.push_back(s);
    }
    ++result.grid_points_evaluated;
    if (fold_scores.empty()) continue;
    double mean = mean_of(fold_scores);
    if (mean > best_score) {  // strict: ties keep the earliest grid point
      best_score = mean;
      best_index = g;
      best_fold_scores = fold_scores;
    }
  }
  if (best_fold_scores.empty())
    fail("grid search scored no fold; metric undefined everywhere");

  result.best_params = grid.at(best_index);
  result.cv_scores = best_fold_scores;
  result.cv_mean = best_score;

  // Refit the winner on the complete training split.
  result.featurizer.mode = featurize_mode_for(family);
  result.featurizer.exclude = opt.exclude_columns;
  result.featurizer.fit(train);
  result.model = fit_family(family, result.best_params,
                            result.featurizer.transform(train), train.labels, k);
  return result;
}

// Fit a single configuration without a search (used by experiments that pin
// hyperparameters).
inline FitResult fit_single(ModelFamily family, const Params& p,
                            const TabularDataset& train,
                            const std::set<std::string>& exclude = {}) {
  HyperGrid g;
  for (const auto& [name, value] : p) g.axes.push_back({name, {value}});
  GridSearchOptions opt;
  opt.exclude_columns = exclude;
  return grid_search(family, g, train, opt);
}

// ------------------------------------------------------------ prediction

// Class-probability rows for a fitted result, columns in training label
// order. The featurizer validates that the columns it was fit on are present
// with unchanged kinds.
inline Matrix predict_proba(const FitResult& fit, const TabularDataset& ds) {
  Matrix proba = fit.model.predict_proba(fit.featurizer.transform(ds));
  for (const auto& row : proba) {
    double sum = 0;
    for (double v : row) sum += v;
    if (std::abs(sum - 1.0) > 1e-6) fail("probability row does not sum to 1");
  }
  return proba;
}

inline std::vector<int> predict_labels(const FitResult& fit,
                                       const TabularDataset& ds) {
  return argmax_labels(predict_proba(fit, ds));
}

// ------------------------------------------------------------ persistence

inline nlohmann::json fit_to_json(const FitResult& r) {
  return {{"family", family_name(r.family)},
          {"best_params", params_to_json(r.best_params)},
          {"cv_scores", r.cv_scores},
          {"cv_mean", r.cv_mean},
          {"grid_points_evaluated", r.grid_points_evaluated},
          {"seed", r.seed},
          {"scorer", r.scorer_name},
          {"warnings", r.warnings},
          {"class_names", r.class_names},
          {"featurizer", r.featurizer.to_json()},
          {"model", r.model.to_json()}};
}

inline FitResult fit_from_json(const nlohmann::json& j) {
  FitResult r;
  r.family = family_from_name(j.at("family").get<std::string>());
  for (const auto& [key, value] : j.at("best_params").items()) {
    if (value.is_number())
      r.best_params.push_back({key, ParamValue::number(value.get<double>())});
    else
      r.best_params.push_back({key, ParamValue::token(value.get<std::string>())});
  }
  r.cv_scores = j.at("cv_scores").get<std::vector<double>>();
  r.cv_mean = j.at("cv_mean");
  r.grid_points_evaluated = j.at("grid_points_evaluated");
  r.seed = j.at("seed");
  r.scorer_name = j.at("scorer");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.class_names = j.at("class_names").get<std::vector<std::string>>();
  r.featurizer = Featurizer::from_json(j.at("featurizer"));
  r.model = AnyModel::from_json(j.at("model"));
  return r;
}

inline void save_fit(const FitResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write model file: " + path);
  out << fit_to_json(r).dump(1) << "\n";
}

inline FitResult load_fit(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read model file: " + path);
  nlohmann::json j;
  in >> j;
  return fit_from_json(j);
}

// ------------------------------------------------------------ external adapters

// Raised when an optional external baseline's dependency is not installed.
// Report code catches this and prints "---" for the cell.
class AdapterUnavailableError : public error {
 public:
  using error::error;
};

inline bool python_module_available(const std::string& mod) {
  std::string cmd = "python3 -c 'import " + mod + "' >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

// Handle for an external attention-based tabular baseline, bridged over a
// Python subprocess. fit() stores the featurized training data; prediction
// runs one train+predict round trip per call.
struct ExternalAdapter {
  std::string name;  // "tabnet" or "tabpfn"
  Featurizer featurizer;
  Matrix Xtr;
  std::vector<int> ytr;
  size_t n_classes = 0;

  void fit(const TabularDataset& train) {
    if (name != "tabnet" && name != "tabpfn")
      fail("unknown external adapter '" + name + "' (expected tabnet or tabpfn)");
    featurizer.mode = FeaturizeMode::margin;  // dense, imputed, standardized
    featurizer.fit(train);
    Matrix X = featurizer.transform(train);
    // Applicability guards come before any dependency probing, so callers get
    // a hard error for an out-of-contract call even on machines without the
    // optional package.
    if (name == "tabpfn") {
      if (X.size() > 1024)
        fail("tabpfn guard: training split has " + std::to_string(X.size()) +
             " rows; the in-context model accepts at most 1024");
      if (!X.empty() && X[0].size() > 100)
        fail("tabpfn guard: " + std::to_string(X[0].size()) +
             " features exceed the 100-feature limit");
    }
    std::string mod = name == "tabnet" ? "pytorch_tabnet" : "tabpfn";
    if (!python_module_available(mod))
      throw AdapterUnavailableError("adapter unavailable: " + name +
                                    " (python module '" + mod +
                                    "' is not importable)");
    Xtr = std::move(X);
    ytr = train.labels;
    n_classes = train.classes.size();
  }

  Matrix predict_proba(const TabularDataset& ds) const {
    if (Xtr.empty()) fail("external adapter used before fit");
    Matrix Xte = featurizer.transform(ds);
    std::string dir = "/tmp/tabtext_adapter_" + std::to_string(::getpid());
    std::filesystem::create_directories(dir);
    auto write_matrix = [](const std::string& path, const Matrix& m,
                           const std::vector<int>* y) {
      std::ofstream out(path);
      for (size_t i = 0; i < m.size(); ++i) {
        for (size_t j = 0; j < m[i].size(); ++j) {
          if (j) out << ',';
          out << fmt_roundtrip(m[i][j]);
        }
        if (y) out << ',' << (*y)[i];
        out << '\n';
      }
    };
    write_matrix(dir + "/train.csv", Xtr, &ytr);
    write_matrix(dir + "/test.csv", Xte, nullptr);
    std::string script;
    if (name == "tabpfn") {
      script =
          "import numpy as np\n"
          "from tabpfn import TabPFNClassifier\n"
          "tr = np.loadtxt('" + dir + "/train.csv', delimiter=',')\n"
          "te = np.loadtxt('" + dir + "/test.csv', delimiter=',', ndmin=2)\n"
          "clf = TabPFNClassifier()\n"
          "clf.fit(tr[:, :-1], tr[:, -1].astype(int))\n"
          "np.savetxt('" + dir + "/proba.csv', clf.predict_proba(te), delimiter=',')\n";
    } else {
      script =
          "import numpy as np\n"
          "from pytorch_tabnet.tab_model import TabNetClassifier\n"
          "tr = np.loadtxt('" + dir + "/train.csv', delimiter=',')\n"
          "te = np.loadtxt('" + dir + "/test.csv', delimiter=',', ndmin=2)\n"
          "clf = TabNetClassifier(seed=42, verbose=0)\n"
          "clf.fit(tr[:, :-1], tr[:, -1].astype(int), max_epochs=50, patience=0)\n"
          "np.savetxt('" + dir + "/proba.csv', clf.predict_proba(te), delimiter=',')\n";
    }
    std::ofstream(dir + "/run.py") << script;
    std::string cmd = "python3 " + dir + "/run.py >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0)
      throw AdapterUnavailableError("adapter unavailable: " + name +
                                    " subprocess failed");
    Matrix proba;
    std::ifstream in(dir + "/proba.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      std::vector<double> row;
      size_t pos = 0;
      while (pos <= line.size()) {
        size_t comma = line.find(',', pos);
        std::string cell = comma == std::string::npos ? line.substr(pos)
                                                      : line.substr(pos, comma - pos);
        auto v = parse_number(cell);
        if (!v) fail("adapter returned a malformed probability cell");
        row.push_back(*v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      proba.push_back(std::move(row));
    }
    std::filesystem::remove_all(dir);
    if (proba.size() != Xte.size())
      fail("adapter returned " + std::to_string(proba.size()) +
           " probability rows for " + std::to_string(Xte.size()) + " inputs");
    return proba;
  }
};

}  // namespace tabtext
