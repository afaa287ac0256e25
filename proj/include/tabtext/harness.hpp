#pragma once

// Config-driven experiment runner: the three data-level experiments
// (feature-selection ablation, scaling ablation, imputation sensitivity), the
// desk-scale benchmark against classical baselines and external adapters, and
// the backbone comparison sweep — with run records, deterministic artifact
// naming, and text/JSON/CSV report emission.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabtext/builtin_templates.hpp"
#include "tabtext/common.hpp"
#include "tabtext/curation.hpp"
#include "tabtext/dataset.hpp"
#include "tabtext/lm.hpp"
#include "tabtext/metrics.hpp"
#include "tabtext/model_zoo.hpp"
#include "tabtext/registry.hpp"
#include "tabtext/template_engine.hpp"

namespace tabtext {

// ------------------------------------------------------------ configuration

enum class ExperimentKind {
  feature_selection_ablation,
  scaling_ablation,
  imputation_sensitivity,
  sota_benchmark,
  backbone_benchmark,
};

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::feature_selection_ablation: return "feature_selection_ablation";
    case ExperimentKind::scaling_ablation: return "scaling_ablation";
    case ExperimentKind::imputation_sensitivity: return "imputation_sensitivity";
    case ExperimentKind::sota_benchmark: return "sota_benchmark";
    case ExperimentKind::backbone_benchmark: return "backbone_benchmark";
  }
  return "?";
}

inline ExperimentKind experiment_from_name(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::feature_selection_ablation, ExperimentKind::scaling_ablation,
        ExperimentKind::imputation_sensitivity, ExperimentKind::sota_benchmark,
        ExperimentKind::backbone_benchmark})
    if (s == experiment_name(k)) return k;
  fail("unknown experiment: '" + s +
       "' (expected feature_selection_ablation, scaling_ablation, "
       "imputation_sensitivity, sota_benchmark, or backbone_benchmark)");
}

// Models accepted by the benchmark experiment.
inline const std::set<std::string>& benchmark_model_names() {
  static const std::set<std::string> names{"svm_rbf", "gbdt_a",  "gbdt_b",
                                           "tabnet",  "tabpfn", "tablm"};
  return names;
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::sota_benchmark;
  std::string dataset;
  std::string template_id;        // empty → same as dataset
  std::string source = "auto";    // auto | file | synth
  std::vector<std::string> models;
  std::vector<uint64_t> seeds{42};
  std::optional<size_t> subsample_n;
  bool full_scale = false;
  std::string output_dir = "runs";
  std::string data_dir;

  // curation knobs
  double tau = 0.0;                         // selection threshold override
  std::string plan_name;                    // builtin plan override
  std::vector<std::string> scale_features;  // scaling-ablation targets

  // language-model knobs
  std::string lm_backbone = "distilbert";
  int lm_epochs = 0;           // 0 → trainer default
  int lm_max_seq = 0;          // 0 → trainer default
  bool allow_truncation = false;

  std::string resolved_template() const {
    return template_id.empty() ? dataset : template_id;
  }

  void validate() const {
    builtin_info(dataset);  // throws for unknown datasets
    builtin_template(resolved_template());
    if (seeds.empty()) fail("config needs at least one seed");
    if (source != "auto" && source != "file" && source != "synth")
      fail("config source must be auto, file, or synth");
    if (experiment == ExperimentKind::sota_benchmark)
      for (const auto& m : models)
        if (!benchmark_model_names().count(m))
          fail("unknown benchmark model: '" + m +
               "' (expected svm_rbf, gbdt_a, gbdt_b, tabnet, tabpfn, or tablm)");
    if (experiment == ExperimentKind::backbone_benchmark)
      for (const auto& m : models) resolve_backbone(m);
    if (!plan_name.empty()) builtin_plan(plan_name);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["experiment"] = experiment_name(experiment);
    j["dataset"] = dataset;
    if (!template_id.empty()) j["template"] = template_id;
    j["source"] = source;
    if (!models.empty()) j["models"] = models;
    j["seeds"] = seeds;
    if (subsample_n) j["subsample"] = *subsample_n;
    j["full_scale"] = full_scale;
    j["output_dir"] = output_dir;
    if (!data_dir.empty()) j["data_dir"] = data_dir;
    if (tau != 0.0) j["tau"] = tau;
    if (!plan_name.empty()) j["plan"] = plan_name;
    if (!scale_features.empty()) j["scale_features"] = scale_features;
    j["lm_backbone"] = lm_backbone;
    if (lm_epochs) j["lm_epochs"] = lm_epochs;
    if (lm_max_seq) j["lm_max_seq"] = lm_max_seq;
    if (allow_truncation) j["allow_truncation"] = true;
    return j;
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    int version = j.value("schema_version", 1);
    if (version != 1) fail("unsupported config schema_version: " + std::to_string(version));
    ExperimentConfig c;
    c.experiment = experiment_from_name(j.at("experiment"));
    c.dataset = j.at("dataset");
    c.template_id = j.value("template", "");
    c.source = j.value("source", "auto");
    if (j.contains("models")) c.models = j["models"].get<std::vector<std::string>>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<uint64_t>>();
    if (j.contains("subsample")) c.subsample_n = j["subsample"].get<size_t>();
    c.full_scale = j.value("full_scale", false);
    c.output_dir = j.value("output_dir", "runs");
    c.data_dir = j.value("data_dir", "");
    c.tau = j.value("tau", 0.0);
    c.plan_name = j.value("plan", "");
    if (j.contains("scale_features"))
      c.scale_features = j["scale_features"].get<std::vector<std::string>>();
    c.lm_backbone = j.value("lm_backbone", "distilbert");
    c.lm_epochs = j.value("lm_epochs", 0);
    c.lm_max_seq = j.value("lm_max_seq", 0);
    c.allow_truncation = j.value("allow_truncation", false);
    return c;
  }
};

// ------------------------------------------------------------ run records

struct ArmResult {
  std::string arm;
  uint64_t seed = 0;
  EvalReport report;
};

namespace harness_detail {

inline std::string iso_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.model = j.value("model", "");
  r.n = j.value("n", size_t{0});
  r.n_classes = j.value("n_classes", size_t{0});
  if (j.value("failed", false)) {
    r.failed = true;
    r.failure = j.value("failure", "");
    return r;
  }
  r.accuracy = j.value("accuracy", 0.0);
  r.precision = j.value("precision", 0.0);
  r.recall = j.value("recall", 0.0);
  r.f1 = j.value("f1", 0.0);
  if (j.contains("auroc")) {
    r.auroc = j["auroc"];
    r.has_auroc = true;
  }
  if (j.contains("auprc")) {
    r.auprc = j["auprc"];
    r.has_auprc = true;
  }
  r.mcc = j.value("mcc", 0.0);
  if (j.contains("loss")) {
    r.loss = j["loss"];
    r.has_loss = true;
  }
  r.runtime_seconds = j.value("runtime_seconds", 0.0);
  r.samples_per_second = j.value("samples_per_second", 0.0);
  if (j.contains("per_class"))
    for (const auto& pc : j["per_class"])
      r.per_class.push_back({pc.value("precision", 0.0), pc.value("recall", 0.0),
                             pc.value("f1", 0.0)});
  return r;
}

}  // namespace harness_detail

struct RunRecord {
  ExperimentConfig config;
  std::string dataset;
  std::string input_hash;  // content hash of config + data
  std::string started_at, finished_at;
  std::vector<ArmResult> arms;
  nlohmann::json artifacts = nlohmann::json::object();
  std::vector<std::string> notes;
  bool all_completed = true;

  std::string stem() const {
    return std::string(experiment_name(config.experiment)) + "_" + dataset + "_" +
           input_hash;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["dataset"] = dataset;
    j["input_hash"] = input_hash;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : arms) {
      nlohmann::json e;
      e["arm"] = a.arm;
      e["seed"] = a.seed;
      e["report"] = a.report.to_json();
      arr.push_back(e);
    }
    j["arms"] = arr;
    j["artifacts"] = artifacts;
    j["notes"] = notes;
    j["all_completed"] = all_completed;
    return j;
  }

  static RunRecord from_json(const nlohmann::json& j) {
    RunRecord r;
    r.config = ExperimentConfig::from_json(j.at("config"));
    r.dataset = j.at("dataset");
    r.input_hash = j.at("input_hash");
    r.started_at = j.value("started_at", "");
    r.finished_at = j.value("finished_at", "");
    for (const auto& e : j.at("arms")) {
      ArmResult a;
      a.arm = e.at("arm");
      a.seed = e.at("seed");
      a.report = harness_detail::report_from_json(e.at("report"));
      r.arms.push_back(std::move(a));
    }
    r.artifacts = j.value("artifacts", nlohmann::json::object());
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
    r.all_completed = j.value("all_completed", true);
    return r;
  }
};

// ------------------------------------------------------------ helpers

namespace harness_detail {

inline std::string dataset_hash(const TabularDataset& ds) {
  Fnv1a64 h;
  h.update(ds.name);
  h.update(ds.label_column);
  for (const auto& c : ds.classes) h.update(c);
  for (int y : ds.labels) h.update(static_cast<uint64_t>(y));
  for (const auto& col : ds.features) {
    h.update(col.name);
    h.update(kind_name(col.kind));
    for (size_t i = 0; i < col.size(); ++i) {
      if (col.is_missing(i)) {
        h.update("?");
      } else if (col.kind == FeatureKind::numeric) {
        h.update(fmt_roundtrip(col.num(i)));
      } else {
        h.update(col.str(i));
      }
    }
  }
  return h.hex();
}

inline std::string input_hash(const ExperimentConfig& cfg, const TabularDataset& ds) {
  Fnv1a64 h;
  h.update(cfg.to_json().dump());
  h.update(dataset_hash(ds));
  return h.hex();
}

// Load the configured dataset and apply desk-scale limits. Every deviation
// from the raw corpus lands in `notes`.
inline TabularDataset load_for_run(const ExperimentConfig& cfg,
                                   std::vector<std::string>& notes) {
  TabularDataset ds;
  if (cfg.source == "synth") {
    ds = synth_builtin(cfg.dataset);
    notes.push_back("dataset: generated replica (source=synth)");
  } else {
    try {
      ds = register_builtin(cfg.dataset, cfg.data_dir);
    } catch (const error& e) {
      if (cfg.source == "file") throw;
      ds = synth_builtin(cfg.dataset);
      notes.push_back("dataset: file absent, using generated replica (" +
                      std::string(e.what()) + ")");
    }
  }

  size_t cap = 0;
  if (cfg.subsample_n) {
    cap = *cfg.subsample_n;
  } else if (!cfg.full_scale) {
    if (cfg.dataset == "fraud") cap = 20000;
    if (cfg.dataset == "crime") cap = 50000;
  }
  if (cap > 0 && cap < ds.n_rows()) {
    ds = subsample(ds, cap, cfg.seeds.front());
    notes.push_back("desk scale: stratified subsample to " + std::to_string(cap) +
                    " rows (use --full-scale or subsample: null to lift)");
  }
  return ds;
}

// Selection plan for LM arms: explicit builtin plan, threshold fit on the
// train split, or the dataset's published default.
inline CurationPlan selection_plan(const ExperimentConfig& cfg,
                                   const TabularDataset& train,
                                   std::vector<std::string>& notes) {
  if (!cfg.plan_name.empty()) return builtin_plan(cfg.plan_name);
  if (cfg.tau > 0.0) {
    CurationPlan p;
    p.dataset = train.name;
    p.method = "anova_f";
    p.tau = cfg.tau;
    p.fit_population = "train";
    p.selected = select_by_threshold(anova_f_scores(train).scores, cfg.tau);
    return p;
  }
  if (train.name == "wine") return builtin_plan("wine_paper_selected");
  if (train.name == "diabetes") return builtin_plan("diabetes_selected");
  if (train.name == "heloc") return builtin_plan("heloc_selected");
  if (train.name == "fraud") return builtin_plan("fraud_paper_selected");
  if (train.name == "cancer") {
    // desk scale: keep the strongest ≤200 genes by train-split ANOVA score
    CurationPlan p;
    p.dataset = "cancer";
    p.method = "anova_f_top200";
    p.fit_population = "train";
    auto scores = ranked(anova_f_scores(train).scores);
    std::set<std::string> keep;
    for (size_t i = 0; i < scores.size() && i < 200; ++i) keep.insert(scores[i].feature);
    p.selected = std::move(keep);
    notes.push_back("desk scale: cancer restricted to top-200 train-split features");
    return p;
  }
  fail("no selection plan declared for dataset '" + train.name +
       "'; set tau or a builtin plan name");
}

// Classical-model view of a plan: drop unselected features, rescale numerics.
inline TabularDataset apply_plan_to_dataset(const TabularDataset& ds,
                                            const CurationPlan& plan) {
  TabularDataset out = ds;
  std::vector<Column> kept;
  for (auto& col : out.features) {
    if (!plan.keeps(col.name)) continue;
    if (const FittedScaler* s = plan.scaler_for(col.name)) {
      if (col.kind != FeatureKind::numeric)
        fail("scaling requested on categorical feature: " + col.name);
      for (size_t i = 0; i < col.size(); ++i)
        if (!col.is_missing(i)) col.nums[i] = apply_scaler(col.nums[i], *s);
    }
    kept.push_back(std::move(col));
  }
  out.features = std::move(kept);
  return out;
}

// Desk-scale hyperparameter grids: one representative slice per axis family.
// The published full grids stay available behind full_scale.
inline HyperGrid reduced_grid(ModelFamily family) {
  HyperGrid g;
  switch (family) {
    case ModelFamily::gbdt_a:
      g.axes = {{"max_depth", detail::num_axis({2, 3, 4, 6})},
                {"lambda_l1", detail::num_axis({1e-8})},
                {"lambda_l2", detail::num_axis({1e-8, 1.0})},
                {"eta", detail::num_axis({0.03, 0.1, 0.3})}};
      return g;
    case ModelFamily::gbdt_b:
      g.axes = {{"num_leaves", detail::num_axis({2, 8, 31})},
                {"lambda_l1", detail::num_axis({1e-8})},
                {"lambda_l2", detail::num_axis({1e-8, 1.0})},
                {"learning_rate", detail::num_axis({0.03, 0.1, 0.3})}};
      return g;
    case ModelFamily::svm_rbf:
      g.axes = {{"C", detail::num_axis({0.1, 1, 10, 100})},
                {"gamma", {ParamValue::token("scale"), ParamValue::token("auto"),
                           ParamValue::number(0.1)}},
                {"kernel", {ParamValue::token("rbf")}}};
      return g;
  }
  fail("unknown model family");
}

// Fixed mid-grid settings for ablation arms, where the comparison — not the
// tuning — is the point.
inline Params ablation_params(ModelFamily family) {
  switch (family) {
    case ModelFamily::gbdt_a:
      return {{"max_depth", ParamValue::number(4)},
              {"lambda_l1", ParamValue::number(1e-8)},
              {"lambda_l2", ParamValue::number(1.0)},
              {"eta", ParamValue::number(0.1)}};
    case ModelFamily::gbdt_b:
      return {{"num_leaves", ParamValue::number(31)},
              {"lambda_l1", ParamValue::number(1e-8)},
              {"lambda_l2", ParamValue::number(1.0)},
              {"learning_rate", ParamValue::number(0.1)}};
    case ModelFamily::svm_rbf:
      return {{"C", ParamValue::number(1.0)},
              {"gamma", ParamValue::token("scale")},
              {"kernel", ParamValue::token("rbf")}};
  }
  fail("unknown model family");
}

inline TrainConfig lm_config(const ExperimentConfig& cfg, uint64_t seed) {
  TrainConfig t;
  t.seed = seed;
  if (cfg.lm_epochs > 0) t.epochs = cfg.lm_epochs;
  if (cfg.lm_max_seq > 0) t.max_sequence_length = cfg.lm_max_seq;
  return t;
}

// Refuse silently-truncated corpora unless the config opts in.
inline void check_truncation(const std::vector<SerializedExample>& corpus,
                             int max_seq, bool allow, const std::string& what) {
  if (allow) return;
  for (const auto& ex : corpus)
    if (lmdetail::word_tokens(ex.text).size() + 1 > static_cast<size_t>(max_seq))
      fail(what + ": serialized rows exceed the sequence limit of " +
           std::to_string(max_seq) + " tokens; re-run with allow_truncation");
}

struct LmArm {
  EvalReport report;
  LogitMatrix logits;
  std::vector<int> y_true;
};

// Fine-tune on the train rendering, evaluate on the test rendering.
inline LmArm run_lm_arm(const TabularDataset& train, const TabularDataset& test,
                        const SerializationTemplate& tmpl, const CurationPlan* plan,
                        const ExperimentConfig& cfg, uint64_t seed,
                        const std::string& arm_label) {
  auto train_corpus = render_dataset(train, tmpl, plan);
  auto test_corpus = render_dataset(test, tmpl, plan);
  TrainConfig tc = lm_config(cfg, seed);
  check_truncation(train_corpus, tc.max_sequence_length, cfg.allow_truncation,
                   arm_label);

  LmClassifier clf = fine_tune(train_corpus, cfg.lm_backbone, tc, train.classes);

  std::vector<std::string> texts;
  LmArm arm;
  for (const auto& ex : test_corpus) {
    texts.push_back(ex.text);
    arm.y_true.push_back(ex.label);
  }
  auto t0 = std::chrono::steady_clock::now();
  arm.logits = clf.predict_logits(texts);
  auto t1 = std::chrono::steady_clock::now();

  Matrix proba(arm.logits.rows());
  std::vector<int> y_pred;
  for (size_t i = 0; i < arm.logits.rows(); ++i) {
    const auto& row = arm.logits.values[i];
    double mx = *std::max_element(row.begin(), row.end());
    double sum = 0;
    proba[i].resize(row.size());
    for (size_t c = 0; c < row.size(); ++c) {
      proba[i][c] = std::exp(row[c] - mx);
      sum += proba[i][c];
    }
    for (auto& v : proba[i]) v /= sum;
    y_pred.push_back(static_cast<int>(detail::argmax_row(proba[i])));
  }
  arm.report = evaluate(arm.y_true, y_pred, &proba, train.n_classes());
  arm.report.model = "tablm(" + cfg.lm_backbone + ")";
  arm.report.loss = clf.eval_loss(test_corpus);
  arm.report.has_loss = true;
  arm.report.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
  arm.report.samples_per_second =
      arm.report.runtime_seconds > 0
          ? static_cast<double>(texts.size()) / arm.report.runtime_seconds
          : 0.0;
  return arm;
}

// Grid-search a classical family on the train split and evaluate held out.
inline EvalReport run_classical_arm(ModelFamily family, const TabularDataset& train,
                                    const TabularDataset& test,
                                    const ExperimentConfig& cfg, uint64_t seed,
                                    nlohmann::json* best_params_out) {
  GridSearchOptions opt;
  opt.seed = seed;
  opt.exclude_columns = default_model_excludes(train.name);
  HyperGrid grid = cfg.full_scale ? builtin_grid(family) : reduced_grid(family);
  FitResult fit = grid_search(family, grid, train, opt);
  if (best_params_out) *best_params_out = params_to_json(fit.best_params);

  Matrix proba;
  ProbeResult probe = runtime_probe(
      [&] { proba = predict_proba(fit, test); }, test.n_rows());
  std::vector<int> y_pred;
  for (const auto& row : proba)
    y_pred.push_back(static_cast<int>(detail::argmax_row(row)));
  EvalReport r = evaluate(test.labels, y_pred, &proba, train.n_classes());
  r.model = family_name(family);
  r.runtime_seconds = probe.wall_seconds;
  r.samples_per_second = probe.samples_per_second;
  return r;
}

}  // namespace harness_detail

// ------------------------------------------------------------ SOTA manifest

// Display-only literature numbers; shown beside measured results, never
// computed from them.
inline std::string sota_constant(const std::string& dataset) {
  static const std::map<std::string, std::string> manifest = {
      {"iris", "1.0000 (Acc)"},   {"wine", "0.9800 (Acc)"},
      {"diabetes", "0.7879 (Acc)"}, {"titanic", "0.7985 (Acc)"},
      {"fraud", "0.9530 (AUROC)"}};
  auto it = manifest.find(dataset);
  return it == manifest.end() ? "N/A" : it->second;
}

// ------------------------------------------------------------ experiments

// Paired LM runs with and without feature selection; one pair per seed, with
// an "Improved?" verdict on held-out AUROC.
inline RunRecord run_feature_selection_ablation(ExperimentConfig cfg) {
  using namespace harness_detail;
  cfg.experiment = ExperimentKind::feature_selection_ablation;
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.dataset = cfg.dataset;
  rec.started_at = iso_now();
  TabularDataset ds = load_for_run(cfg, rec.notes);
  rec.input_hash = input_hash(cfg, ds);
  auto tmpl = builtin_template(cfg.resolved_template());

  nlohmann::json verdicts = nlohmann::json::array();
  nlohmann::json plans = nlohmann::json::array();
  for (uint64_t seed : cfg.seeds) {
    SplitResult sp = split(ds, 0.2, seed);
    CurationPlan plan = selection_plan(cfg, sp.train, rec.notes);
    plans.push_back(plan.to_json());

    LmArm without = run_lm_arm(sp.train, sp.test, tmpl, nullptr, cfg, seed,
                               "without_selection");
    LmArm with = run_lm_arm(sp.train, sp.test, tmpl, &plan, cfg, seed,
                            "with_selection");
    rec.arms.push_back({"without_selection", seed, without.report});
    rec.arms.push_back({"with_selection", seed, with.report});

    std::string verdict = "---";
    if (with.report.has_auroc && without.report.has_auroc) {
      if (with.report.auroc > without.report.auroc) verdict = "yes";
      else if (with.report.auroc < without.report.auroc) verdict = "no";
    }
    verdicts.push_back({{"seed", seed},
                        {"auroc_without", without.report.auroc},
                        {"auroc_with", with.report.auroc},
                        {"f1_without", without.report.f1},
                        {"f1_with", with.report.f1},
                        {"improved", verdict}});
  }
  rec.artifacts["verdicts"] = verdicts;
  rec.artifacts["plans"] = plans;
  rec.finished_at = iso_now();
  return rec;
}

// Four scaling arms (none / standardize / normalize / log_transform) over the
// configured numeric features, evaluated for each configured model.
inline RunRecord run_scaling_ablation(ExperimentConfig cfg) {
  using namespace harness_detail;
  cfg.experiment = ExperimentKind::scaling_ablation;
  if (cfg.models.empty()) cfg.models = {"gbdt_a"};
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.dataset = cfg.dataset;
  rec.started_at = iso_now();
  TabularDataset ds = load_for_run(cfg, rec.notes);
  rec.input_hash = input_hash(cfg, ds);
  auto tmpl = builtin_template(cfg.resolved_template());

  std::vector<std::string> features = cfg.scale_features;
  if (features.empty()) {
    if (cfg.dataset == "titanic") features = {"Age", "Fare"};
    else
      fail("scaling ablation needs scale_features for dataset '" + cfg.dataset + "'");
  }
  for (const auto& f : features)
    if (ds.col(f).kind != FeatureKind::numeric)
      fail("scaling requested on categorical feature: " + f);

  uint64_t seed = cfg.seeds.front();
  SplitResult sp = split(ds, 0.2, seed);

  for (ScaleKind kind : {ScaleKind::none, ScaleKind::standardize, ScaleKind::normalize,
                         ScaleKind::log_transform}) {
    CurationPlan plan;
    plan.dataset = cfg.dataset;
    plan.method = "scaling_ablation";
    plan.fit_population = "train";
    if (kind != ScaleKind::none)
      for (const auto& f : features)
        plan.scaling[f] = fit_scaler(sp.train.col(f), kind);

    for (const auto& model : cfg.models) {
      std::string arm = std::string(scale_name(kind)) + ":" + model;
      try {
        EvalReport r;
        if (model == "tablm") {
          r = run_lm_arm(sp.train, sp.test, tmpl, &plan, cfg, seed, arm).report;
        } else if (model == "gbdt_a" || model == "gbdt_b" || model == "svm_rbf") {
          ModelFamily fam = family_from_name(model);
          TabularDataset tr = apply_plan_to_dataset(sp.train, plan);
          TabularDataset te = apply_plan_to_dataset(sp.test, plan);
          FitResult fit = fit_single(fam, ablation_params(fam), tr,
                                     default_model_excludes(cfg.dataset));
          Matrix proba;
          ProbeResult probe =
              runtime_probe([&] { proba = predict_proba(fit, te); }, te.n_rows());
          std::vector<int> yp;
          for (const auto& row : proba)
            yp.push_back(static_cast<int>(detail::argmax_row(row)));
          r = evaluate(te.labels, yp, &proba, tr.n_classes());
          r.model = model;
          r.runtime_seconds = probe.wall_seconds;
          r.samples_per_second = probe.samples_per_second;
        } else {
          fail("scaling ablation supports gbdt_a, gbdt_b, svm_rbf, and tablm; got " +
               model);
        }
        rec.arms.push_back({arm, seed, r});
      } catch (const error& e) {
        EvalReport r;
        r.model = model;
        r.failed = true;
        r.failure = e.what();
        rec.arms.push_back({arm, seed, r});
        rec.all_completed = false;
      }
    }
  }
  rec.artifacts["scale_features"] = features;
  rec.finished_at = iso_now();
  return rec;
}

// Baseline (clause dropped), an identical-corpus control, and two filler
// registers; Δ-logit of every arm against the baseline on the shared test
// rows, plus scatter data.
inline RunRecord run_imputation_sensitivity(ExperimentConfig cfg) {
  using namespace harness_detail;
  cfg.experiment = ExperimentKind::imputation_sensitivity;
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.dataset = cfg.dataset;
  rec.started_at = iso_now();
  TabularDataset ds = load_for_run(cfg, rec.notes);
  rec.input_hash = input_hash(cfg, ds);
  if (!ds.card.flags.count("missing_data"))
    fail("nothing to impute: dataset '" + cfg.dataset +
         "' has no recorded missing data");
  auto tmpl = builtin_template(cfg.resolved_template());

  uint64_t seed = cfg.seeds.front();
  SplitResult sp = split(ds, 0.2, seed);

  LmArm baseline = run_lm_arm(sp.train, sp.test, tmpl, nullptr, cfg, seed, "baseline");
  rec.arms.push_back({"baseline", seed, baseline.report});

  nlohmann::json deltas = nlohmann::json::object();
  nlohmann::json scatter = nlohmann::json::array();
  struct ArmSpec {
    std::string name;
    int filler_register;  // 0 = identical corpus control
  };
  for (const ArmSpec& spec :
       {ArmSpec{"control", 0}, ArmSpec{"impute_1", 1}, ArmSpec{"impute_2", 2}}) {
    CurationPlan plan;
    plan.dataset = cfg.dataset;
    plan.method = spec.filler_register == 0 ? "control" : "filler_imputation";
    if (spec.filler_register != 0)
      plan.imputation = builtin_fillers(cfg.dataset, spec.filler_register);

    LmArm arm = run_lm_arm(sp.train, sp.test, tmpl,
                           spec.filler_register == 0 ? nullptr : &plan, cfg, seed,
                           spec.name);
    rec.arms.push_back({spec.name, seed, arm.report});

    LogitDelta d = logit_delta(baseline.logits, arm.logits);
    deltas[spec.name] = {{"mean_abs", d.mean_abs},
                         {"flipped_fraction", d.flipped_fraction}};
    for (size_t i = 0; i < d.delta.size(); ++i)
      scatter.push_back({{"sample", i},
                         {"d_logit_c0", d.delta[i][0]},
                         {"d_logit_c1", d.delta[i].size() > 1 ? d.delta[i][1] : 0.0},
                         {"arm", spec.name}});
  }
  rec.artifacts["logit_deltas"] = deltas;
  rec.artifacts["scatter"] = scatter;
  rec.finished_at = iso_now();
  return rec;
}

// Per-model benchmark table with failure isolation and the display-only SOTA
// constant.
inline RunRecord run_sota_benchmark(ExperimentConfig cfg) {
  using namespace harness_detail;
  cfg.experiment = ExperimentKind::sota_benchmark;
  if (cfg.models.empty()) cfg.models = {"svm_rbf", "gbdt_a", "gbdt_b", "tablm"};
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.dataset = cfg.dataset;
  rec.started_at = iso_now();
  TabularDataset ds = load_for_run(cfg, rec.notes);
  rec.input_hash = input_hash(cfg, ds);
  auto tmpl = builtin_template(cfg.resolved_template());

  uint64_t seed = cfg.seeds.front();
  SplitResult sp = split(ds, 0.2, seed);
  nlohmann::json best_params = nlohmann::json::object();

  for (const auto& model : cfg.models) {
    try {
      EvalReport r;
      if (model == "tablm") {
        const CurationPlan* plan_ptr = nullptr;
        CurationPlan plan;
        if (!cfg.plan_name.empty() || cfg.dataset == "cancer") {
          plan = selection_plan(cfg, sp.train, rec.notes);
          plan_ptr = &plan;
        }
        r = run_lm_arm(sp.train, sp.test, tmpl, plan_ptr, cfg, seed, model).report;
      } else if (model == "tabnet" || model == "tabpfn") {
        ExternalAdapter adapter;
        adapter.name = model;
        adapter.fit(sp.train);
        Matrix proba;
        ProbeResult probe = runtime_probe(
            [&] { proba = adapter.predict_proba(sp.test); }, sp.test.n_rows());
        std::vector<int> yp;
        for (const auto& row : proba)
          yp.push_back(static_cast<int>(detail::argmax_row(row)));
        r = evaluate(sp.test.labels, yp, &proba, ds.n_classes());
        r.model = model;
        r.runtime_seconds = probe.wall_seconds;
        r.samples_per_second = probe.samples_per_second;
      } else {
        nlohmann::json bp;
        r = run_classical_arm(family_from_name(model), sp.train, sp.test, cfg, seed,
                              &bp);
        best_params[model] = bp;
      }
      rec.arms.push_back({model, seed, r});
    } catch (const error& e) {
      EvalReport r;
      r.model = model;
      r.failed = true;
      r.failure = e.what();
      rec.arms.push_back({model, seed, r});
      rec.all_completed = false;
    }
  }
  rec.artifacts["sota_constant"] = sota_constant(cfg.dataset);
  rec.artifacts["best_params"] = best_params;
  rec.finished_at = iso_now();
  return rec;
}

// Appendix-style backbone sweep through the shared benchmark protocol.
inline RunRecord run_backbone_benchmark(ExperimentConfig cfg) {
  using namespace harness_detail;
  cfg.experiment = ExperimentKind::backbone_benchmark;
  if (cfg.models.empty())
    for (const auto& b : backbone_catalog()) cfg.models.push_back(b.name);
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.dataset = cfg.dataset;
  rec.started_at = iso_now();
  TabularDataset ds = load_for_run(cfg, rec.notes);
  rec.input_hash = input_hash(cfg, ds);

  TrainConfig tc = lm_config(cfg, cfg.seeds.front());
  auto rows = backbone_benchmark(cfg.models, ds, builtin_template(cfg.resolved_template()), tc);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : rows) {
    EvalReport r;
    r.model = row.backbone;
    if (!row.ok) {
      r.failed = true;
      r.failure = row.error;
      rec.all_completed = false;
    } else {
      r.n_classes = ds.n_classes();
      r.accuracy = row.accuracy;
      r.precision = row.precision;
      r.recall = row.recall;
      r.f1 = row.f1;
      r.auroc = row.auroc;
      r.has_auroc = true;
      r.auprc = row.auprc;
      r.has_auprc = true;
      r.loss = row.loss;
      r.has_loss = true;
      r.runtime_seconds = row.runtime_seconds;
      r.samples_per_second = row.samples_per_second;
    }
    rec.arms.push_back({row.backbone, cfg.seeds.front(), r});
    table.push_back({{"backbone", row.backbone},
                     {"ok", row.ok},
                     {"train_seconds", row.train_seconds},
                     {"truncated", row.truncated}});
  }
  rec.artifacts["backbones"] = table;
  rec.finished_at = iso_now();
  return rec;
}

inline RunRecord run(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::feature_selection_ablation:
      return run_feature_selection_ablation(cfg);
    case ExperimentKind::scaling_ablation: return run_scaling_ablation(cfg);
    case ExperimentKind::imputation_sensitivity:
      return run_imputation_sensitivity(cfg);
    case ExperimentKind::sota_benchmark: return run_sota_benchmark(cfg);
    case ExperimentKind::backbone_benchmark: return run_backbone_benchmark(cfg);
  }
  fail("unknown experiment kind");
}

// ------------------------------------------------------------ report emission

enum class ReportFormat { text_table, json, plot_data };

namespace harness_detail {

inline std::string cell(double v) { return fmt_fixed(v, 4); }

inline std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return "";
  std::vector<size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    for (size_t c = 0; c < rows[ri].size(); ++c) {
      if (c) out << "  ";
      out << rows[ri][c]
          << std::string(width[c] - rows[ri][c].size(), ' ');
    }
    out << "\n";
    if (ri == 0) {
      size_t total = 0;
      for (size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
      out << std::string(total, '-') << "\n";
    }
  }
  return out.str();
}

inline std::string record_text(const RunRecord& rec) {
  std::ostringstream out;
  out << "experiment: " << experiment_name(rec.config.experiment) << "\n"
      << "dataset:    " << rec.dataset << "\n"
      << "hash:       " << rec.input_hash << "\n"
      << "started:    " << rec.started_at << "  finished: " << rec.finished_at << "\n";
  for (const auto& n : rec.notes) out << "note:       " << n << "\n";
  out << "\n";

  std::vector<std::vector<std::string>> rows;
  bool backbone = rec.config.experiment == ExperimentKind::backbone_benchmark;
  if (backbone) {
    rows.push_back({"Backbone", "Loss", "Accuracy", "Precision", "Recall", "F1",
                    "AUROC", "AUPRC", "Runtime(s)", "Samples/s"});
  } else {
    rows.push_back({"Arm", "Seed", "Accuracy", "F1", "AUROC", "MCC"});
  }
  for (const auto& a : rec.arms) {
    std::vector<std::string> r;
    if (backbone) {
      r.push_back(a.arm);
      if (a.report.failed) {
        for (int i = 0; i < 9; ++i) r.push_back("---");
      } else {
        r.push_back(cell(a.report.loss));
        r.push_back(cell(a.report.accuracy));
        r.push_back(cell(a.report.precision));
        r.push_back(cell(a.report.recall));
        r.push_back(cell(a.report.f1));
        r.push_back(a.report.has_auroc ? cell(a.report.auroc) : "---");
        r.push_back(a.report.has_auprc ? cell(a.report.auprc) : "---");
        r.push_back(cell(a.report.runtime_seconds));
        r.push_back(fmt_fixed(a.report.samples_per_second, 3));
      }
    } else {
      r.push_back(a.arm);
      r.push_back(std::to_string(a.seed));
      if (a.report.failed) {
        for (int i = 0; i < 4; ++i) r.push_back("---");
      } else {
        r.push_back(cell(a.report.accuracy));
        r.push_back(cell(a.report.f1));
        r.push_back(a.report.has_auroc ? cell(a.report.auroc) : "---");
        r.push_back(cell(a.report.mcc));
      }
    }
    rows.push_back(std::move(r));
  }
  out << aligned_table(rows);

  for (const auto& a : rec.arms)
    if (a.report.failed)
      out << "\n" << a.arm << " unavailable: " << a.report.failure << "\n";

  if (rec.config.experiment == ExperimentKind::sota_benchmark)
    out << "\ncurrent SOTA (literature): " << rec.artifacts.value("sota_constant", "N/A")
        << "\n";
  if (rec.config.experiment == ExperimentKind::feature_selection_ablation &&
      rec.artifacts.contains("verdicts")) {
    std::vector<std::vector<std::string>> v;
    v.push_back({"Seed", "AUROC w/o", "AUROC w/", "Improved?"});
    for (const auto& e : rec.artifacts["verdicts"])
      v.push_back({std::to_string(e.value("seed", uint64_t{0})),
                   cell(e.value("auroc_without", 0.0)),
                   cell(e.value("auroc_with", 0.0)), e.value("improved", "---")});
    out << "\n" << aligned_table(v);
  }
  if (rec.config.experiment == ExperimentKind::imputation_sensitivity &&
      rec.artifacts.contains("logit_deltas")) {
    std::vector<std::vector<std::string>> v;
    v.push_back({"Arm", "mean|dLogit|", "Flipped"});
    for (const auto& [name, d] : rec.artifacts["logit_deltas"].items())
      v.push_back({name, cell(d.value("mean_abs", 0.0)),
                   cell(d.value("flipped_fraction", 0.0))});
    out << "\n" << aligned_table(v);
  }
  return out.str();
}

inline std::string record_csv(const RunRecord& rec) {
  std::ostringstream out;
  if (rec.config.experiment == ExperimentKind::imputation_sensitivity &&
      rec.artifacts.contains("scatter")) {
    out << "sample,d_logit_c0,d_logit_c1,arm\n";
    for (const auto& p : rec.artifacts["scatter"])
      out << p.value("sample", size_t{0}) << "," << fmt_roundtrip(p.value("d_logit_c0", 0.0))
          << "," << fmt_roundtrip(p.value("d_logit_c1", 0.0)) << ","
          << p.value("arm", "") << "\n";
    return out.str();
  }
  out << "arm,seed,accuracy,f1,auroc,mcc,loss,runtime_seconds\n";
  for (const auto& a : rec.arms) {
    out << a.arm << "," << a.seed << ",";
    if (a.report.failed) {
      out << ",,,,,\n";
      continue;
    }
    out << fmt_roundtrip(a.report.accuracy) << "," << fmt_roundtrip(a.report.f1) << ",";
    if (a.report.has_auroc) out << fmt_roundtrip(a.report.auroc);
    out << "," << fmt_roundtrip(a.report.mcc) << ",";
    if (a.report.has_loss) out << fmt_roundtrip(a.report.loss);
    out << "," << fmt_roundtrip(a.report.runtime_seconds) << "\n";
  }
  return out.str();
}

}  // namespace harness_detail

// Write the record in the requested format; returns the file path. Naming is
// deterministic: <experiment>_<dataset>_<hash>.<ext>.
inline std::string emit_report(const RunRecord& rec, ReportFormat format,
                               std::string out_dir = "") {
  namespace fs = std::filesystem;
  if (out_dir.empty()) out_dir = rec.config.output_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) fail("cannot create output dir: " + out_dir);

  std::string ext = format == ReportFormat::text_table ? "txt"
                    : format == ReportFormat::json     ? "json"
                                                       : "csv";
  std::string path = out_dir + "/" + rec.stem() + "." + ext;
  std::ofstream f(path, std::ios::binary);
  if (!f) fail("unwritable output dir: " + out_dir);
  switch (format) {
    case ReportFormat::text_table: f << harness_detail::record_text(rec); break;
    case ReportFormat::json: f << rec.to_json().dump(1) << "\n"; break;
    case ReportFormat::plot_data: f << harness_detail::record_csv(rec); break;
  }
  return path;
}

// ------------------------------------------------------------ config files

// Config files are JSON, or YAML when yaml-cpp-style simple scalars suffice.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail("cannot read config: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::string text = buf.str();

  nlohmann::json j;
  bool looks_json = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    looks_json = (c == '{');
    break;
  }
  if (looks_json) {
    j = nlohmann::json::parse(text);
  } else {
    // minimal YAML subset: top-level `key: value` plus `key: [a, b, c]`
    j = nlohmann::json::object();
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::string s = trim(line);
      if (s.empty() || s[0] == '#') continue;
      // trailing comment: values here never contain '#', so cut at " #"
      if (auto hash = s.find(" #"); hash != std::string::npos) s = trim(s.substr(0, hash));
      auto colon = s.find(':');
      if (colon == std::string::npos) fail("malformed config line: " + line);
      std::string key = trim(s.substr(0, colon));
      std::string val = trim(s.substr(colon + 1));
      if (val.empty()) continue;
      auto parse_scalar = [](const std::string& v) -> nlohmann::json {
        if (v == "true") return true;
        if (v == "false") return false;
        if (v == "null") return nullptr;
        try {
          return nlohmann::json::parse(v);  // numbers, quoted strings
        } catch (...) {
          return v;  // bare string
        }
      };
      if (val.front() == '[') {
        if (val.back() != ']') fail("malformed config list: " + line);
        nlohmann::json arr = nlohmann::json::array();
        std::string inner = val.substr(1, val.size() - 2);
        std::string item;
        std::istringstream items(inner);
        while (std::getline(items, item, ',')) {
          std::string t = trim(item);
          if (!t.empty()) arr.push_back(parse_scalar(t));
        }
        j[key] = arr;
      } else {
        j[key] = parse_scalar(val);
      }
    }
  }
  return ExperimentConfig::from_json(j);
}

}  // namespace tabtext
