#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tabtext/curation.hpp"

using namespace tabtext;

namespace {

TabularDataset toy_for_scores() {
  TabularDataset ds;
  ds.name = "toy";
  ds.features.push_back(Column::numeric("rising", {1, 2, 3, 4}));
  ds.features.push_back(Column::numeric("flat", {7, 7, 7, 7}));
  ds.features.push_back(Column::numeric("separated", {1, 1, 2, 2}));
  ds.features.push_back(Column::categorical("color", {"r", "g", "b", "r"}));
  ds.label_column = "y";
  ds.labels = {0, 0, 1, 1};
  ds.classes = {"no", "yes"};
  return ds;
}

// Independent decomposition oracle: SST and SSW from their direct
// definitions, SSB derived as the difference, F reassembled from those.
double oracle_f(const std::vector<double>& x, const std::vector<int>& y, size_t k) {
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(x.size());
  double sst = 0.0;
  for (double v : x) sst += (v - mu) * (v - mu);

  std::vector<double> sum(k, 0.0);
  std::vector<size_t> cnt(k, 0);
  for (size_t i = 0; i < x.size(); ++i) {
    sum[static_cast<size_t>(y[i])] += x[i];
    cnt[static_cast<size_t>(y[i])]++;
  }
  double ssw = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double mc = sum[static_cast<size_t>(y[i])] / static_cast<double>(cnt[static_cast<size_t>(y[i])]);
    ssw += (x[i] - mc) * (x[i] - mc);
  }
  double ssb = sst - ssw;
  size_t present = 0;
  for (size_t c = 0; c < k; ++c) present += cnt[c] > 0;
  double df_b = static_cast<double>(present - 1);
  double df_w = static_cast<double>(x.size() - present);
  return (ssb / df_b) / (ssw / df_w);
}

}  // namespace

TEST_CASE("anova five-step hand example", "[curation]") {
  double f = anova_f_single({1, 2, 3, 4}, {}, {0, 0, 1, 1}, 2);
  CHECK(f == 8.0);  // SSB=4, SSW=1, F=(4/1)/(1/2)
}

TEST_CASE("anova excludes missing cells pairwise", "[curation]") {
  // Present subset is exactly the hand example above.
  double f = anova_f_single({1, 2, 500, 3, 4, -9}, {0, 0, 1, 0, 0, 1},
                            {0, 0, 0, 1, 1, 1}, 2);
  CHECK(f == 8.0);
}

TEST_CASE("anova conventions: constant and perfectly separated features", "[curation]") {
  AnovaResult r = anova_f_scores(toy_for_scores());
  REQUIRE(r.scores.size() == 3);  // categorical column skipped
  CHECK(r.scores[0].feature == "rising");
  CHECK(r.scores[0].score == 8.0);
  CHECK(r.scores[1].feature == "flat");
  CHECK(r.scores[1].score == 0.0);  // 0/0 convention
  CHECK(r.scores[2].feature == "separated");
  CHECK(r.scores[2].score == std::numeric_limits<double>::max());  // clamped infinity
  for (const auto& s : r.scores) CHECK(std::isfinite(s.score));
  // Both degenerate columns carry the zero-within-variance warning.
  CHECK(r.zero_variance == std::vector<std::string>{"flat", "separated"});
}

TEST_CASE("anova matches the sum-of-squares decomposition oracle", "[curation]") {
  std::mt19937_64 rng(424242ULL);
  std::uniform_int_distribution<int> n_dist(6, 80);
  std::uniform_int_distribution<size_t> k_dist(2, 5);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    size_t k = k_dist(rng);
    int n = n_dist(rng);
    std::vector<double> x;
    std::vector<int> y;
    for (size_t c = 0; c < k; ++c) {  // guarantee every class has ≥2 rows
      y.push_back(static_cast<int>(c));
      y.push_back(static_cast<int>(c));
    }
    while (y.size() < static_cast<size_t>(n))
      y.push_back(static_cast<int>(k_dist(rng) % k));
    for (size_t i = 0; i < y.size(); ++i) x.push_back(val(rng));

    double produced = anova_f_single(x, {}, y, k);
    double expected = oracle_f(x, y, k);
    INFO("trial " << trial << " n=" << y.size() << " k=" << k);
    CHECK(produced == Catch::Approx(expected).margin(1e-9).epsilon(1e-9));
  }
}

TEST_CASE("anova F is invariant under affine feature transforms", "[curation]") {
  std::mt19937_64 rng(99ULL);
  std::uniform_real_distribution<double> val(0.0, 50.0);
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    y.push_back(i % 3);
    x.push_back(val(rng) + (i % 3) * 4.0);
  }
  double base = anova_f_single(x, {}, y, 3);
  for (double a : {2.5, -3.0, 0.01}) {
    std::vector<double> t;
    for (double v : x) t.push_back(a * v - 17.0);
    double f = anova_f_single(t, {}, y, 3);
    CHECK(f == Catch::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("anova input validation", "[curation]") {
  // as many samples as classes
  CHECK_THROWS_AS(anova_f_single({1, 2}, {}, {0, 1}, 2), error);
  // only one class carries data
  CHECK_THROWS_AS(anova_f_single({1, 2, 3}, {}, {0, 0, 0}, 1), error);
  // missing wipes out one class entirely
  CHECK_THROWS_AS(anova_f_single({1, 2, 3, 4}, {0, 0, 1, 1}, {0, 0, 1, 1}, 2), error);
  // categorical feature requested by name
  CHECK_THROWS_AS(anova_f_scores(toy_for_scores(), {"color"}), error);
}

TEST_CASE("threshold selection keeps scores at or above tau", "[curation]") {
  std::vector<FeatureScore> scores{
      {"a", 12.0}, {"b", 10.0}, {"c", 9.99}, {"d", 0.0}};
  auto sel = select_by_threshold(scores, 10.0);
  CHECK(sel == std::set<std::string>{"a", "b"});
  // tau = 0 keeps everything (scores are non-negative)
  CHECK(select_by_threshold(scores, 0.0).size() == 4);
  CHECK_THROWS_AS(select_by_threshold(scores, 1e9), error);
  CHECK_THROWS_AS(select_by_threshold({}, 1.0), error);
}

TEST_CASE("threshold selection is monotone in tau", "[curation]") {
  std::mt19937_64 rng(31337ULL);
  std::uniform_real_distribution<double> val(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FeatureScore> scores;
    for (int i = 0; i < 12; ++i)
      scores.push_back({"f" + std::to_string(i), val(rng)});
    double t1 = val(rng) * 0.5, t2 = t1 + val(rng) * 0.4;
    std::set<std::string> lo, hi;
    try {
      lo = select_by_threshold(scores, t1);
      hi = select_by_threshold(scores, t2);
    } catch (const error&) {
      continue;  // a threshold dropped everything; nothing to compare
    }
    for (const auto& f : hi) CHECK(lo.count(f) == 1);
  }
}

TEST_CASE("ranking sorts scores descending and stably", "[curation]") {
  std::vector<FeatureScore> scores{{"a", 1.0}, {"b", 5.0}, {"c", 5.0}, {"d", 3.0}};
  auto r = ranked(scores);
  REQUIRE(r.size() == 4);
  CHECK(r[0].feature == "b");  // ties keep original order
  CHECK(r[1].feature == "c");
  CHECK(r[2].feature == "d");
  CHECK(r[3].feature == "a");
}

TEST_CASE("standardize uses population statistics from the fitted column", "[curation]") {
  FittedScaler s = fit_scaler({2, 4, 4, 4, 5, 5, 7, 9}, {}, ScaleKind::standardize);
  CHECK(s.mean == 5.0);
  CHECK(s.stdev == 2.0);
  CHECK(apply_scaler(5.0, s) == 0.0);
  CHECK(apply_scaler(9.0, s) == 2.0);
  // held-out value far outside the fitted range still uses train stats
  CHECK(apply_scaler(105.0, s) == 50.0);
}

TEST_CASE("normalize divides by the fitted maximum", "[curation]") {
  FittedScaler s = fit_scaler({2, 5, 10}, {}, ScaleKind::normalize);
  CHECK(s.max_value == 10.0);
  CHECK(apply_scaler(10.0, s) == 1.0);
  CHECK(apply_scaler(2.0, s) == 0.2);
  CHECK(apply_scaler(20.0, s) == 2.0);  // no refit on held-out data
}

TEST_CASE("log transform is log(1+x) with a plain-log mode", "[curation]") {
  FittedScaler s = fit_scaler({0, 7.25, 22, 80}, {}, ScaleKind::log_transform);
  CHECK(apply_scaler(0.0, s) == 0.0);
  CHECK(std::abs(apply_scaler(22.0, s) - 3.135) < 1e-3);
  CHECK(std::abs(apply_scaler(7.25, s) - 2.110) < 1e-3);
  CHECK(fmt_fixed(apply_scaler(22.0, s), 3) == "3.135");
  CHECK(fmt_fixed(apply_scaler(7.25, s), 3) == "2.110");

  FittedScaler p = fit_scaler({7.25, 22}, {}, ScaleKind::log_transform, /*plain_log=*/true);
  CHECK(apply_scaler(22.0, p) == std::log(22.0));
  CHECK_THROWS_AS(apply_scaler(0.0, p), error);
}

TEST_CASE("scaler fitting validates its domain", "[curation]") {
  CHECK_THROWS_AS(fit_scaler({3, 3, 3}, {}, ScaleKind::standardize), error);
  CHECK_THROWS_AS(fit_scaler({-1, -2}, {}, ScaleKind::normalize), error);
  CHECK_THROWS_AS(fit_scaler({-1.0, 5.0}, {}, ScaleKind::log_transform), error);
  CHECK_THROWS_AS(fit_scaler({0.0, 5.0}, {}, ScaleKind::log_transform, true), error);
  CHECK_THROWS_AS(fit_scaler({1.0}, {}, ScaleKind::standardize), error);
  // missing cells are excluded from fitting
  FittedScaler s = fit_scaler({1, 1000, 3}, {0, 1, 0}, ScaleKind::standardize);
  CHECK(s.mean == 2.0);
}

TEST_CASE("scaling a missing value yields a missing value", "[curation]") {
  FittedScaler s = fit_scaler({1, 2, 3}, {}, ScaleKind::standardize);
  double out = apply_scaler(std::numeric_limits<double>::quiet_NaN(), s);
  CHECK(std::isnan(out));
}

TEST_CASE("curation plan serializes and restores all fields", "[curation]") {
  CurationPlan plan;
  plan.dataset = "toy";
  plan.method = "anova_f";
  plan.tau = 10.0;
  plan.fit_seed = 42;
  plan.fit_population = "train";
  plan.selected = std::set<std::string>{"age", "fare"};
  plan.scaling["age"] = fit_scaler({10, 20, 30}, {}, ScaleKind::standardize);
  plan.scaling["fare"] = fit_scaler({0, 7.25, 22}, {}, ScaleKind::log_transform);
  plan.imputation["Cabin"] = MissingPolicy::related("Cabin unknown.");

  CurationPlan back = CurationPlan::from_json(plan.to_json());
  CHECK(back.dataset == plan.dataset);
  CHECK(back.method == plan.method);
  CHECK(back.tau == plan.tau);
  CHECK(back.fit_seed == plan.fit_seed);
  CHECK(back.fit_population == plan.fit_population);
  CHECK(back.selected == plan.selected);
  CHECK(back.scaling == plan.scaling);
  CHECK(back.imputation.at("Cabin") == plan.imputation.at("Cabin"));
}

TEST_CASE("curation plan lookup helpers", "[curation]") {
  CurationPlan plan;
  CHECK(plan.keeps("anything"));  // no selection = keep all
  CHECK(plan.scaler_for("x") == nullptr);
  CHECK(plan.imputation_for("x") == nullptr);
  plan.selected = std::set<std::string>{"kept"};
  CHECK(plan.keeps("kept"));
  CHECK_FALSE(plan.keeps("dropped"));
}
