#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tabtext/metrics.hpp"

using namespace tabtext;

namespace {

struct RandomInstance {
  std::vector<int> y_true;
  std::vector<int> y_pred;
  std::vector<std::vector<double>> probs;
  int k = 0;
};

RandomInstance make_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(2, 50);
  std::uniform_int_distribution<int> k_dist(2, 5);
  RandomInstance inst;
  inst.k = k_dist(rng);
  int n = n_dist(rng);
  std::uniform_int_distribution<int> lab(0, inst.k - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    inst.y_true.clear();
    for (int i = 0; i < n; ++i) inst.y_true.push_back(lab(rng));
    bool two_classes = false;
    for (int v : inst.y_true)
      if (v != inst.y_true.front()) two_classes = true;
    if (two_classes) break;
  }
  for (int i = 0; i < n; ++i) inst.y_pred.push_back(lab(rng));
  inst.probs.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(inst.k)));
  for (auto& row : inst.probs) {
    double s = 0.0;
    for (auto& p : row) {
      p = unit(rng) + 1e-6;
      s += p;
    }
    for (auto& p : row) p /= s;
  }
  return inst;
}

}  // namespace

TEST_CASE("accuracy matches hand example", "[metrics]") {
  std::vector<int> yt{0, 1, 1, 0}, yp{0, 1, 0, 0};
  CHECK(accuracy(yt, yp) == 0.75);
}

TEST_CASE("binary precision/recall/f1 hand example", "[metrics]") {
  // tp=2, fp=1, fn=1 -> P=2/3, R=2/3, F1=2/3.
  std::vector<int> yt{1, 1, 1, 0, 0, 0}, yp{1, 1, 0, 1, 0, 0};
  CHECK(precision_score(yt, yp, Averaging::binary) == Catch::Approx(2.0 / 3.0));
  CHECK(recall_score(yt, yp, Averaging::binary) == Catch::Approx(2.0 / 3.0));
  CHECK(f1(yt, yp, Averaging::binary) == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("zero-denominator precision and recall report zero", "[metrics]") {
  std::vector<int> yt{0, 0, 0}, yp{0, 0, 0};
  CHECK(precision_score(yt, yp, Averaging::binary) == 0.0);
  CHECK(recall_score(yt, yp, Averaging::binary) == 0.0);
  CHECK(f1(yt, yp, Averaging::binary) == 0.0);
}

TEST_CASE("binary averaging rejects multiclass input", "[metrics]") {
  std::vector<int> yt{0, 1, 2}, yp{0, 1, 2};
  CHECK_THROWS_AS(f1(yt, yp, Averaging::binary), error);
}

TEST_CASE("auroc hand example with rank ties", "[metrics]") {
  std::vector<int> yt{1, 0, 1, 0};
  std::vector<double> s{0.9, 0.8, 0.7, 0.1};
  CHECK(auroc_binary(yt, s) == Catch::Approx(0.75));
  // All-identical scores -> every pair gets the 0.5 tie credit.
  std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
  CHECK(auroc_binary(yt, flat) == Catch::Approx(0.5));
}

TEST_CASE("auroc input validation", "[metrics]") {
  CHECK_THROWS_AS(auroc_binary({}, {}), error);
  CHECK_THROWS_AS(auroc_binary({1, 0}, {0.5}), error);
  CHECK_THROWS_AS(auroc_binary({1, 1}, {0.5, 0.6}), error);
}

TEST_CASE("mcc perfect and inverted predictions", "[metrics]") {
  std::vector<int> yt{0, 1, 0, 1, 1, 0};
  std::vector<int> inv{1, 0, 1, 0, 0, 1};
  CHECK(mcc(yt, yt) == 1.0);
  CHECK(mcc(yt, inv) == -1.0);
}

TEST_CASE("mcc degenerate confusion reports zero", "[metrics]") {
  std::vector<int> yt{1, 1, 1}, yp{1, 1, 1};
  CHECK(mcc(yt, yp) == 0.0);
}

TEST_CASE("random instances agree with independent oracles", "[metrics]") {
  std::mt19937_64 rng(20240817ULL);
  int binary_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RandomInstance inst = make_instance(rng);
    INFO("trial " << trial << " n=" << inst.y_true.size() << " k=" << inst.k);

    // Accuracy: same integer-counting formula, expected bitwise equal.
    CHECK(accuracy(inst.y_true, inst.y_pred) ==
          oracle::accuracy(inst.y_true, inst.y_pred));

    // Macro F1 against the per-class one-vs-rest oracle.
    CHECK(f1(inst.y_true, inst.y_pred, Averaging::macro, inst.k) ==
          Catch::Approx(oracle::f1_macro(inst.y_true, inst.y_pred, inst.k)).margin(1e-12));

    // Multiclass MCC against the one-hot Pearson-correlation derivation.
    CHECK(mcc(inst.y_true, inst.y_pred, inst.k) ==
          Catch::Approx(oracle::mcc_onehot(inst.y_true, inst.y_pred, inst.k))
              .margin(1e-10));

    // Macro one-vs-rest AUROC against the quadratic pairwise oracle.
    CHECK(auroc_macro_ovr(inst.y_true, inst.probs) ==
          Catch::Approx(oracle::auroc_macro(inst.y_true, inst.probs, inst.k))
              .margin(1e-9));

    if (inst.k == 2) {
      ++binary_seen;
      std::vector<double> pos_scores;
      for (const auto& row : inst.probs) pos_scores.push_back(row[1]);
      CHECK(f1(inst.y_true, inst.y_pred, Averaging::binary) ==
            oracle::f1_binary(inst.y_true, inst.y_pred));
      CHECK(mcc(inst.y_true, inst.y_pred) ==
            Catch::Approx(oracle::mcc_binary(inst.y_true, inst.y_pred)).margin(1e-12));
      CHECK(auroc_binary(inst.y_true, pos_scores) ==
            Catch::Approx(oracle::auroc_pairs(inst.y_true, pos_scores)).margin(1e-9));
    }
  }
  CHECK(binary_seen > 20);
}

TEST_CASE("mcc stays within [-1, 1] on random confusion matrices", "[metrics]") {
  std::mt19937_64 rng(77ULL);
  std::uniform_int_distribution<int> k_dist(2, 6);
  std::uniform_int_distribution<long long> cell(0, 1000);
  for (int trial = 0; trial < 10000; ++trial) {
    int k = k_dist(rng);
    std::vector<std::vector<size_t>> cm(static_cast<size_t>(k),
                                        std::vector<size_t>(static_cast<size_t>(k)));
    size_t total = 0;
    for (auto& row : cm)
      for (auto& c : row) {
        c = static_cast<size_t>(cell(rng));
        total += c;
      }
    if (total == 0) cm[0][0] = 1;
    double v = mcc_from_confusion(cm);
    INFO("trial " << trial << " k=" << k << " mcc=" << v);
    REQUIRE(std::isfinite(v));
    REQUIRE(v >= -1.0);
    REQUIRE(v <= 1.0);
  }
}

TEST_CASE("macro metrics are invariant to class relabeling", "[metrics]") {
  std::mt19937_64 rng(5150ULL);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = make_instance(rng);
    std::vector<int> perm(static_cast<size_t>(inst.k));
    for (int c = 0; c < inst.k; ++c) perm[static_cast<size_t>(c)] = c;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> yt2, yp2;
    for (int v : inst.y_true) yt2.push_back(perm[static_cast<size_t>(v)]);
    for (int v : inst.y_pred) yp2.push_back(perm[static_cast<size_t>(v)]);
    CHECK(f1(inst.y_true, inst.y_pred, Averaging::macro, inst.k) ==
          Catch::Approx(f1(yt2, yp2, Averaging::macro, inst.k)).margin(1e-12));
    CHECK(mcc(inst.y_true, inst.y_pred, inst.k) ==
          Catch::Approx(mcc(yt2, yp2, inst.k)).margin(1e-12));
    CHECK(accuracy(inst.y_true, inst.y_pred) == accuracy(yt2, yp2));
  }
}

TEST_CASE("auroc is invariant under strictly monotone score transforms", "[metrics]") {
  std::mt19937_64 rng(808ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(unit(rng) * 40);
    std::vector<int> yt;
    std::vector<double> s;
    for (int i = 0; i < n; ++i) {
      yt.push_back(unit(rng) < 0.4 ? 1 : 0);
      s.push_back(unit(rng));
    }
    yt[0] = 0;
    yt[1] = 1;
    std::vector<double> t;
    for (double v : s) t.push_back(std::exp(3.0 * v) + 7.0);
    CHECK(auroc_binary(yt, s) == Catch::Approx(auroc_binary(yt, t)).margin(1e-12));
  }
}

TEST_CASE("auprc hand check and validation", "[metrics]") {
  // Ranked by score: y = 1,0,1,0 -> AP = (1/1 + 2/3) / 2.
  std::vector<int> yt{1, 0, 1, 0};
  std::vector<double> s{0.9, 0.8, 0.7, 0.1};
  CHECK(auprc_binary(yt, s) == Catch::Approx((1.0 + 2.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(auprc_binary({0, 0}, {0.1, 0.2}), error);
  // Perfect separation gives AP = 1.
  CHECK(auprc_binary({0, 1}, {0.1, 0.9}) == 1.0);
}

TEST_CASE("logit delta hand example and flip detection", "[metrics]") {
  LogitMatrix base;
  base.class_order = {"0", "1"};
  base.values = {{2.0, -1.0}};
  LogitMatrix variant = base;
  variant.values = {{-0.5, 0.5}};
  LogitDelta d = logit_delta(base, variant);
  REQUIRE(d.delta.size() == 1);
  CHECK(d.delta[0][0] == Catch::Approx(-2.5));
  CHECK(d.delta[0][1] == Catch::Approx(1.5));
  REQUIRE(d.flipped.size() == 1);
  CHECK(d.flipped[0] == 1);
  CHECK(d.mean_abs == Catch::Approx(2.0));
  CHECK(d.flipped_fraction == 1.0);
}

TEST_CASE("logit delta identity is exactly zero", "[metrics]") {
  LogitMatrix base;
  base.class_order = {"a", "b", "c"};
  base.values = {{0.3, -0.2, 1.9}, {2.2, 2.2, -4.0}};
  LogitDelta d = logit_delta(base, base);
  for (const auto& row : d.delta)
    for (double v : row) CHECK(v == 0.0);
  CHECK(d.mean_abs == 0.0);
  CHECK(d.flipped_fraction == 0.0);
  CHECK(d.flipped == std::vector<uint8_t>{0, 0});
}

TEST_CASE("logit delta is antisymmetric in the delta matrix", "[metrics]") {
  LogitMatrix a, b;
  a.class_order = b.class_order = {"0", "1"};
  a.values = {{1.0, 0.0}, {-2.0, 0.5}};
  b.values = {{0.25, 0.75}, {1.5, -1.5}};
  LogitDelta ab = logit_delta(a, b);
  LogitDelta ba = logit_delta(b, a);
  for (size_t i = 0; i < ab.delta.size(); ++i)
    for (size_t j = 0; j < ab.delta[i].size(); ++j)
      CHECK(ab.delta[i][j] == -ba.delta[i][j]);
  CHECK(ab.mean_abs == Catch::Approx(ba.mean_abs));
  CHECK(ab.flipped_fraction == ba.flipped_fraction);
}

TEST_CASE("logit delta validates shape and class order", "[metrics]") {
  LogitMatrix a, b;
  a.class_order = {"0", "1"};
  a.values = {{1.0, 0.0}};
  b = a;
  b.class_order = {"1", "0"};
  CHECK_THROWS_AS(logit_delta(a, b), error);
  b = a;
  b.values = {{1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(logit_delta(a, b), error);
}

TEST_CASE("runtime probe reports positive duration and throughput", "[metrics]") {
  ProbeResult pr = runtime_probe(
      [] {
        volatile double x = 0.0;
        for (int i = 0; i < 100000; ++i) x = x + 1.0;
      },
      1000);
  CHECK(pr.wall_seconds > 0.0);
  CHECK(pr.samples_per_second > 0.0);
}

TEST_CASE("evaluate assembles a coherent report", "[metrics]") {
  std::vector<int> yt{0, 1, 1, 0, 1};
  std::vector<int> yp{0, 1, 0, 0, 1};
  std::vector<std::vector<double>> probs{
      {0.9, 0.1}, {0.2, 0.8}, {0.6, 0.4}, {0.7, 0.3}, {0.1, 0.9}};
  EvalReport r = evaluate(yt, yp, &probs, 2);
  CHECK(r.n == 5);
  CHECK(r.accuracy == Catch::Approx(0.8));
  CHECK(r.has_auroc);
  std::vector<double> pos{0.1, 0.8, 0.4, 0.3, 0.9};
  CHECK(r.auroc == Catch::Approx(oracle::auroc_pairs(yt, pos)));
  CHECK(r.mcc == Catch::Approx(oracle::mcc_binary(yt, yp)).margin(1e-12));
  // Degenerate single-class truth: AUROC is undefined and flagged off, but
  // the report still comes back instead of failing.
  std::vector<int> ones{1, 1, 1};
  std::vector<std::vector<double>> ones_probs{{0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}};
  EvalReport r2 = evaluate(ones, ones, &ones_probs, 2);
  CHECK(r2.accuracy == 1.0);
  CHECK_FALSE(r2.has_auroc);
}
