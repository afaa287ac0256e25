// Tests for the text classifier: tokenizer, backbone catalog, fine-tuning
// invariants (overfit sanity, determinism, truncation accounting), inference
// contract, checkpoint persistence, and the backbone comparison protocol.

#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "tabtext/builtin_templates.hpp"
#include "tabtext/lm.hpp"
#include "tabtext/metrics.hpp"
#include "tabtext/synthdata.hpp"

using namespace tabtext;
using Catch::Approx;

namespace {

// Small two-class corpus with a learnable token signal.
std::vector<SerializedExample> toy_corpus(size_t n_per_class) {
  std::vector<SerializedExample> out;
  for (size_t i = 0; i < n_per_class; ++i) {
    SerializedExample hi;
    hi.text = "The reading is high. Sensor " + std::to_string(i) + " alarms.";
    hi.label = 1;
    out.push_back(hi);
    SerializedExample lo;
    lo.text = "The reading is low. Sensor " + std::to_string(i) + " sleeps.";
    lo.label = 0;
    out.push_back(lo);
  }
  return out;
}

}  // namespace

TEST_CASE("word tokenizer lowercases and keeps decimals inside numbers") {
  auto toks = lmdetail::word_tokens("They paid $7.25, Age: 38-years-old!");
  std::vector<std::string> want{"they", "paid", "7.25", "age", "38", "years", "old"};
  CHECK(toks == want);

  // trailing dot is punctuation, not a decimal point
  CHECK(lmdetail::word_tokens("value 3.") == std::vector<std::string>{"value", "3"});

  auto corpus = toy_corpus(2);
  auto vocab = lmdetail::Vocab::build(corpus);
  CHECK(vocab.id("sensor") >= 3);            // specials occupy 0..2
  CHECK(vocab.id("never-seen") == lmdetail::kUnk);
  CHECK(vocab.to_token[lmdetail::kPad] == "[pad]");
  CHECK(vocab.to_token[lmdetail::kCls] == "[cls]");
}

TEST_CASE("backbone catalog resolves known families and rejects others") {
  CHECK(resolve_backbone("distilbert").layers == 2);
  CHECK(resolve_backbone("bert").layers == 4);
  CHECK(resolve_backbone("albert").share_layers);
  CHECK(resolve_backbone("electra").d_model % resolve_backbone("electra").heads == 0);
  CHECK_THROWS_WITH(resolve_backbone("mystery-model"),
                    Catch::Matchers::ContainsSubstring("backbone unresolvable"));
}

TEST_CASE("fine-tuning rejects malformed inputs") {
  auto corpus = toy_corpus(4);

  CHECK_THROWS_WITH(fine_tune({}, "distilbert"),
                    Catch::Matchers::ContainsSubstring("empty corpus"));

  TrainConfig bad_batch;
  bad_batch.batch_size = 0;
  CHECK_THROWS_WITH(fine_tune(corpus, "distilbert", bad_batch),
                    Catch::Matchers::ContainsSubstring("batch_size"));

  std::vector<SerializedExample> single(4);
  for (auto& e : single) {
    e.text = "same";
    e.label = 0;
  }
  CHECK_THROWS_WITH(fine_tune(single, "distilbert"),
                    Catch::Matchers::ContainsSubstring("single-class"));

  std::vector<SerializedExample> wild = corpus;
  wild[0].label = 7;
  CHECK_THROWS_WITH(fine_tune(wild, "distilbert", {}, {"no", "yes"}),
                    Catch::Matchers::ContainsSubstring("label out of range"));

  TrainConfig wrong_loss;
  wrong_loss.loss = LossKind::cross_entropy;  // two-class corpus wants the binary form
  CHECK_THROWS_WITH(fine_tune(corpus, "distilbert", wrong_loss),
                    Catch::Matchers::ContainsSubstring("binary_cross_entropy"));

  CHECK_THROWS_WITH(fine_tune(corpus, "not-a-backbone"),
                    Catch::Matchers::ContainsSubstring("backbone unresolvable"));
}

TEST_CASE("overfit sanity: loss collapses on ten identical examples") {
  std::vector<SerializedExample> corpus(10);
  for (auto& e : corpus) {
    e.text = "Passenger is female. They paid $71.28. They are in 1st-class ticket.";
    e.label = 1;
  }
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.dropout = 0.0;
  cfg.learning_rate = 1e-2;
  cfg.scheduler = LrSchedule::none;
  cfg.validation_fraction = 0.0;  // nothing to hold out of one repeated row
  auto clf = fine_tune(corpus, "distilbert", cfg, {"no", "yes"});

  REQUIRE(clf.epoch_train_losses.size() == 20);
  CHECK(clf.epoch_train_losses.back() < 0.1 * clf.epoch_train_losses.front());
  CHECK(clf.loss_name() == "binary_cross_entropy");
}

TEST_CASE("two identical examples: one epoch already reduces the loss") {
  std::vector<SerializedExample> corpus(2);
  for (auto& e : corpus) {
    e.text = "Signal strong.";
    e.label = 1;
  }
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.dropout = 0.0;
  cfg.learning_rate = 1e-2;
  cfg.validation_fraction = 0.0;
  auto clf = fine_tune(corpus, "electra", cfg, {"a", "b"});
  REQUIRE(clf.epoch_train_losses.size() == 2);
  CHECK(clf.epoch_train_losses[1] < clf.epoch_train_losses[0]);
}

TEST_CASE("training and inference are deterministic for a fixed seed") {
  auto corpus = toy_corpus(8);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  cfg.seed = 9;

  auto a = fine_tune(corpus, "distilbert", cfg);
  auto b = fine_tune(corpus, "distilbert", cfg);
  REQUIRE(a.epoch_train_losses.size() == b.epoch_train_losses.size());
  for (size_t i = 0; i < a.epoch_train_losses.size(); ++i)
    CHECK(a.epoch_train_losses[i] == b.epoch_train_losses[i]);

  std::vector<std::string> texts{"The reading is high. Sensor 3 alarms.",
                                 "The reading is low. Sensor 9 sleeps.",
                                 "The reading is high. Sensor 3 alarms."};
  auto la = a.predict_logits(texts);
  auto lb = b.predict_logits(texts);
  REQUIRE(la.rows() == 3);
  REQUIRE(la.cols() == 2);
  for (size_t i = 0; i < la.rows(); ++i)
    for (size_t c = 0; c < la.cols(); ++c) CHECK(la.values[i][c] == lb.values[i][c]);

  // identical input text gives identical logit rows
  CHECK(la.values[0] == la.values[2]);

  // two evaluation passes over the same model agree bitwise
  auto again = a.predict_logits(texts);
  CHECK(again.values == la.values);

  CHECK(la.class_order == std::vector<std::string>{"class_0", "class_1"});
  CHECK_THROWS_WITH(a.predict_logits({}),
                    Catch::Matchers::ContainsSubstring("empty"));
}

TEST_CASE("sequence truncation is counted exactly") {
  std::vector<SerializedExample> corpus;
  SerializedExample long_one;
  long_one.text = "one two three four five six seven eight nine ten";  // 10 tokens + [cls]
  long_one.label = 0;
  SerializedExample short_one;
  short_one.text = "one two three";
  short_one.label = 1;
  for (int i = 0; i < 4; ++i) {
    corpus.push_back(long_one);
    corpus.push_back(short_one);
  }
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.max_sequence_length = 8;
  cfg.validation_fraction = 0.0;
  auto clf = fine_tune(corpus, "distilbert", cfg);
  CHECK(clf.truncated_examples == 4);

  size_t counted = 0;
  auto ids = clf.encode(long_one.text, &counted);
  CHECK(ids.size() == 8);
  CHECK(counted == 1);
}

TEST_CASE("checkpoints round-trip through disk") {
  auto corpus = toy_corpus(6);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  auto clf = fine_tune(corpus, "electra", cfg, {"calm", "alarm"});

  std::string dir = std::filesystem::temp_directory_path() /
                    ("tabtext_ckpt_" + std::to_string(::getpid()));
  clf.save(dir);
  REQUIRE(std::filesystem::exists(dir + "/config.json"));
  REQUIRE(std::filesystem::exists(dir + "/weights.bin"));
  REQUIRE(std::filesystem::exists(dir + "/labels.json"));

  auto back = LmClassifier::load(dir);
  CHECK(back.backbone_name == "electra");
  CHECK(back.class_names == std::vector<std::string>{"calm", "alarm"});
  CHECK(back.config.epochs == 2);
  CHECK(back.truncated_examples == clf.truncated_examples);

  std::vector<std::string> texts{"The reading is high. Sensor 1 alarms.",
                                 "The reading is low. Sensor 2 sleeps."};
  auto l0 = clf.predict_logits(texts);
  auto l1 = back.predict_logits(texts);
  for (size_t i = 0; i < l0.rows(); ++i)
    for (size_t c = 0; c < l0.cols(); ++c) CHECK(l0.values[i][c] == l1.values[i][c]);

  std::filesystem::remove_all(dir);
}

TEST_CASE("backbone benchmark reports the full column set and isolates failures") {
  auto ds = subsample(synth::make_titanic(), 200, 5);
  TrainConfig cfg;
  cfg.epochs = 2;
  auto rows = backbone_benchmark({"electra", "mystery-model"}, ds,
                                 builtin_template("titanic"), cfg);
  REQUIRE(rows.size() == 2);

  const auto& ok = rows[0];
  CHECK(ok.backbone == "electra");
  REQUIRE(ok.ok);
  for (double v : {ok.accuracy, ok.precision, ok.recall, ok.f1, ok.auroc, ok.auprc}) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(ok.loss > 0.0);
  CHECK(ok.runtime_seconds > 0.0);
  CHECK(ok.samples_per_second > 0.0);
  CHECK(ok.samples_per_second == Approx(40.0 / ok.runtime_seconds));
  CHECK(ok.train_seconds > 0.0);

  const auto& bad = rows[1];
  CHECK_FALSE(bad.ok);
  CHECK(bad.error.find("backbone unresolvable") != std::string::npos);
}

TEST_CASE("titanic fine-tuning with default settings reaches the published band",
          "[heavy][lm]") {
  auto ds = synth::make_titanic();
  auto sp = split(ds, 0.2, 42);
  auto tmpl = builtin_template("titanic");
  auto train_c = render_dataset(sp.train, tmpl);
  auto test_c = render_dataset(sp.test, tmpl);

  auto clf = fine_tune(train_c, "distilbert", {}, ds.classes);

  std::vector<std::string> texts;
  std::vector<int> yt;
  for (const auto& e : test_c) {
    texts.push_back(e.text);
    yt.push_back(e.label);
  }
  auto logits = clf.predict_logits(texts);
  std::vector<int> yp;
  for (const auto& row : logits.values)
    yp.push_back(static_cast<int>(tabtext::detail::argmax_row(row)));
  double acc = accuracy(yt, yp);
  INFO("held-out accuracy " << acc);
  CHECK(acc >= 0.75);
  CHECK(acc <= 0.85);
}
