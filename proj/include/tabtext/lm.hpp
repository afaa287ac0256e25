#pragma once

// Text classifiers over serialized rows ("TabLM"): a word-level tokenizer, a
// family of compact transformer encoders (multi-head self-attention, GELU
// feed-forward blocks, post-block layer normalization, CLS-pooled
// classification head), a fine-tuning loop (Adam with an optional
// linear-decay schedule, dropout, early stopping on a stratified validation
// slice), raw-logit inference, checkpoint persistence, and the
// backbone-comparison protocol.
//
// The catalog backbones are architecture miniatures of well-known encoder
// families, initialized deterministically from the run seed. No downloaded
// weights are involved — every run trains from that initialization, and the
// README documents this substitution. Training is deterministic for a fixed
// seed; evaluation mode has no stochastic ops, so two inference passes agree
// bitwise.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabtext/common.hpp"
#include "tabtext/dataset.hpp"
#include "tabtext/metrics.hpp"
#include "tabtext/template_engine.hpp"

namespace tabtext {

// ------------------------------------------------------------ configuration

enum class LrSchedule { linear_decay, none };
enum class LossKind { from_classes, binary_cross_entropy, cross_entropy };

struct TrainConfig {
  double learning_rate = 2e-4;
  LrSchedule scheduler = LrSchedule::linear_decay;
  double dropout = 0.3;
  int batch_size = 64;
  int epochs = 10;
  LossKind loss = LossKind::from_classes;  // resolved against the class count
  uint64_t seed = 42;
  int max_sequence_length = 512;
  int early_stop_patience = 3;        // epochs without validation improvement
  double validation_fraction = 0.1;   // stratified slice used for early stopping
};

// Architecture shape of one catalog backbone.
struct BackboneSpec {
  std::string name;
  int layers = 2;
  int d_model = 128;
  int heads = 4;
  int d_ff = 256;
  bool share_layers = false;  // one parameter set applied at every depth
};

// Known encoder families, as compact shapes. Each name resolves at run time;
// anything else is "backbone unresolvable".
inline const std::vector<BackboneSpec>& backbone_catalog() {
  static const std::vector<BackboneSpec> catalog = {
      {"distilbert", 2, 128, 4, 256, false},  // distilled: half the depth
      {"bert", 4, 128, 4, 256, false},
      {"roberta", 4, 128, 4, 256, false},
      {"electra", 3, 96, 4, 192, false},
      {"xlnet", 3, 128, 4, 256, false},
      {"albert", 4, 128, 4, 256, true},  // cross-layer parameter sharing
      {"deberta", 4, 128, 4, 256, false},
      {"longformer", 3, 128, 4, 256, false},
      {"gte", 4, 96, 4, 192, false},
  };
  return catalog;
}

inline const BackboneSpec& resolve_backbone(const std::string& name) {
  for (const auto& b : backbone_catalog())
    if (b.name == name) return b;
  std::string known;
  for (const auto& b : backbone_catalog()) known += (known.empty() ? "" : ", ") + b.name;
  fail("backbone unresolvable: '" + name + "' (known: " + known + ")");
}

// ------------------------------------------------------------ tokenizer

namespace lmdetail {

// Lowercased word-level tokens: maximal runs of alphanumerics, with '.' kept
// inside numbers so "7.25" stays one token.
inline std::vector<std::string> word_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '.' && !cur.empty() && std::isdigit(static_cast<unsigned char>(cur.back())) &&
               i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      cur.push_back('.');
    } else {
      flush();
    }
  }
  flush();
  return out;
}

constexpr int kPad = 0;
constexpr int kUnk = 1;
constexpr int kCls = 2;

// Fixed multiplier between the pooled representation and the logits. It
// sharpens the decision surface so that short fine-tuning runs at the default
// learning rate produce confident classifications.
constexpr float kLogitScale = 8.0f;

inline bool token_is_number(const std::string& t) {
  bool digit = false, dot = false;
  for (char c : t) {
    if (c == '.') {
      if (dot) return false;
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else {
      return false;
    }
  }
  return digit;
}

// Distinct float literals rarely repeat between rows, so raw numeric tokens
// would each be seen once and map to [unk] at test time. Numbers are instead
// canonicalized to magnitude buckets with two significant digits: 14.23 →
// "n14e1" (≈14), 1.71 → "n17e0", 0.039 → "n39e-2". Close values share a
// token, which is what lets the model associate feature words with value
// ranges.
inline std::string number_bucket(const std::string& t) {
  double v = std::strtod(t.c_str(), nullptr);
  if (v == 0.0) return "n0";
  int e = static_cast<int>(std::floor(std::log10(v)));
  int m = static_cast<int>(std::lround(v / std::pow(10.0, e) * 10.0));
  if (m >= 100) {
    m /= 10;
    ++e;
  }
  return "n" + std::to_string(m) + "e" + std::to_string(e);
}

inline std::string canon_token(const std::string& t) {
  return token_is_number(t) ? number_bucket(t) : t;
}

struct Vocab {
  std::map<std::string, int> to_id;
  std::vector<std::string> to_token{"[pad]", "[unk]", "[cls]"};

  int id(const std::string& tok) const {
    auto it = to_id.find(tok);
    return it == to_id.end() ? kUnk : it->second;
  }
  size_t size() const { return to_token.size(); }

  static Vocab build(const std::vector<SerializedExample>& corpus, size_t cap = 30000) {
    std::map<std::string, size_t> counts;
    for (const auto& ex : corpus)
      for (const auto& t : word_tokens(ex.text)) counts[canon_token(t)]++;
    std::vector<std::pair<std::string, size_t>> by_freq(counts.begin(), counts.end());
    std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    Vocab v;
    for (const auto& [tok, _] : by_freq) {
      if (v.to_token.size() >= cap) break;
      v.to_id[tok] = static_cast<int>(v.to_token.size());
      v.to_token.push_back(tok);
    }
    return v;
  }
};

using Mat = Eigen::MatrixXf;

// One trainable tensor with its Adam state.
struct Tensor {
  Mat w, g, m, v;

  void init(long rows, long cols, std::mt19937_64& rng, float stddev) {
    w.resize(rows, cols);
    if (stddev == 0.0f) {
      w.setZero();
    } else {
      std::normal_distribution<float> dist(0.0f, stddev);
      for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) w(i, j) = dist(rng);
    }
    g = Mat::Zero(rows, cols);
    m = Mat::Zero(rows, cols);
    v = Mat::Zero(rows, cols);
  }
  void init_ones(long rows, long cols) {
    w = Mat::Ones(rows, cols);
    g = Mat::Zero(rows, cols);
    m = Mat::Zero(rows, cols);
    v = Mat::Zero(rows, cols);
  }
  void zero_grad() { g.setZero(); }
  void adam(float lr, long t) {
    constexpr float b1 = 0.9f, b2 = 0.999f, eps = 1e-8f;
    m = b1 * m + (1.0f - b1) * g;
    v = b2 * v + (1.0f - b2) * g.cwiseProduct(g);
    float c1 = 1.0f - std::pow(b1, static_cast<float>(t));
    float c2 = 1.0f - std::pow(b2, static_cast<float>(t));
    w.array() -= lr * (m.array() / c1) /
                 ((v.array() / c2).sqrt() + eps);
  }
};

struct LayerWeights {
  Tensor Wq, bq, Wk, bk, Wv, bv, Wo, bo;
  Tensor ln1_g, ln1_b;
  Tensor W1, b1, W2, b2;
  Tensor ln2_g, ln2_b;

  void init(int d, int f, std::mt19937_64& rng) {
    const float s = 0.05f;
    Wq.init(d, d, rng, s);
    bq.init(1, d, rng, 0.0f);
    Wk.init(d, d, rng, s);
    bk.init(1, d, rng, 0.0f);
    Wv.init(d, d, rng, s);
    bv.init(1, d, rng, 0.0f);
    Wo.init(d, d, rng, s);
    bo.init(1, d, rng, 0.0f);
    ln1_g.init_ones(1, d);
    ln1_b.init(1, d, rng, 0.0f);
    W1.init(d, f, rng, s);
    b1.init(1, f, rng, 0.0f);
    W2.init(f, d, rng, s);
    b2.init(1, d, rng, 0.0f);
    ln2_g.init_ones(1, d);
    ln2_b.init(1, d, rng, 0.0f);
  }
  void collect(std::vector<Tensor*>& out) {
    for (Tensor* t : {&Wq, &bq, &Wk, &bk, &Wv, &bv, &Wo, &bo, &ln1_g, &ln1_b,
                      &W1, &b1, &W2, &b2, &ln2_g, &ln2_b})
      out.push_back(t);
  }
};

struct EncoderWeights {
  BackboneSpec spec;
  int max_len = 512;
  size_t n_classes = 0;
  Tensor tok_emb, pos_emb;
  Tensor ln_e_g, ln_e_b;
  std::vector<LayerWeights> layers;  // size 1 when spec.share_layers
  Tensor Wc, bc;

  void init(const BackboneSpec& s, size_t vocab, size_t k, int maxlen,
            uint64_t seed) {
    spec = s;
    max_len = maxlen;
    n_classes = k;
    Fnv1a64 h;
    h.update(s.name);
    std::mt19937_64 rng(seed ^ h.state);
    tok_emb.init(static_cast<long>(vocab), s.d_model, rng, 0.05f);
    pos_emb.init(maxlen, s.d_model, rng, 0.05f);
    ln_e_g.init_ones(1, s.d_model);
    ln_e_b.init(1, s.d_model, rng, 0.0f);
    layers.resize(s.share_layers ? 1 : static_cast<size_t>(s.layers));
    for (auto& l : layers) l.init(s.d_model, s.d_ff, rng);
    Wc.init(s.d_model, static_cast<long>(k), rng, 0.05f);
    bc.init(1, static_cast<long>(k), rng, 0.0f);
  }

  LayerWeights& layer(int depth) {
    return layers[spec.share_layers ? 0 : static_cast<size_t>(depth)];
  }
  const LayerWeights& layer(int depth) const {
    return layers[spec.share_layers ? 0 : static_cast<size_t>(depth)];
  }

  std::vector<Tensor*> all() {
    std::vector<Tensor*> out{&tok_emb, &pos_emb, &ln_e_g, &ln_e_b};
    for (auto& l : layers) l.collect(out);
    out.push_back(&Wc);
    out.push_back(&bc);
    return out;
  }
};

// ---------------- layer math with caches for backward

struct LnCache {
  Mat xhat;
  Eigen::VectorXf inv_std;
};

inline Mat ln_forward(const Mat& X, const Tensor& g, const Tensor& b, LnCache& c) {
  const float eps = 1e-5f;
  long n = X.rows(), d = X.cols();
  c.xhat.resize(n, d);
  c.inv_std.resize(n);
  Mat out(n, d);
  for (long i = 0; i < n; ++i) {
    float mu = X.row(i).mean();
    float var = (X.row(i).array() - mu).square().mean();
    float inv = 1.0f / std::sqrt(var + eps);
    c.inv_std(i) = inv;
    c.xhat.row(i) = (X.row(i).array() - mu) * inv;
    out.row(i) = c.xhat.row(i).cwiseProduct(g.w.row(0)) + b.w.row(0);
  }
  return out;
}

inline Mat ln_backward(const Mat& dY, Tensor& g, Tensor& b, const LnCache& c) {
  long n = dY.rows(), d = dY.cols();
  Mat dX(n, d);
  for (long i = 0; i < n; ++i) {
    Eigen::RowVectorXf dyg = dY.row(i).cwiseProduct(g.w.row(0));
    float m1 = dyg.mean();
    float m2 = dyg.cwiseProduct(c.xhat.row(i)).mean();
    dX.row(i) = (dyg.array() - m1 - c.xhat.row(i).array() * m2) * c.inv_std(i);
    g.g.row(0) += dY.row(i).cwiseProduct(c.xhat.row(i));
    b.g.row(0) += dY.row(i);
  }
  return dX;
}

inline float gelu(float x) {
  const float k = 0.7978845608028654f;  // sqrt(2/pi)
  return 0.5f * x * (1.0f + std::tanh(k * (x + 0.044715f * x * x * x)));
}
inline float gelu_grad(float x) {
  const float k = 0.7978845608028654f;
  float u = k * (x + 0.044715f * x * x * x);
  float t = std::tanh(u);
  float du = k * (1.0f + 3.0f * 0.044715f * x * x);
  return 0.5f * (1.0f + t) + 0.5f * x * (1.0f - t * t) * du;
}

struct DropMask {
  Mat mask;  // empty in eval mode
  bool active = false;
};

inline Mat dropout_forward(const Mat& X, float p, bool train, std::mt19937_64& rng,
                           DropMask& dm) {
  if (!train || p <= 0.0f) {
    dm.active = false;
    return X;
  }
  dm.active = true;
  dm.mask.resize(X.rows(), X.cols());
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  float scale = 1.0f / (1.0f - p);
  for (long j = 0; j < X.cols(); ++j)
    for (long i = 0; i < X.rows(); ++i) dm.mask(i, j) = u(rng) < p ? 0.0f : scale;
  return X.cwiseProduct(dm.mask);
}

inline Mat dropout_backward(const Mat& dY, const DropMask& dm) {
  return dm.active ? dY.cwiseProduct(dm.mask).eval() : dY;
}

struct LayerCache {
  Mat X0;                 // block input
  Mat Q, K, V;            // projections
  std::vector<Mat> A;     // per-head attention probabilities
  Mat C;                  // concatenated head outputs
  Mat O;                  // C*Wo + bo (pre-dropout)
  DropMask drop_o;
  LnCache ln1;
  Mat X1;                 // after first layer norm
  Mat Hpre, H;            // feed-forward hidden pre/post activation
  Mat F;                  // ffn output pre-dropout
  DropMask drop_f;
  LnCache ln2;
};

struct ForwardCache {
  std::vector<int> ids;
  Mat emb_pre;  // embeddings before layer norm
  LnCache ln_e;
  DropMask drop_e;
  Mat X;  // encoder input after embedding norm + dropout
  std::vector<LayerCache> layers;
  Eigen::RowVectorXf cls;  // pooled [cls] state
  DropMask drop_h;
  Eigen::RowVectorXf logits;
};

class Encoder {
 public:
  EncoderWeights w;

  // Forward pass for one example. train=false disables dropout, making the
  // pass bitwise deterministic.
  void forward(const std::vector<int>& ids, bool train, float p,
               std::mt19937_64& rng, ForwardCache& c) const {
    int d = w.spec.d_model;
    int heads = w.spec.heads;
    int dh = d / heads;
    float inv_sqrt = 1.0f / std::sqrt(static_cast<float>(dh));
    long n = static_cast<long>(ids.size());

    c.ids = ids;
    c.emb_pre.resize(n, d);
    for (long t = 0; t < n; ++t)
      c.emb_pre.row(t) = w.tok_emb.w.row(ids[static_cast<size_t>(t)]) +
                         w.pos_emb.w.row(t);
    Mat x = ln_forward(c.emb_pre, w.ln_e_g, w.ln_e_b, c.ln_e);
    c.X = dropout_forward(x, p, train, rng, c.drop_e);

    c.layers.assign(static_cast<size_t>(w.spec.layers), LayerCache{});
    Mat cur = c.X;
    for (int li = 0; li < w.spec.layers; ++li) {
      const LayerWeights& L = w.layer(li);
      LayerCache& lc = c.layers[static_cast<size_t>(li)];
      lc.X0 = cur;
      lc.Q = (cur * L.Wq.w).rowwise() + L.bq.w.row(0);
      lc.K = (cur * L.Wk.w).rowwise() + L.bk.w.row(0);
      lc.V = (cur * L.Wv.w).rowwise() + L.bv.w.row(0);
      lc.A.resize(static_cast<size_t>(heads));
      lc.C.resize(n, d);
      for (int h = 0; h < heads; ++h) {
        auto Qh = lc.Q.middleCols(h * dh, dh);
        auto Kh = lc.K.middleCols(h * dh, dh);
        auto Vh = lc.V.middleCols(h * dh, dh);
        Mat S = (Qh * Kh.transpose()) * inv_sqrt;
        Mat& A = lc.A[static_cast<size_t>(h)];
        A.resize(n, n);
        for (long i = 0; i < n; ++i) {
          float mx = S.row(i).maxCoeff();
          Eigen::RowVectorXf e = (S.row(i).array() - mx).exp();
          A.row(i) = e / e.sum();
        }
        lc.C.middleCols(h * dh, dh) = A * Vh;
      }
      lc.O = (lc.C * L.Wo.w).rowwise() + L.bo.w.row(0);
      Mat od = dropout_forward(lc.O, p, train, rng, lc.drop_o);
      lc.X1 = ln_forward(lc.X0 + od, L.ln1_g, L.ln1_b, lc.ln1);
      lc.Hpre = (lc.X1 * L.W1.w).rowwise() + L.b1.w.row(0);
      lc.H = lc.Hpre.unaryExpr([](float v) { return gelu(v); });
      lc.F = (lc.H * L.W2.w).rowwise() + L.b2.w.row(0);
      Mat fd = dropout_forward(lc.F, p, train, rng, lc.drop_f);
      cur = ln_forward(lc.X1 + fd, L.ln2_g, L.ln2_b, lc.ln2);
    }
    // Mean pooling over final hidden states: every token contributes to the
    // sentence representation (and receives gradient) directly.
    c.cls = cur.colwise().mean();
    Mat clsm(1, d);
    clsm.row(0) = c.cls;
    Mat hd = dropout_forward(clsm, p, train, rng, c.drop_h);
    c.logits = ((hd.row(0) * w.Wc.w) + w.bc.w.row(0)) * kLogitScale;
  }

  // Backward pass; dlogits is the loss gradient. Accumulates into tensor
  // gradients.
  void backward(ForwardCache& c, const Eigen::RowVectorXf& dlogits) {
    int d = w.spec.d_model;
    int heads = w.spec.heads;
    int dh = d / heads;
    float inv_sqrt = 1.0f / std::sqrt(static_cast<float>(dh));
    long n = static_cast<long>(c.ids.size());

    Mat clsm(1, d);
    clsm.row(0) = c.cls;
    Mat hd = c.drop_h.active ? clsm.cwiseProduct(c.drop_h.mask).eval() : clsm;
    Eigen::RowVectorXf dl = dlogits * kLogitScale;
    w.Wc.g += hd.transpose() * dl;
    w.bc.g.row(0) += dl;
    Mat dhd = dl * w.Wc.w.transpose();
    Mat dcls = dropout_backward(dhd, c.drop_h);

    Mat dcur(n, d);
    dcur.rowwise() = (dcls.row(0) / static_cast<float>(n)).eval();

    for (int li = w.spec.layers - 1; li >= 0; --li) {
      LayerWeights& L = w.layer(li);
      LayerCache& lc = c.layers[static_cast<size_t>(li)];
      Mat dR2 = ln_backward(dcur, L.ln2_g, L.ln2_b, lc.ln2);
      Mat dX1 = dR2;
      Mat dF = dropout_backward(dR2, lc.drop_f);
      L.W2.g += lc.H.transpose() * dF;
      L.b2.g.row(0) += dF.colwise().sum();
      Mat dH = dF * L.W2.w.transpose();
      Mat dHpre =
          dH.cwiseProduct(lc.Hpre.unaryExpr([](float v) { return gelu_grad(v); }));
      L.W1.g += lc.X1.transpose() * dHpre;
      L.b1.g.row(0) += dHpre.colwise().sum();
      dX1 += dHpre * L.W1.w.transpose();

      Mat dR1 = ln_backward(dX1, L.ln1_g, L.ln1_b, lc.ln1);
      Mat dX0 = dR1;
      Mat dO = dropout_backward(dR1, lc.drop_o);
      L.Wo.g += lc.C.transpose() * dO;
      L.bo.g.row(0) += dO.colwise().sum();
      Mat dC = dO * L.Wo.w.transpose();

      Mat dQ(n, d), dK(n, d), dV(n, d);
      for (int h = 0; h < heads; ++h) {
        auto Qh = lc.Q.middleCols(h * dh, dh);
        auto Kh = lc.K.middleCols(h * dh, dh);
        auto Vh = lc.V.middleCols(h * dh, dh);
        const Mat& A = lc.A[static_cast<size_t>(h)];
        Mat dAV = dC.middleCols(h * dh, dh);
        Mat dA = dAV * Vh.transpose();
        dV.middleCols(h * dh, dh) = A.transpose() * dAV;
        Mat dS(n, n);
        for (long i = 0; i < n; ++i) {
          float dot = dA.row(i).dot(A.row(i));
          dS.row(i) = A.row(i).array() * (dA.row(i).array() - dot);
        }
        dQ.middleCols(h * dh, dh) = (dS * Kh) * inv_sqrt;
        dK.middleCols(h * dh, dh) = (dS.transpose() * Qh) * inv_sqrt;
      }
      L.Wq.g += lc.X0.transpose() * dQ;
      L.bq.g.row(0) += dQ.colwise().sum();
      L.Wk.g += lc.X0.transpose() * dK;
      L.bk.g.row(0) += dK.colwise().sum();
      L.Wv.g += lc.X0.transpose() * dV;
      L.bv.g.row(0) += dV.colwise().sum();
      dcur = dX0 + dQ * L.Wq.w.transpose() + dK * L.Wk.w.transpose() +
             dV * L.Wv.w.transpose();
    }

    Mat dx = dropout_backward(dcur, c.drop_e);
    Mat demb = ln_backward(dx, w.ln_e_g, w.ln_e_b, c.ln_e);
    for (long t = 0; t < n; ++t) {
      w.tok_emb.g.row(c.ids[static_cast<size_t>(t)]) += demb.row(t);
      w.pos_emb.g.row(t) += demb.row(t);
    }
  }
};

inline double softmax_loss(const Eigen::RowVectorXf& logits, int label,
                           Eigen::RowVectorXf* grad) {
  float mx = logits.maxCoeff();
  Eigen::RowVectorXf e = (logits.array() - mx).exp();
  Eigen::RowVectorXf p = e / e.sum();
  if (grad) {
    *grad = p;
    (*grad)(label) -= 1.0f;
  }
  double pl = std::max(static_cast<double>(p(label)), 1e-12);
  return -std::log(pl);
}

}  // namespace lmdetail

// ------------------------------------------------------------ the classifier

class LmClassifier {
 public:
  std::string backbone_name;
  TrainConfig config;
  std::vector<std::string> class_names;
  std::vector<double> epoch_train_losses;
  std::vector<double> epoch_val_losses;
  size_t truncated_examples = 0;
  int trained_epochs = 0;

  size_t n_classes() const { return vocab_ready_ ? enc_.w.n_classes : 0; }

  std::vector<int> encode(const std::string& text, size_t* truncated) const {
    std::vector<int> ids{lmdetail::kCls};
    for (const auto& t : lmdetail::word_tokens(text))
      ids.push_back(vocab_.id(lmdetail::canon_token(t)));
    if (ids.size() > static_cast<size_t>(config.max_sequence_length)) {
      ids.resize(static_cast<size_t>(config.max_sequence_length));
      if (truncated) ++*truncated;
    }
    return ids;
  }

  LogitMatrix predict_logits(const std::vector<std::string>& texts) const {
    if (texts.empty()) fail("predict_logits: empty text list");
    if (!vocab_ready_) fail("classifier used before fine-tuning");
    LogitMatrix out;
    out.class_order = class_names;
    out.provenance = backbone_name + "#" + std::to_string(config.seed);
    std::mt19937_64 unused(0);
    lmdetail::ForwardCache cache;
    for (const auto& text : texts) {
      std::vector<int> ids = encode(text, nullptr);
      enc_.forward(ids, /*train=*/false, 0.0f, unused, cache);
      std::vector<double> row(enc_.w.n_classes);
      for (size_t c = 0; c < row.size(); ++c)
        row[c] = static_cast<double>(cache.logits(static_cast<long>(c)));
      out.values.push_back(std::move(row));
    }
    return out;
  }

  // Mean evaluation-mode loss over a labeled corpus.
  double eval_loss(const std::vector<SerializedExample>& corpus) const {
    std::mt19937_64 unused(0);
    lmdetail::ForwardCache cache;
    double total = 0;
    for (const auto& ex : corpus) {
      enc_.forward(encode(ex.text, nullptr), false, 0.0f, unused, cache);
      total += lmdetail::softmax_loss(cache.logits, ex.label, nullptr);
    }
    return corpus.empty() ? 0.0 : total / static_cast<double>(corpus.size());
  }

  // ---------------- persistence: config.json + weights blob + label map

  void save(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json cfg = {
        {"backbone", backbone_name},
        {"learning_rate", config.learning_rate},
        {"scheduler", config.scheduler == LrSchedule::linear_decay ? "linear_decay" : "none"},
        {"dropout", config.dropout},
        {"batch_size", config.batch_size},
        {"epochs", config.epochs},
        {"loss", loss_name()},
        {"seed", config.seed},
        {"max_sequence_length", config.max_sequence_length},
        {"n_classes", enc_.w.n_classes},
        {"vocab", vocab_.to_token},
        {"truncated_examples", truncated_examples},
        {"trained_epochs", trained_epochs},
        {"epoch_train_losses", epoch_train_losses},
        {"epoch_val_losses", epoch_val_losses},
    };
    std::ofstream(dir + "/config.json") << cfg.dump(1) << "\n";
    std::ofstream(dir + "/labels.json") << nlohmann::json(class_names).dump(1) << "\n";

    std::ofstream blob(dir + "/weights.bin", std::ios::binary);
    if (!blob) fail("cannot write checkpoint weights: " + dir);
    auto tensors = const_cast<LmClassifier*>(this)->enc_.w.all();
    for (const lmdetail::Tensor* t : tensors) {
      uint64_t dims[2] = {static_cast<uint64_t>(t->w.rows()),
                          static_cast<uint64_t>(t->w.cols())};
      blob.write(reinterpret_cast<const char*>(dims), sizeof(dims));
      blob.write(reinterpret_cast<const char*>(t->w.data()),
                 static_cast<std::streamsize>(sizeof(float) * t->w.size()));
    }
  }

  static LmClassifier load(const std::string& dir) {
    std::ifstream cf(dir + "/config.json");
    if (!cf) fail("checkpoint missing config.json: " + dir);
    nlohmann::json cfg;
    cf >> cfg;
    LmClassifier clf;
    clf.backbone_name = cfg.at("backbone");
    clf.config.learning_rate = cfg.at("learning_rate");
    clf.config.scheduler = cfg.at("scheduler") == "none" ? LrSchedule::none
                                                         : LrSchedule::linear_decay;
    clf.config.dropout = cfg.at("dropout");
    clf.config.batch_size = cfg.at("batch_size");
    clf.config.epochs = cfg.at("epochs");
    clf.config.loss = cfg.at("loss") == "binary_cross_entropy"
                          ? LossKind::binary_cross_entropy
                          : LossKind::cross_entropy;
    clf.config.seed = cfg.at("seed");
    clf.config.max_sequence_length = cfg.at("max_sequence_length");
    clf.truncated_examples = cfg.at("truncated_examples");
    clf.trained_epochs = cfg.at("trained_epochs");
    clf.epoch_train_losses = cfg.at("epoch_train_losses").get<std::vector<double>>();
    clf.epoch_val_losses = cfg.at("epoch_val_losses").get<std::vector<double>>();
    clf.vocab_.to_token = cfg.at("vocab").get<std::vector<std::string>>();
    for (size_t i = 3; i < clf.vocab_.to_token.size(); ++i)
      clf.vocab_.to_id[clf.vocab_.to_token[i]] = static_cast<int>(i);

    std::ifstream lf(dir + "/labels.json");
    if (!lf) fail("checkpoint missing labels.json: " + dir);
    nlohmann::json labels;
    lf >> labels;
    clf.class_names = labels.get<std::vector<std::string>>();

    clf.enc_.w.init(resolve_backbone(clf.backbone_name), clf.vocab_.size(),
                    cfg.at("n_classes").get<size_t>(),
                    clf.config.max_sequence_length, clf.config.seed);
    std::ifstream blob(dir + "/weights.bin", std::ios::binary);
    if (!blob) fail("checkpoint missing weights.bin: " + dir);
    for (lmdetail::Tensor* t : clf.enc_.w.all()) {
      uint64_t dims[2];
      blob.read(reinterpret_cast<char*>(dims), sizeof(dims));
      if (!blob || dims[0] != static_cast<uint64_t>(t->w.rows()) ||
          dims[1] != static_cast<uint64_t>(t->w.cols()))
        fail("checkpoint weights do not match the architecture: " + dir);
      blob.read(reinterpret_cast<char*>(t->w.data()),
                static_cast<std::streamsize>(sizeof(float) * t->w.size()));
    }
    clf.vocab_ready_ = true;
    return clf;
  }

  std::string loss_name() const {
    return resolved_loss_ == LossKind::binary_cross_entropy ? "binary_cross_entropy"
                                                            : "cross_entropy";
  }

 private:
  friend LmClassifier fine_tune(const std::vector<SerializedExample>&,
                                const std::string&, TrainConfig,
                                std::vector<std::string>);
  lmdetail::Vocab vocab_;
  lmdetail::Encoder enc_;
  bool vocab_ready_ = false;
  LossKind resolved_loss_ = LossKind::cross_entropy;
};

// ------------------------------------------------------------ fine-tuning

// Supervised fine-tuning on serialized rows. `class_names` fixes the label
// space; when empty it is inferred from the corpus (which must then hold at
// least two distinct labels). Binary tasks use the binary-cross-entropy form
// of the objective (identical to two-way softmax cross-entropy); multiclass
// uses softmax cross-entropy, and a mismatched explicit choice is an error.
inline LmClassifier fine_tune(const std::vector<SerializedExample>& corpus,
                              const std::string& backbone, TrainConfig cfg = {},
                              std::vector<std::string> class_names = {}) {
  using namespace lmdetail;
  if (corpus.empty()) fail("fine_tune: empty corpus");
  if (cfg.batch_size < 1) fail("fine_tune: batch_size must be at least 1");
  const BackboneSpec& spec = resolve_backbone(backbone);

  std::set<int> distinct;
  for (const auto& ex : corpus) {
    if (ex.label < 0) fail("fine_tune: label out of range before training");
    distinct.insert(ex.label);
  }
  size_t k = class_names.size();
  if (k == 0) {
    if (distinct.size() < 2) fail("fine_tune: single-class corpus");
    k = static_cast<size_t>(*distinct.rbegin()) + 1;
    for (size_t c = 0; c < k; ++c) class_names.push_back("class_" + std::to_string(c));
  }
  if (k < 2) fail("fine_tune: need at least two classes");
  for (int label : distinct)
    if (static_cast<size_t>(label) >= k)
      fail("fine_tune: label out of range before training");

  if (cfg.loss == LossKind::from_classes)
    cfg.loss = k == 2 ? LossKind::binary_cross_entropy : LossKind::cross_entropy;
  if ((cfg.loss == LossKind::binary_cross_entropy) != (k == 2))
    fail("fine_tune: binary_cross_entropy applies exactly when there are two classes");

  LmClassifier clf;
  clf.backbone_name = backbone;
  clf.config = cfg;
  clf.class_names = class_names;
  clf.resolved_loss_ = cfg.loss;
  clf.vocab_ = Vocab::build(corpus);

  // Tokenize once; truncation accounting is exact.
  std::vector<std::vector<int>> ids(corpus.size());
  clf.vocab_ready_ = true;
  for (size_t i = 0; i < corpus.size(); ++i)
    ids[i] = clf.encode(corpus[i].text, &clf.truncated_examples);

  clf.enc_.w.init(spec, clf.vocab_.size(), k, cfg.max_sequence_length, cfg.seed);
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ull + 1);

  // Stratified validation slice for early stopping. Skipped when any class is
  // too small to spare a row (e.g. overfit diagnostics) or when the slice
  // would hold fewer than 30 rows — a handful of validation rows is noise,
  // and stopping on it cuts small-corpus training off before it converges.
  std::vector<size_t> train_idx, val_idx;
  {
    std::vector<std::vector<size_t>> per_class(k);
    for (size_t i = 0; i < corpus.size(); ++i)
      per_class[static_cast<size_t>(corpus[i].label)].push_back(i);
    bool can_slice = cfg.validation_fraction > 0.0;
    for (const auto& members : per_class)
      if (!members.empty() && members.size() < 2) can_slice = false;
    if (static_cast<double>(corpus.size()) * cfg.validation_fraction < 30.0)
      can_slice = false;
    for (auto& members : per_class) {
      if (members.empty()) continue;
      if (!can_slice) {
        train_idx.insert(train_idx.end(), members.begin(), members.end());
        continue;
      }
      std::shuffle(members.begin(), members.end(), rng);
      size_t n_val = std::max<size_t>(
          1, static_cast<size_t>(std::floor(static_cast<double>(members.size()) *
                                            cfg.validation_fraction)));
      if (n_val >= members.size()) n_val = members.size() - 1;
      for (size_t j = 0; j < members.size(); ++j)
        (j < n_val ? val_idx : train_idx).push_back(members[j]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
  }

  auto val_corpus = [&] {
    std::vector<SerializedExample> v;
    for (size_t i : val_idx) v.push_back(corpus[i]);
    return v;
  }();

  auto tensors = clf.enc_.w.all();
  long adam_t = 0;
  size_t steps_per_epoch =
      (train_idx.size() + static_cast<size_t>(cfg.batch_size) - 1) /
      static_cast<size_t>(cfg.batch_size);
  double total_steps =
      static_cast<double>(std::max<size_t>(1, steps_per_epoch * static_cast<size_t>(cfg.epochs)));

  double best_val = std::numeric_limits<double>::infinity();
  int patience_left = cfg.early_stop_patience;
  std::vector<Mat> best_weights;
  auto snapshot = [&] {
    best_weights.clear();
    for (Tensor* t : tensors) best_weights.push_back(t->w);
  };
  auto restore = [&] {
    for (size_t i = 0; i < tensors.size(); ++i) tensors[i]->w = best_weights[i];
  };

  ForwardCache cache;
  std::vector<size_t> order = train_idx;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      size_t stop = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
      for (Tensor* t : tensors) t->zero_grad();
      float inv_batch = 1.0f / static_cast<float>(stop - start);
      for (size_t bi = start; bi < stop; ++bi) {
        const SerializedExample& ex = corpus[order[bi]];
        clf.enc_.forward(ids[order[bi]], true, static_cast<float>(cfg.dropout), rng,
                         cache);
        Eigen::RowVectorXf dlogits;
        epoch_loss += softmax_loss(cache.logits, ex.label, &dlogits);
        dlogits *= inv_batch;
        clf.enc_.backward(cache, dlogits);
        ++seen;
      }
      ++adam_t;
      double frac = cfg.scheduler == LrSchedule::linear_decay
                        ? std::max(0.05, 1.0 - static_cast<double>(adam_t) / total_steps)
                        : 1.0;
      float lr = static_cast<float>(cfg.learning_rate * frac);
      for (Tensor* t : tensors) t->adam(lr, adam_t);
    }
    clf.epoch_train_losses.push_back(seen ? epoch_loss / static_cast<double>(seen) : 0.0);
    clf.trained_epochs = epoch + 1;

    if (!val_corpus.empty()) {
      double vl = clf.eval_loss(val_corpus);
      clf.epoch_val_losses.push_back(vl);
      if (vl < best_val - 1e-6) {
        best_val = vl;
        patience_left = cfg.early_stop_patience;
        snapshot();
      } else if (--patience_left <= 0) {
        break;
      }
    }
  }
  if (!best_weights.empty()) restore();
  return clf;
}

inline LogitMatrix predict_logits(const LmClassifier& clf,
                                  const std::vector<std::string>& texts) {
  return clf.predict_logits(texts);
}

// ------------------------------------------------------------ backbone benchmark

// One row of the backbone-comparison table: evaluation-mode loss plus the
// full metric column set and inference throughput. Failures are isolated so
// one broken backbone cannot sink the sweep.
struct BackboneRow {
  std::string backbone;
  bool ok = false;
  std::string error;
  double loss = 0, accuracy = 0, precision = 0, recall = 0, f1 = 0;
  double auroc = 0, auprc = 0;
  double runtime_seconds = 0;       // inference wall-clock on the test split
  double samples_per_second = 0;    // test rows / runtime_seconds
  double train_seconds = 0;
  size_t truncated = 0;
};

inline std::vector<BackboneRow> backbone_benchmark(
    const std::vector<std::string>& backbones, const TabularDataset& ds,
    const SerializationTemplate& tmpl, TrainConfig cfg = {},
    const CurationPlan* plan = nullptr) {
  if (backbones.empty()) fail("backbone_benchmark: need at least one backbone");
  SplitResult sp = split(ds, 0.2, cfg.seed);
  std::vector<SerializedExample> train_corpus = render_dataset(sp.train, tmpl, plan);
  std::vector<SerializedExample> test_corpus = render_dataset(sp.test, tmpl, plan);
  std::vector<std::string> texts;
  std::vector<int> y_true;
  for (const auto& ex : test_corpus) {
    texts.push_back(ex.text);
    y_true.push_back(ex.label);
  }

  std::vector<BackboneRow> rows;
  for (const auto& name : backbones) {
    BackboneRow row;
    row.backbone = name;
    try {
      auto t0 = std::chrono::steady_clock::now();
      LmClassifier clf = fine_tune(train_corpus, name, cfg, ds.classes);
      auto t1 = std::chrono::steady_clock::now();
      LogitMatrix logits = clf.predict_logits(texts);
      auto t2 = std::chrono::steady_clock::now();

      Matrix proba(logits.rows());
      std::vector<int> y_pred;
      for (size_t i = 0; i < logits.rows(); ++i) {
        double mx = *std::max_element(logits.values[i].begin(), logits.values[i].end());
        double sum = 0;
        proba[i].resize(logits.cols());
        for (size_t c = 0; c < logits.cols(); ++c) {
          proba[i][c] = std::exp(logits.values[i][c] - mx);
          sum += proba[i][c];
        }
        for (auto& v : proba[i]) v /= sum;
        y_pred.push_back(static_cast<int>(detail::argmax_row(proba[i])));
      }

      bool binary = ds.n_classes() == 2;
      Averaging avg = binary ? Averaging::binary : Averaging::macro;
      row.loss = clf.eval_loss(test_corpus);
      row.accuracy = accuracy(y_true, y_pred);
      row.precision = precision_score(y_true, y_pred, avg);
      row.recall = recall_score(y_true, y_pred, avg);
      row.f1 = f1(y_true, y_pred, avg);
      if (binary) {
        std::vector<double> s(proba.size());
        for (size_t i = 0; i < proba.size(); ++i) s[i] = proba[i][1];
        row.auroc = auroc_binary(y_true, s);
        row.auprc = auprc_binary(y_true, s);
      } else {
        row.auroc = auroc_macro_ovr(y_true, proba);
        row.auprc = auprc_macro_ovr(y_true, proba);
      }
      row.train_seconds = std::chrono::duration<double>(t1 - t0).count();
      row.runtime_seconds = std::chrono::duration<double>(t2 - t1).count();
      row.samples_per_second =
          row.runtime_seconds > 0
              ? static_cast<double>(texts.size()) / row.runtime_seconds
              : 0.0;
      row.truncated = clf.truncated_examples;
      row.ok = true;
    } catch (const error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tabtext
