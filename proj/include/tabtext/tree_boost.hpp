#pragma once

// Second-order gradient-boosted decision trees, implemented twice over one
// split-finding core: a depth-wise engine (grows every node of a level up to
// max_depth, in the style of the classic depth-limited booster) and a
// leaf-wise engine (repeatedly expands the highest-gain leaf up to a
// num_leaves budget). Both use exact greedy splits on sorted feature values,
// learn a routing direction for missing values at every split, and regularize
// leaf weights with L1 soft-thresholding plus an L2 shrinkage term.
//
// Objectives: logistic for binary labels, softmax (one tree per class per
// round) for multiclass. Training is fully deterministic: no subsampling, no
// random tie-breaks (ties resolve to the lowest feature index / smallest
// threshold, missing values preferring the left branch).
//
// Split search threads per-node sorted row lists through the recursion, so a
// tree costs O(n·m·depth) instead of rescanning whole columns at every node.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tabtext/common.hpp"
#include "tabtext/metrics.hpp"  // Matrix

namespace tabtext {

enum class TreeGrowth { depth_wise, leaf_wise };

struct GbdtParams {
  TreeGrowth growth = TreeGrowth::depth_wise;
  int n_rounds = 100;
  double learning_rate = 0.3;   // shrinkage applied to every leaf weight
  double lambda_l1 = 0.0;       // soft-threshold on the gradient sum
  double lambda_l2 = 1.0;       // added to the hessian sum
  // depth-wise engine
  int max_depth = 6;
  double min_child_weight = 1.0;  // minimum hessian sum per child
  // leaf-wise engine
  int num_leaves = 31;
  int min_child_samples = 20;  // minimum rows per child
  double min_child_hessian = 1e-3;
  int leaf_wise_max_depth = 64;
};

namespace detail {

struct TreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0.0;
  bool missing_left = true;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight (already shrunk by the learning rate)
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(const std::vector<double>& x) const {
    int n = 0;
    while (nodes[static_cast<size_t>(n)].feature >= 0) {
      const TreeNode& nd = nodes[static_cast<size_t>(n)];
      double v = x[static_cast<size_t>(nd.feature)];
      bool go_left = std::isnan(v) ? nd.missing_left : v < nd.threshold;
      n = go_left ? nd.left : nd.right;
    }
    return nodes[static_cast<size_t>(n)].value;
  }
};

inline double soft_threshold(double g, double l1) {
  if (g > l1) return g - l1;
  if (g < -l1) return g + l1;
  return 0.0;
}

inline double leaf_weight(double G, double H, const GbdtParams& p) {
  return -soft_threshold(G, p.lambda_l1) / (H + p.lambda_l2);
}

inline double leaf_objective(double G, double H, const GbdtParams& p) {
  double t = soft_threshold(G, p.lambda_l1);
  return t * t / (H + p.lambda_l2);
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = true;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const std::vector<double>& grad,
              const std::vector<double>& hess, const GbdtParams& params)
      : X_(X), g_(grad), h_(hess), p_(params), side_(X.size(), 0) {}

  Tree build() {
    size_t m = X_.empty() ? 0 : X_[0].size();
    NodeData root;
    root.order.resize(m);
    root.miss.resize(m);
    for (size_t j = 0; j < m; ++j) {
      for (size_t i = 0; i < X_.size(); ++i) {
        if (std::isnan(X_[i][j]))
          root.miss[j].push_back(static_cast<int>(i));
        else
          root.order[j].push_back(static_cast<int>(i));
      }
      std::stable_sort(root.order[j].begin(), root.order[j].end(),
                       [&](int a, int b) {
                         return X_[static_cast<size_t>(a)][j] < X_[static_cast<size_t>(b)][j];
                       });
    }
    root.n_rows = X_.size();
    root.refresh_sums(g_, h_);

    Tree tree;
    tree.nodes.push_back(TreeNode{});
    if (p_.growth == TreeGrowth::depth_wise) {
      grow_depth_wise(tree, 0, std::move(root), 0);
    } else {
      grow_leaf_wise(tree, std::move(root));
    }
    return tree;
  }

 private:
  struct Sums {
    double G = 0, H = 0;
  };

  // Per-node view of the training rows: one ascending-value index list and
  // one missing-row list per feature. Partitioning preserves sortedness.
  struct NodeData {
    std::vector<std::vector<int>> order;
    std::vector<std::vector<int>> miss;
    size_t n_rows = 0;
    Sums sums;

    void refresh_sums(const std::vector<double>& g, const std::vector<double>& h) {
      sums = Sums{};
      for (int i : order[0]) {
        sums.G += g[static_cast<size_t>(i)];
        sums.H += h[static_cast<size_t>(i)];
      }
      for (int i : miss[0]) {
        sums.G += g[static_cast<size_t>(i)];
        sums.H += h[static_cast<size_t>(i)];
      }
    }
  };

  SplitChoice best_split(const NodeData& node, double min_child_weight,
                         int min_child_samples) const {
    SplitChoice best;
    if (node.n_rows < 2 * static_cast<size_t>(std::max(min_child_samples, 1))) return best;
    double parent_obj = leaf_objective(node.sums.G, node.sums.H, p_);
    for (size_t j = 0; j < node.order.size(); ++j) {
      const auto& order = node.order[j];
      if (order.size() < 2) continue;
      double G_miss = 0, H_miss = 0;
      for (int i : node.miss[j]) {
        G_miss += g_[static_cast<size_t>(i)];
        H_miss += h_[static_cast<size_t>(i)];
      }
      int n_miss = static_cast<int>(node.miss[j].size());
      double G_left = 0, H_left = 0;
      int n_left = 0;
      for (size_t k = 0; k + 1 < order.size(); ++k) {
        int i = order[k];
        G_left += g_[static_cast<size_t>(i)];
        H_left += h_[static_cast<size_t>(i)];
        ++n_left;
        double v = X_[static_cast<size_t>(i)][j];
        double next = X_[static_cast<size_t>(order[k + 1])][j];
        if (next <= v) continue;  // tie: no boundary here
        double thr = v + (next - v) / 2;
        if (thr == v) thr = next;  // adjacent representable values
        for (int miss_left = 1; miss_left >= 0; --miss_left) {
          double GL = G_left + (miss_left ? G_miss : 0.0);
          double HL = H_left + (miss_left ? H_miss : 0.0);
          double GR = node.sums.G - GL;
          double HR = node.sums.H - HL;
          int nL = n_left + (miss_left ? n_miss : 0);
          int nR = static_cast<int>(node.n_rows) - nL;
          if (HL < min_child_weight || HR < min_child_weight) continue;
          if (nL < min_child_samples || nR < min_child_samples) continue;
          double gain =
              0.5 * (leaf_objective(GL, HL, p_) + leaf_objective(GR, HR, p_) - parent_obj);
          if (gain > best.gain + 1e-12) {
            best.found = true;
            best.feature = static_cast<int>(j);
            best.threshold = thr;
            best.missing_left = miss_left != 0;
            best.gain = gain;
          }
        }
      }
    }
    return best;
  }

  // Consumes the parent's lists; children inherit sorted order.
  std::pair<NodeData, NodeData> partition(NodeData parent, const SplitChoice& s) {
    size_t j = static_cast<size_t>(s.feature);
    for (int i : parent.order[j]) {
      double v = X_[static_cast<size_t>(i)][j];
      side_[static_cast<size_t>(i)] = v < s.threshold ? 1 : 0;
    }
    for (int i : parent.miss[j]) side_[static_cast<size_t>(i)] = s.missing_left ? 1 : 0;

    size_t m = parent.order.size();
    NodeData left, right;
    left.order.resize(m);
    left.miss.resize(m);
    right.order.resize(m);
    right.miss.resize(m);
    for (size_t f = 0; f < m; ++f) {
      for (int i : parent.order[f])
        (side_[static_cast<size_t>(i)] ? left.order[f] : right.order[f]).push_back(i);
      for (int i : parent.miss[f])
        (side_[static_cast<size_t>(i)] ? left.miss[f] : right.miss[f]).push_back(i);
      parent.order[f].clear();
      parent.order[f].shrink_to_fit();
      parent.miss[f].clear();
      parent.miss[f].shrink_to_fit();
    }
    left.n_rows = left.order[0].size() + left.miss[0].size();
    right.n_rows = right.order[0].size() + right.miss[0].size();
    left.refresh_sums(g_, h_);
    right.refresh_sums(g_, h_);
    return {std::move(left), std::move(right)};
  }

  void make_leaf(Tree& tree, int node, const Sums& s) {
    tree.nodes[static_cast<size_t>(node)].feature = -1;
    tree.nodes[static_cast<size_t>(node)].value =
        p_.learning_rate * leaf_weight(s.G, s.H, p_);
  }

  void attach_split(Tree& tree, int node, const SplitChoice& s, int li, int ri) {
    auto& nd = tree.nodes[static_cast<size_t>(node)];
    nd.feature = s.feature;
    nd.threshold = s.threshold;
    nd.missing_left = s.missing_left;
    nd.left = li;
    nd.right = ri;
    nd.value = 0.0;
  }

  void grow_depth_wise(Tree& tree, int node, NodeData data, int depth) {
    if (depth >= p_.max_depth) {
      make_leaf(tree, node, data.sums);
      return;
    }
    SplitChoice best = best_split(data, p_.min_child_weight, 1);
    if (!best.found) {
      make_leaf(tree, node, data.sums);
      return;
    }
    auto [left, right] = partition(std::move(data), best);
    int li = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    int ri = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    attach_split(tree, node, best, li, ri);
    grow_depth_wise(tree, li, std::move(left), depth + 1);
    grow_depth_wise(tree, ri, std::move(right), depth + 1);
  }

  void grow_leaf_wise(Tree& tree, NodeData root) {
    struct LeafCand {
      int node = 0;
      int depth = 0;
      long order = 0;  // creation order, breaks gain ties deterministically
      NodeData data;
      SplitChoice split;
    };
    std::vector<LeafCand> open;
    long counter = 0;
    auto push_leaf = [&](int node, int depth, NodeData data) {
      LeafCand c;
      c.node = node;
      c.depth = depth;
      c.order = counter++;
      c.split = (depth < p_.leaf_wise_max_depth)
                    ? best_split(data, p_.min_child_hessian, p_.min_child_samples)
                    : SplitChoice{};
      make_leaf(tree, node, data.sums);  // provisional value; final if never split
      c.data = std::move(data);
      open.push_back(std::move(c));
    };

    push_leaf(0, 0, std::move(root));
    int leaves = 1;
    while (leaves < p_.num_leaves) {
      int pick = -1;
      for (size_t k = 0; k < open.size(); ++k) {
        if (!open[k].split.found) continue;
        if (pick < 0 || open[k].split.gain > open[static_cast<size_t>(pick)].split.gain +
                            1e-12)
          pick = static_cast<int>(k);
      }
      if (pick < 0) break;  // nothing left with positive gain
      LeafCand cand = std::move(open[static_cast<size_t>(pick)]);
      open.erase(open.begin() + pick);
      auto [left, right] = partition(std::move(cand.data), cand.split);
      int li = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});
      int ri = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});
      attach_split(tree, cand.node, cand.split, li, ri);
      push_leaf(li, cand.depth + 1, std::move(left));
      push_leaf(ri, cand.depth + 1, std::move(right));
      ++leaves;
    }
  }

  const Matrix& X_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  const GbdtParams& p_;
  std::vector<char> side_;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace detail

class GbdtModel {
 public:
  void fit(const Matrix& X, const std::vector<int>& y, size_t n_classes,
           const GbdtParams& params) {
    if (X.empty()) fail("gbdt: empty training matrix");
    if (X.size() != y.size()) fail("gbdt: row/label count mismatch");
    if (n_classes < 2) fail("gbdt: need at least two classes");
    p_ = params;
    n_classes_ = n_classes;
    size_t n = X.size();
    size_t outputs = n_classes == 2 ? 1 : n_classes;

    base_.assign(outputs, 0.0);
    std::vector<double> prior(n_classes_, 0.0);
    for (int c : y) prior[static_cast<size_t>(c)] += 1.0;
    for (auto& v : prior) v = std::max(v / static_cast<double>(n), 1e-6);
    if (outputs == 1)
      base_[0] = std::log(prior[1] / prior[0]);
    else
      for (size_t c = 0; c < outputs; ++c) base_[c] = std::log(prior[c]);

    // raw[i][c]: current margin per row and output
    std::vector<std::vector<double>> raw(n, base_);
    std::vector<double> grad(n), hess(n);
    rounds_.clear();
    rounds_.reserve(static_cast<size_t>(p_.n_rounds));

    for (int round = 0; round < p_.n_rounds; ++round) {
      std::vector<detail::Tree> group;
      group.reserve(outputs);
      if (outputs == 1) {
        for (size_t i = 0; i < n; ++i) {
          double p = detail::sigmoid(raw[i][0]);
          grad[i] = p - static_cast<double>(y[i]);
          hess[i] = std::max(p * (1.0 - p), 1e-16);
        }
        detail::TreeBuilder builder(X, grad, hess, p_);
        detail::Tree t = builder.build();
        for (size_t i = 0; i < n; ++i) raw[i][0] += t.predict(X[i]);
        group.push_back(std::move(t));
      } else {
        // softmax probabilities once per round
        std::vector<std::vector<double>> prob(n, std::vector<double>(outputs));
        for (size_t i = 0; i < n; ++i) {
          double mx = *std::max_element(raw[i].begin(), raw[i].end());
          double sum = 0;
          for (size_t c = 0; c < outputs; ++c) {
            prob[i][c] = std::exp(raw[i][c] - mx);
            sum += prob[i][c];
          }
          for (size_t c = 0; c < outputs; ++c) prob[i][c] /= sum;
        }
        for (size_t c = 0; c < outputs; ++c) {
          for (size_t i = 0; i < n; ++i) {
            double p = prob[i][c];
            grad[i] = p - (static_cast<size_t>(y[i]) == c ? 1.0 : 0.0);
            hess[i] = std::max(p * (1.0 - p), 1e-16);
          }
          detail::TreeBuilder builder(X, grad, hess, p_);
          detail::Tree t = builder.build();
          for (size_t i = 0; i < n; ++i) raw[i][c] += t.predict(X[i]);
          group.push_back(std::move(t));
        }
      }
      rounds_.push_back(std::move(group));
    }
  }

  // One row per input, one column per class, rows sum to 1.
  Matrix predict_proba(const Matrix& X) const {
    size_t outputs = base_.size();
    Matrix out(X.size(), std::vector<double>(n_classes_, 0.0));
    for (size_t i = 0; i < X.size(); ++i) {
      std::vector<double> raw = base_;
      for (const auto& group : rounds_)
        for (size_t c = 0; c < outputs; ++c) raw[c] += group[c].predict(X[i]);
      if (outputs == 1) {
        double p = detail::sigmoid(raw[0]);
        out[i][0] = 1.0 - p;
        out[i][1] = p;
      } else {
        double mx = *std::max_element(raw.begin(), raw.end());
        double sum = 0;
        for (size_t c = 0; c < outputs; ++c) {
          out[i][c] = std::exp(raw[c] - mx);
          sum += out[i][c];
        }
        for (size_t c = 0; c < outputs; ++c) out[i][c] /= sum;
      }
    }
    return out;
  }

  size_t n_classes() const { return n_classes_; }

  nlohmann::json to_json() const {
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& group : rounds_) {
      nlohmann::json jg = nlohmann::json::array();
      for (const auto& t : group) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& nd : t.nodes)
          nodes.push_back({nd.feature, nd.threshold, nd.missing_left ? 1 : 0,
                           nd.left, nd.right, nd.value});
        jg.push_back(std::move(nodes));
      }
      rounds.push_back(std::move(jg));
    }
    return {{"kind", "gbdt"},
            {"growth", p_.growth == TreeGrowth::depth_wise ? "depth_wise" : "leaf_wise"},
            {"n_classes", n_classes_},
            {"base", base_},
            {"rounds", rounds}};
  }

  static GbdtModel from_json(const nlohmann::json& j) {
    GbdtModel m;
    m.n_classes_ = j.at("n_classes").get<size_t>();
    m.p_.growth = j.at("growth") == "depth_wise" ? TreeGrowth::depth_wise
                                                 : TreeGrowth::leaf_wise;
    for (const auto& b : j.at("base")) m.base_.push_back(b.get<double>());
    for (const auto& jg : j.at("rounds")) {
      std::vector<detail::Tree> group;
      for (const auto& jt : jg) {
        detail::Tree t;
        for (const auto& jn : jt) {
          detail::TreeNode nd;
          nd.feature = jn.at(0).get<int>();
          nd.threshold = jn.at(1).get<double>();
          nd.missing_left = jn.at(2).get<int>() != 0;
          nd.left = jn.at(3).get<int>();
          nd.right = jn.at(4).get<int>();
          nd.value = jn.at(5).get<double>();
          t.nodes.push_back(nd);
        }
        group.push_back(std::move(t));
      }
      m.rounds_.push_back(std::move(group));
    }
    return m;
  }

 private:
  GbdtParams p_;
  size_t n_classes_ = 0;
  std::vector<double> base_;                       // prior margins
  std::vector<std::vector<detail::Tree>> rounds_;  // rounds × outputs
};

}  // namespace tabtext
