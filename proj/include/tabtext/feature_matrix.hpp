#pragma once

// Featurization for the classical baselines: a fitted, deterministic mapping
// from a TabularDataset to a numeric matrix. Tree mode keeps NaN (the tree
// learners route missing values to a learned branch) and integer-codes
// categoricals; margin mode (SVM) median-imputes, standardizes numerics and
// one-hot encodes categoricals. Free-text columns and explicitly excluded
// columns (e.g. passenger ids) never enter the matrix.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tabtext/dataset.hpp"
#include "tabtext/metrics.hpp"  // Matrix

namespace tabtext {

enum class FeaturizeMode { tree, margin };

class Featurizer {
 public:
  FeaturizeMode mode = FeaturizeMode::tree;
  std::set<std::string> exclude;

  void fit(const TabularDataset& ds) {
    plans_.clear();
    out_names_.clear();
    for (const auto& c : ds.features) {
      if (c.kind == FeatureKind::text || exclude.count(c.name)) continue;
      Plan p;
      p.source = c.name;
      if (c.kind == FeatureKind::numeric) {
        p.kind = Plan::numeric;
        std::vector<double> present;
        for (size_t i = 0; i < ds.n_rows(); ++i)
          if (!c.is_missing(i)) present.push_back(c.nums[i]);
        if (present.empty()) fail("feature '" + c.name + "' has no present values");
        std::sort(present.begin(), present.end());
        p.median = present[present.size() / 2];
        double sum = 0;
        for (double v : present) sum += v;
        p.mean = sum / static_cast<double>(present.size());
        double ss = 0;
        for (double v : present) ss += (v - p.mean) * (v - p.mean);
        p.sd = std::sqrt(ss / static_cast<double>(present.size()));
        if (p.sd == 0.0) p.sd = 1.0;  // constant column maps to constant zero
        out_names_.push_back(c.name);
      } else {
        p.kind = Plan::categorical;
        std::set<std::string> uniq;
        for (size_t i = 0; i < ds.n_rows(); ++i)
          if (!c.is_missing(i)) uniq.insert(c.strs[i]);
        p.cats.assign(uniq.begin(), uniq.end());
        if (mode == FeaturizeMode::margin) {
          for (const auto& cat : p.cats) out_names_.push_back(c.name + "=" + cat);
        } else {
          out_names_.push_back(c.name);
        }
      }
      plans_.push_back(std::move(p));
    }
    if (out_names_.empty()) fail("featurizer: no usable columns");
    fitted_ = true;
  }

  // Rows come out in dataset order; width equals names().size().
  Matrix transform(const TabularDataset& ds) const {
    if (!fitted_) fail("featurizer used before fit");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Matrix out(ds.n_rows(), std::vector<double>(out_names_.size(), 0.0));
    size_t col = 0;
    for (const auto& p : plans_) {
      const Column* c = ds.find(p.source);
      if (!c) fail("featurizer: column '" + p.source + "' absent from dataset");
      if ((p.kind == Plan::numeric) != (c->kind == FeatureKind::numeric))
        fail("featurizer: column '" + p.source + "' changed kind since fit");
      if (p.kind == Plan::numeric) {
        for (size_t i = 0; i < ds.n_rows(); ++i) {
          double v = c->is_missing(i) ? nan : c->nums[i];
          if (mode == FeaturizeMode::margin) {
            if (std::isnan(v)) v = p.median;
            v = (v - p.mean) / p.sd;
          }
          out[i][col] = v;
        }
        ++col;
        continue;
      }
      if (mode == FeaturizeMode::margin) {
        for (size_t i = 0; i < ds.n_rows(); ++i) {
          if (c->is_missing(i)) continue;  // all-zero row block
          auto it = std::lower_bound(p.cats.begin(), p.cats.end(), c->strs[i]);
          if (it != p.cats.end() && *it == c->strs[i])
            out[i][col + static_cast<size_t>(it - p.cats.begin())] = 1.0;
        }
        col += p.cats.size();
      } else {
        for (size_t i = 0; i < ds.n_rows(); ++i) {
          double v = nan;  // missing and unseen categories stay NaN
          if (!c->is_missing(i)) {
            auto it = std::lower_bound(p.cats.begin(), p.cats.end(), c->strs[i]);
            if (it != p.cats.end() && *it == c->strs[i])
              v = static_cast<double>(it - p.cats.begin());
          }
          out[i][col] = v;
        }
        ++col;
      }
    }
    return out;
  }

  const std::vector<std::string>& names() const { return out_names_; }
  bool fitted() const { return fitted_; }

  nlohmann::json to_json() const {
    nlohmann::json plans = nlohmann::json::array();
    for (const auto& p : plans_)
      plans.push_back({{"source", p.source},
                       {"kind", p.kind == Plan::numeric ? "numeric" : "categorical"},
                       {"median", p.median},
                       {"mean", p.mean},
                       {"sd", p.sd},
                       {"cats", p.cats}});
    return {{"mode", mode == FeaturizeMode::tree ? "tree" : "margin"},
            {"exclude", exclude},
            {"names", out_names_},
            {"plans", plans}};
  }

  static Featurizer from_json(const nlohmann::json& j) {
    Featurizer f;
    f.mode = j.at("mode") == "tree" ? FeaturizeMode::tree : FeaturizeMode::margin;
    for (const auto& e : j.at("exclude")) f.exclude.insert(e.get<std::string>());
    for (const auto& n : j.at("names")) f.out_names_.push_back(n.get<std::string>());
    for (const auto& pj : j.at("plans")) {
      Plan p;
      p.source = pj.at("source");
      p.kind = pj.at("kind") == "numeric" ? Plan::numeric : Plan::categorical;
      p.median = pj.at("median");
      p.mean = pj.at("mean");
      p.sd = pj.at("sd");
      for (const auto& c : pj.at("cats")) p.cats.push_back(c.get<std::string>());
      f.plans_.push_back(std::move(p));
    }
    f.fitted_ = true;
    return f;
  }

 private:
  struct Plan {
    enum Kind { numeric, categorical } kind = numeric;
    std::string source;
    double median = 0, mean = 0, sd = 1;
    std::vector<std::string> cats;  // sorted
  };
  std::vector<Plan> plans_;
  std::vector<std::string> out_names_;
  bool fitted_ = false;
};

}  // namespace tabtext
