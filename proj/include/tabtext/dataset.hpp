#pragma once

// Core tabular containers: typed columns with an explicit MISSING bitmap
// (distinguishable from "" and from 0), dataset cards, and deterministic
// stratified splitting / subsampling.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tabtext/common.hpp"

namespace tabtext {

enum class FeatureKind { numeric, categorical, text };

inline const char* kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::categorical: return "categorical";
    case FeatureKind::text: return "text";
  }
  return "?";
}

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::string unit_phrase;  // optional display phrase, e.g. "centimeters"
};

// One feature column. Numeric columns keep values in `nums`, others in
// `strs`; `miss` marks MISSING cells regardless of kind.
struct Column {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::string unit_phrase;
  std::vector<double> nums;
  std::vector<std::string> strs;
  std::vector<uint8_t> miss;

  size_t size() const { return miss.size(); }
  bool is_missing(size_t i) const { return miss[i] != 0; }
  double num(size_t i) const { return nums[i]; }
  const std::string& str(size_t i) const { return strs[i]; }

  size_t missing_count() const {
    size_t c = 0;
    for (uint8_t m : miss) c += m;
    return c;
  }

  static Column numeric(std::string name, std::vector<double> values,
                        std::vector<uint8_t> missing = {}, std::string unit = "") {
    Column c;
    c.name = std::move(name);
    c.kind = FeatureKind::numeric;
    c.nums = std::move(values);
    c.unit_phrase = std::move(unit);
    c.miss = missing.empty() ? std::vector<uint8_t>(c.nums.size(), 0) : std::move(missing);
    return c;
  }
  static Column categorical(std::string name, std::vector<std::string> values,
                            std::vector<uint8_t> missing = {}) {
    Column c;
    c.name = std::move(name);
    c.kind = FeatureKind::categorical;
    c.strs = std::move(values);
    c.miss = missing.empty() ? std::vector<uint8_t>(c.strs.size(), 0) : std::move(missing);
    return c;
  }
  static Column free_text(std::string name, std::vector<std::string> values,
                          std::vector<uint8_t> missing = {}) {
    Column c = categorical(std::move(name), std::move(values), std::move(missing));
    c.kind = FeatureKind::text;
    return c;
  }
};

// Documented characteristics of a benchmark dataset (sample size, feature
// count, task arity, phenomenon flags). For builtin datasets these are the
// published reference values; `describe` reports any mismatch with the file.
struct DatasetCard {
  size_t sample_size = 0;
  size_t feature_count = 0;
  bool is_binary = false;
  std::set<std::string> flags;  // missing_data, distribution_shift, imbalanced,
                                // biased_multiclass, high_dimensional

  bool operator==(const DatasetCard&) const = default;
};

class TabularDataset {
 public:
  std::string name;
  std::vector<Column> features;      // m columns, each of length n
  std::string label_column;
  std::vector<int> labels;           // encoded class ids, 0..k-1
  std::vector<std::string> classes;  // class display names, index == id
  DatasetCard card;

  size_t n_rows() const { return labels.size(); }
  size_t n_features() const { return features.size(); }
  size_t n_classes() const { return classes.size(); }

  Column* find(const std::string& feature) {
    return const_cast<Column*>(std::as_const(*this).find(feature));
  }
  const Column* find(const std::string& feature) const {
    for (const auto& c : features)
      if (c.name == feature) return &c;
    return nullptr;
  }
  const Column& col(const std::string& feature) const {
    const Column* c = find(feature);
    if (!c) fail("unknown feature column: " + feature);
    return *c;
  }
  int col_index(const std::string& feature) const {
    for (size_t i = 0; i < features.size(); ++i)
      if (features[i].name == feature) return static_cast<int>(i);
    return -1;
  }

  std::vector<FeatureSchema> schema() const {
    std::vector<FeatureSchema> s;
    s.reserve(features.size());
    for (const auto& c : features) s.push_back({c.name, c.kind, c.unit_phrase});
    return s;
  }

  std::vector<size_t> class_histogram() const {
    std::vector<size_t> h(classes.size(), 0);
    for (int y : labels) h[static_cast<size_t>(y)]++;
    return h;
  }

  // Row subset in the order given by idx.
  TabularDataset take(const std::vector<size_t>& idx) const {
    TabularDataset out;
    out.name = name;
    out.label_column = label_column;
    out.classes = classes;
    out.card = card;
    out.card.sample_size = idx.size();
    out.labels.reserve(idx.size());
    for (size_t i : idx) out.labels.push_back(labels[i]);
    out.features.reserve(features.size());
    for (const auto& c : features) {
      Column nc;
      nc.name = c.name;
      nc.kind = c.kind;
      nc.unit_phrase = c.unit_phrase;
      nc.miss.reserve(idx.size());
      if (c.kind == FeatureKind::numeric) {
        nc.nums.reserve(idx.size());
        for (size_t i : idx) {
          nc.nums.push_back(c.nums[i]);
          nc.miss.push_back(c.miss[i]);
        }
      } else {
        nc.strs.reserve(idx.size());
        for (size_t i : idx) {
          nc.strs.push_back(c.strs[i]);
          nc.miss.push_back(c.miss[i]);
        }
      }
      out.features.push_back(std::move(nc));
    }
    return out;
  }

  void validate() const {
    if (labels.empty()) fail("dataset has zero rows");
    if (features.empty()) fail("dataset has zero feature columns");
    std::set<std::string> seen;
    for (const auto& c : features) {
      if (!seen.insert(c.name).second) fail("duplicate feature column: " + c.name);
      if (c.name == label_column) fail("label column listed among features: " + c.name);
      if (c.size() != labels.size()) fail("ragged column: " + c.name);
      size_t vals = c.kind == FeatureKind::numeric ? c.nums.size() : c.strs.size();
      if (vals != labels.size()) fail("column value storage mismatch: " + c.name);
    }
    for (int y : labels)
      if (y < 0 || static_cast<size_t>(y) >= classes.size()) fail("label id out of range");
  }
};

// ------------------------------------------------------- split / subsample

namespace detail {

// Apportion `total` picks across classes proportionally to class sizes,
// assigning remainders to the largest fractional parts (ties: bigger class
// first, then lower class id). Deterministic.
inline std::vector<size_t> proportional_quota(const std::vector<size_t>& class_sizes,
                                              size_t total) {
  const size_t n = [&] {
    size_t s = 0;
    for (size_t c : class_sizes) s += c;
    return s;
  }();
  std::vector<size_t> base(class_sizes.size(), 0);
  std::vector<double> frac(class_sizes.size(), 0.0);
  size_t assigned = 0;
  for (size_t c = 0; c < class_sizes.size(); ++c) {
    double exact = static_cast<double>(class_sizes[c]) * static_cast<double>(total) /
                   static_cast<double>(n);
    base[c] = static_cast<size_t>(exact);
    if (base[c] > class_sizes[c]) base[c] = class_sizes[c];
    frac[c] = exact - static_cast<double>(base[c]);
    assigned += base[c];
  }
  std::vector<size_t> order(class_sizes.size());
  for (size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (frac[a] != frac[b]) return frac[a] > frac[b];
    if (class_sizes[a] != class_sizes[b]) return class_sizes[a] > class_sizes[b];
    return a < b;
  });
  while (assigned < total) {
    bool progressed = false;
    for (size_t c : order) {
      if (assigned == total) break;
      if (base[c] < class_sizes[c]) {
        base[c]++;
        assigned++;
        progressed = true;
      }
    }
    if (!progressed) break;  // every class saturated; total > n was excluded upstream
  }
  return base;
}

}  // namespace detail

struct SplitResult {
  TabularDataset train;
  TabularDataset test;
  std::vector<size_t> train_idx;
  std::vector<size_t> test_idx;
};

// Deterministic train/test split. Stratified mode preserves per-class
// proportions within one sample; indices come out sorted so row order is
// stable regardless of shuffle internals.
inline SplitResult split(const TabularDataset& ds, double test_fraction, uint64_t seed,
                         bool stratify = true) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    fail("test_fraction must lie strictly between 0 and 1");
  const size_t n = ds.n_rows();
  const size_t n_test =
      std::min<size_t>(n - 1, std::max<size_t>(1, static_cast<size_t>(
          std::llround(static_cast<double>(n) * test_fraction))));

  std::mt19937_64 rng(seed);
  std::vector<size_t> test_idx;
  if (stratify) {
    std::vector<std::vector<size_t>> by_class(ds.n_classes());
    for (size_t i = 0; i < n; ++i) by_class[static_cast<size_t>(ds.labels[i])].push_back(i);
    std::vector<size_t> sizes;
    for (auto& v : by_class) {
      if (v.size() < 2) fail("stratified split needs every class to have at least 2 rows");
      sizes.push_back(v.size());
    }
    auto quota = detail::proportional_quota(sizes, n_test);
    for (size_t c = 0; c < by_class.size(); ++c) {
      std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
      for (size_t j = 0; j < quota[c]; ++j) test_idx.push_back(by_class[c][j]);
    }
  } else {
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    test_idx.assign(all.begin(), all.begin() + static_cast<long>(n_test));
  }
  std::sort(test_idx.begin(), test_idx.end());

  std::vector<uint8_t> in_test(n, 0);
  for (size_t i : test_idx) in_test[i] = 1;
  std::vector<size_t> train_idx;
  train_idx.reserve(n - test_idx.size());
  for (size_t i = 0; i < n; ++i)
    if (!in_test[i]) train_idx.push_back(i);

  SplitResult out;
  out.train = ds.take(train_idx);
  out.test = ds.take(test_idx);
  out.train_idx = std::move(train_idx);
  out.test_idx = std::move(test_idx);
  return out;
}

// Deterministic subsample of n_target rows (stratified by default).
inline TabularDataset subsample(const TabularDataset& ds, size_t n_target, uint64_t seed,
                                bool stratify = true) {
  const size_t n = ds.n_rows();
  if (n_target > n) fail("subsample target exceeds dataset size");
  if (n_target == n) return ds;

  std::mt19937_64 rng(seed);
  std::vector<size_t> keep;
  if (stratify) {
    if (n_target < ds.n_classes())
      fail("stratified subsample target smaller than the number of classes");
    std::vector<std::vector<size_t>> by_class(ds.n_classes());
    for (size_t i = 0; i < n; ++i) by_class[static_cast<size_t>(ds.labels[i])].push_back(i);
    std::vector<size_t> sizes;
    for (auto& v : by_class) sizes.push_back(v.size());
    auto quota = detail::proportional_quota(sizes, n_target);
    // Every non-empty class stays represented; pay for it from the largest quotas.
    size_t total = 0;
    for (size_t c = 0; c < quota.size(); ++c) {
      if (quota[c] == 0 && sizes[c] > 0) quota[c] = 1;
      total += quota[c];
    }
    while (total > n_target) {
      size_t big = 0;
      for (size_t c = 1; c < quota.size(); ++c)
        if (quota[c] > quota[big]) big = c;
      if (quota[big] <= 1) break;
      quota[big]--;
      total--;
    }
    for (size_t c = 0; c < by_class.size(); ++c) {
      std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
      for (size_t j = 0; j < std::min(quota[c], by_class[c].size()); ++j)
        keep.push_back(by_class[c][j]);
    }
  } else {
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    keep.assign(all.begin(), all.begin() + static_cast<long>(n_target));
  }
  std::sort(keep.begin(), keep.end());
  return ds.take(keep);
}

}  // namespace tabtext
