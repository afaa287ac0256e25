#pragma once

// Delimited-text ingestion and export. Quoted fields per RFC 4180 (embedded
// delimiters, doubled quotes, embedded newlines), schema inference, and a
// lossless round-trip writer.

#include <fstream>
#include <iostream>
#include <sstream>

#include "tabtext/dataset.hpp"

namespace tabtext {

struct LoadOptions {
  char delimiter = ',';
  std::vector<std::string> na_tokens = {"", "NA", "NaN", "null"};  // case-insensitive
  std::vector<FeatureSchema> schema_hint;  // per-column kind/unit overrides by name
  std::string dataset_name;
};

namespace detail {

inline bool is_na_token(std::string_view cell, const LoadOptions& opt) {
  for (const auto& tok : opt.na_tokens)
    if (iequals(cell, tok)) return true;
  return false;
}

// Parse one record starting at the stream position; handles quoted fields
// spanning lines. Returns false at EOF with nothing read.
inline bool read_record(std::istream& in, char delim, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == delim) {
      out.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  out.push_back(std::move(field));
  return true;
}

inline std::string quote_csv(const std::string& s, char delim) {
  bool need = s.find(delim) != std::string::npos || s.find('"') != std::string::npos ||
              s.find('\n') != std::string::npos || s.find('\r') != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

// Encode label tokens into class ids. Tokens that all parse as numbers sort
// numerically; otherwise lexicographically. Deterministic and locale-free.
inline std::vector<std::string> encode_labels(const std::vector<std::string>& raw,
                                              std::vector<int>& out_ids) {
  std::vector<std::string> uniq;
  for (const auto& t : raw) {
    bool seen = false;
    for (const auto& u : uniq)
      if (u == t) { seen = true; break; }
    if (!seen) uniq.push_back(t);
  }
  bool all_numeric = true;
  for (const auto& u : uniq)
    if (!parse_number(u)) { all_numeric = false; break; }
  std::sort(uniq.begin(), uniq.end(), [&](const std::string& a, const std::string& b) {
    if (all_numeric) return *parse_number(a) < *parse_number(b);
    return a < b;
  });
  std::map<std::string, int> id;
  for (size_t i = 0; i < uniq.size(); ++i) id[uniq[i]] = static_cast<int>(i);
  out_ids.clear();
  out_ids.reserve(raw.size());
  for (const auto& t : raw) out_ids.push_back(id[t]);
  return uniq;
}

inline TabularDataset load_csv_stream(std::istream& in, const std::string& label,
                                      const LoadOptions& opt = {}) {
  std::vector<std::string> header;
  if (!detail::read_record(in, opt.delimiter, header) || header.empty())
    fail("empty input: no header row");
  for (auto& h : header) h = trim(h);

  int label_idx = -1;
  for (size_t j = 0; j < header.size(); ++j)
    if (header[j] == label) label_idx = static_cast<int>(j);
  if (label_idx < 0) fail("label column '" + label + "' not present in header");

  std::vector<std::vector<std::string>> cells(header.size());
  std::vector<std::vector<uint8_t>> missing(header.size());
  std::vector<std::string> rec;
  size_t row = 0;
  while (detail::read_record(in, opt.delimiter, rec)) {
    if (rec.size() == 1 && rec[0].empty()) continue;  // tolerate blank trailing lines
    ++row;
    if (rec.size() != header.size())
      fail("ragged row " + std::to_string(row) + ": expected " +
           std::to_string(header.size()) + " fields, got " + std::to_string(rec.size()));
    for (size_t j = 0; j < rec.size(); ++j) {
      bool na = detail::is_na_token(rec[j], opt);
      missing[j].push_back(na ? 1 : 0);
      cells[j].push_back(na ? std::string() : rec[j]);
    }
  }
  if (row == 0) fail("zero data rows");
  if (std::count(missing[static_cast<size_t>(label_idx)].begin(),
                 missing[static_cast<size_t>(label_idx)].end(), 1) > 0)
    fail("label column contains missing values");

  TabularDataset ds;
  ds.name = opt.dataset_name;
  ds.label_column = label;

  auto hinted = [&](const std::string& name) -> const FeatureSchema* {
    for (const auto& h : opt.schema_hint)
      if (h.name == name) return &h;
    return nullptr;
  };

  for (size_t j = 0; j < header.size(); ++j) {
    if (static_cast<int>(j) == label_idx) continue;
    const FeatureSchema* hint = hinted(header[j]);
    FeatureKind kind;
    if (hint) {
      kind = hint->kind;
    } else {
      bool numeric = true, any_value = false;
      for (size_t i = 0; i < cells[j].size(); ++i) {
        if (missing[j][i]) continue;
        any_value = true;
        if (!parse_number(cells[j][i])) { numeric = false; break; }
      }
      kind = (numeric && any_value) ? FeatureKind::numeric : FeatureKind::categorical;
    }
    Column c;
    c.name = header[j];
    c.kind = kind;
    if (hint) c.unit_phrase = hint->unit_phrase;
    c.miss = missing[j];
    if (kind == FeatureKind::numeric) {
      c.nums.resize(cells[j].size(), 0.0);
      for (size_t i = 0; i < cells[j].size(); ++i) {
        if (missing[j][i]) continue;
        auto v = parse_number(cells[j][i]);
        if (!v)
          fail("column '" + c.name + "' hinted numeric but row " + std::to_string(i + 1) +
               " holds '" + cells[j][i] + "'");
        c.nums[i] = *v;
      }
    } else {
      c.strs = std::move(cells[j]);
    }
    ds.features.push_back(std::move(c));
  }

  ds.classes = encode_labels(cells[static_cast<size_t>(label_idx)], ds.labels);
  ds.card.sample_size = ds.n_rows();
  ds.card.feature_count = ds.n_features();
  ds.card.is_binary = ds.classes.size() == 2;
  ds.validate();
  return ds;
}

inline TabularDataset load_csv(const std::string& path, const std::string& label,
                               LoadOptions opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file: " + path);
  if (opt.dataset_name.empty()) {
    size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    opt.dataset_name = dot == std::string::npos ? base : base.substr(0, dot);
  }
  return load_csv_stream(in, label, opt);
}

// Export with shortest-round-trip numerics and empty cells for MISSING; a
// reload yields an equal dataset (schema, values, MISSING placement).
inline void write_csv_stream(const TabularDataset& ds, std::ostream& out, char delim = ',') {
  for (size_t j = 0; j < ds.features.size(); ++j)
    out << detail::quote_csv(ds.features[j].name, delim) << delim;
  out << detail::quote_csv(ds.label_column, delim) << "\n";
  for (size_t i = 0; i < ds.n_rows(); ++i) {
    for (size_t j = 0; j < ds.features.size(); ++j) {
      const Column& c = ds.features[j];
      if (!c.is_missing(i)) {
        if (c.kind == FeatureKind::numeric) out << fmt_roundtrip(c.nums[i]);
        else out << detail::quote_csv(c.strs[i], delim);
      }
      out << delim;
    }
    out << detail::quote_csv(ds.classes[static_cast<size_t>(ds.labels[i])], delim) << "\n";
  }
}

inline void write_csv(const TabularDataset& ds, const std::string& path, char delim = ',') {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open for writing: " + path);
  write_csv_stream(ds, out, delim);
}

}  // namespace tabtext
