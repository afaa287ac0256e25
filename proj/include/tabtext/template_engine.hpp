#pragma once

// The serialization mapping from tabular rows to natural-language text:
// ordered clauses with {name} placeholders, {{ }} escapes, per-clause
// missing-value policies, and per-feature numeric formatting. Rendering
// respects a CurationPlan (feature selection, scaling, policy overrides).

#include <json.hpp>

#include "tabtext/curation.hpp"
#include "tabtext/dataset.hpp"

namespace tabtext {

// ------------------------------------------------------------ template types

struct Clause {
  std::string id;
  std::string text;
  std::vector<std::string> requires_features;  // placeholder names, first-use order
  MissingPolicy missing = MissingPolicy::drop();

  bool operator==(const Clause&) const = default;
};

struct SerializationTemplate {
  std::string dataset_name;
  std::vector<Clause> clauses;                // order is significant
  std::map<std::string, int> number_format;   // feature -> decimals for raw values
  int default_decimals = 1;                   // raw numerics without an entry
  int scaled_decimals = 3;                    // values substituted after scaling

  bool operator==(const SerializationTemplate&) const = default;

  std::set<std::string> referenced_features() const {
    std::set<std::string> out;
    for (const auto& c : clauses)
      for (const auto& f : c.requires_features) out.insert(f);
    return out;
  }
};

struct SerializedExample {
  std::string text;
  int label = -1;
  size_t source_row = 0;
  bool degenerate = false;  // every clause dropped
};

// ------------------------------------------------------------ parsing

namespace detail {

// Scan clause text, collecting placeholder names (first-use order). Throws
// with character offsets on malformed input.
inline std::vector<std::string> scan_placeholders(const std::string& text, size_t clause_idx) {
  std::vector<std::string> names;
  auto at = [&](size_t off) {
    return " (clause " + std::to_string(clause_idx) + ", offset " + std::to_string(off) + ")";
  };
  for (size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '{') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        i += 2;
        continue;
      }
      size_t close = text.find('}', i + 1);
      if (close == std::string::npos) fail("unbalanced '{'" + at(i));
      std::string name = text.substr(i + 1, close - i - 1);
      if (name.empty()) fail("empty placeholder name" + at(i));
      if (name.find('{') != std::string::npos) fail("nested '{' in placeholder" + at(i));
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
      i = close + 1;
    } else if (c == '}') {
      if (i + 1 < text.size() && text[i + 1] == '}') {
        i += 2;
        continue;
      }
      fail("unbalanced '}'" + at(i));
    } else {
      ++i;
    }
  }
  return names;
}

}  // namespace detail

inline Clause make_clause(std::string id, std::string text,
                          MissingPolicy policy = MissingPolicy::drop(), size_t idx = 0) {
  Clause c;
  c.id = std::move(id);
  c.text = std::move(text);
  c.missing = std::move(policy);
  c.requires_features = detail::scan_placeholders(c.text, idx);
  if (c.missing.kind != MissingPolicyKind::drop_clause) {
    auto filler_refs = detail::scan_placeholders(c.missing.filler, idx);
    if (!filler_refs.empty()) fail("filler text contains unresolved placeholders in clause " + c.id);
  }
  return c;
}

// Template documents are JSON: {"dataset": ..., "clauses": [{"id", "text",
// "missing": {"policy", "filler"}}...], "number_format": {feature: decimals},
// "scaled_decimals": 3, "default_decimals": 1}.
inline SerializationTemplate parse_template(const nlohmann::json& doc) {
  SerializationTemplate t;
  if (!doc.is_object()) fail("template document must be a JSON object");
  t.dataset_name = doc.value("dataset", "");
  t.default_decimals = doc.value("default_decimals", 1);
  t.scaled_decimals = doc.value("scaled_decimals", 3);
  if (doc.contains("number_format"))
    for (auto& [k, v] : doc["number_format"].items()) t.number_format[k] = v.get<int>();
  if (!doc.contains("clauses") || !doc["clauses"].is_array() || doc["clauses"].empty())
    fail("template document needs a non-empty 'clauses' array");

  std::set<std::string> ids;
  size_t idx = 0;
  for (const auto& cj : doc["clauses"]) {
    std::string id = cj.value("id", "c" + std::to_string(idx));
    if (!ids.insert(id).second) fail("duplicate clause id: " + id);
    MissingPolicy mp = MissingPolicy::drop();
    if (cj.contains("missing")) {
      const auto& m = cj["missing"];
      mp.kind = policy_from_name(m.value("policy", "drop_clause"));
      mp.filler = m.value("filler", "");
    }
    if (!cj.contains("text")) fail("clause " + id + " has no text");
    t.clauses.push_back(make_clause(id, cj["text"].get<std::string>(), mp, idx));
    ++idx;
  }
  return t;
}

inline SerializationTemplate parse_template(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  return parse_template(doc);
}

inline nlohmann::json template_to_json(const SerializationTemplate& t) {
  nlohmann::json doc;
  doc["dataset"] = t.dataset_name;
  doc["default_decimals"] = t.default_decimals;
  doc["scaled_decimals"] = t.scaled_decimals;
  nlohmann::json nf = nlohmann::json::object();
  for (const auto& [k, v] : t.number_format) nf[k] = v;
  doc["number_format"] = nf;
  doc["clauses"] = nlohmann::json::array();
  for (const auto& c : t.clauses) {
    nlohmann::json cj;
    cj["id"] = c.id;
    cj["text"] = c.text;
    if (c.missing.kind != MissingPolicyKind::drop_clause)
      cj["missing"] = {{"policy", policy_name(c.missing.kind)}, {"filler", c.missing.filler}};
    doc["clauses"].push_back(cj);
  }
  return doc;
}

// ------------------------------------------------------------ row views

// A cell as the renderer sees it. Rows can come from a TabularDataset or be
// fed directly (golden tests, ad-hoc rendering).
struct CellValue {
  bool missing = false;
  bool numeric = false;
  double num = 0.0;
  std::string str;

  static CellValue number(double v) { return {false, true, v, ""}; }
  static CellValue text(std::string s) { return {false, false, 0.0, std::move(s)}; }
  static CellValue none() { return {true, false, 0.0, ""}; }
};

using RowValues = std::map<std::string, CellValue>;

inline RowValues row_values(const TabularDataset& ds, size_t row) {
  RowValues out;
  for (const auto& c : ds.features) {
    if (c.is_missing(row)) out[c.name] = CellValue::none();
    else if (c.kind == FeatureKind::numeric) out[c.name] = CellValue::number(c.nums[row]);
    else out[c.name] = CellValue::text(c.strs[row]);
  }
  return out;
}

// ------------------------------------------------------------ rendering

namespace detail {

inline std::string substitute(const std::string& text, const RowValues& row,
                              const SerializationTemplate& t, const CurationPlan* plan) {
  std::string out;
  out.reserve(text.size() + 16);
  for (size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '{') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        out.push_back('{');
        i += 2;
        continue;
      }
      size_t close = text.find('}', i + 1);
      std::string name = text.substr(i + 1, close - i - 1);
      auto it = row.find(name);
      if (it == row.end()) fail("placeholder '" + name + "' not present in row schema");
      const CellValue& v = it->second;
      if (v.missing) fail("internal: substitute reached a MISSING cell for '" + name + "'");
      if (v.numeric) {
        const FittedScaler* sc = plan ? plan->scaler_for(name) : nullptr;
        if (sc && sc->kind != ScaleKind::none) {
          out += fmt_fixed(apply_scaler(v.num, *sc), t.scaled_decimals);
        } else {
          auto nf = t.number_format.find(name);
          int dec = nf == t.number_format.end() ? t.default_decimals : nf->second;
          out += fmt_fixed(v.num, dec);
        }
      } else {
        out += v.str;
      }
      i = close + 1;
    } else if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      out.push_back('}');
      i += 2;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

}  // namespace detail

// Render one row. Selection omits any clause that requires a deselected
// feature; a MISSING required value triggers the clause policy (after
// per-feature plan overrides). Clause texts join with single spaces.
inline SerializedExample render_row(const RowValues& row, const SerializationTemplate& t,
                                    const CurationPlan* plan = nullptr, int label = -1,
                                    size_t source_row = 0) {
  std::vector<std::string> parts;
  for (const auto& clause : t.clauses) {
    bool selected = true;
    for (const auto& f : clause.requires_features)
      if (plan && !plan->keeps(f)) { selected = false; break; }
    if (!selected) continue;

    const std::string* missing_feature = nullptr;
    for (const auto& f : clause.requires_features) {
      auto it = row.find(f);
      if (it == row.end()) fail("placeholder '" + f + "' not present in row schema");
      if (it->second.missing) { missing_feature = &f; break; }
    }
    if (missing_feature) {
      const MissingPolicy* pol = plan ? plan->imputation_for(*missing_feature) : nullptr;
      const MissingPolicy& eff = pol ? *pol : clause.missing;
      if (eff.kind == MissingPolicyKind::drop_clause) continue;
      parts.push_back(eff.filler);
      continue;
    }
    parts.push_back(detail::substitute(clause.text, row, t, plan));
  }

  SerializedExample ex;
  ex.label = label;
  ex.source_row = source_row;
  if (parts.empty()) {
    ex.degenerate = true;
    return ex;
  }
  std::string joined;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) joined += ' ';
    joined += parts[i];
  }
  ex.text = std::move(joined);
  return ex;
}

inline SerializedExample render_row(const TabularDataset& ds, size_t row,
                                    const SerializationTemplate& t,
                                    const CurationPlan* plan = nullptr) {
  return render_row(row_values(ds, row), t, plan, ds.labels[row], row);
}

struct RenderOptions {
  bool allow_degenerate = false;  // default: raise instead of emitting empty text
};

inline std::vector<SerializedExample> render_dataset(const TabularDataset& ds,
                                                     const SerializationTemplate& t,
                                                     const CurationPlan* plan = nullptr,
                                                     RenderOptions opt = {}) {
  // bind check up front: every placeholder must resolve against the schema
  for (const auto& f : t.referenced_features())
    if (!ds.find(f)) fail("template references unknown feature '" + f + "'");

  std::vector<SerializedExample> out;
  out.reserve(ds.n_rows());
  size_t degenerate = 0;
  for (size_t i = 0; i < ds.n_rows(); ++i) {
    SerializedExample ex;
    try {
      ex = render_row(ds, i, t, plan);
    } catch (const error& e) {
      fail("row " + std::to_string(i) + ": " + e.what());
    }
    if (ex.degenerate) ++degenerate;
    out.push_back(std::move(ex));
  }
  if (degenerate > 0 && !opt.allow_degenerate)
    fail("render produced " + std::to_string(degenerate) +
         " degenerate (all-clauses-dropped) rows; first at row " +
         std::to_string(static_cast<size_t>(
             std::find_if(out.begin(), out.end(),
                          [](const SerializedExample& e) { return e.degenerate; }) -
             out.begin())));
  return out;
}

}  // namespace tabtext
