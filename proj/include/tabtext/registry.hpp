#pragma once

// Registry of the eight builtin benchmark corpora: documented cards, source
// CSV loading (with per-dataset schema hints and recodes), and a replica
// pathway for offline work. Cards always carry the documented shape; when a
// loaded file disagrees (e.g. the diabetes row count), `describe` reports the
// mismatch instead of failing.

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "tabtext/csv.hpp"
#include "tabtext/dataset.hpp"
#include "tabtext/synthdata.hpp"

namespace tabtext {

struct BuiltinInfo {
  std::string name;
  DatasetCard card;               // documented shape, verbatim
  std::string label;              // label column in the source CSV
  std::string source;             // where the real file comes from
  std::vector<FeatureSchema> hints;  // free-text / categorical overrides
};

inline const std::vector<BuiltinInfo>& builtin_infos() {
  auto text = [](const char* n) { return FeatureSchema{n, FeatureKind::text, ""}; };
  auto cat = [](const char* n) { return FeatureSchema{n, FeatureKind::categorical, ""}; };
  static const std::vector<BuiltinInfo> infos = {
      {"iris", {150, 4, false, {}}, "species",
       "https://archive.ics.uci.edu/dataset/53/iris", {}},
      {"wine", {178, 13, false, {}}, "target",
       "https://archive.ics.uci.edu/dataset/109/wine", {}},
      {"diabetes", {784, 8, true, {}}, "Outcome",
       "https://www.kaggle.com/datasets/uciml/pima-indians-diabetes-database", {}},
      {"titanic", {891, 11, true, {"missing_data"}}, "Survived",
       "https://www.kaggle.com/c/titanic/data",
       {text("Name"), text("Ticket"), text("Cabin"), cat("Pclass"), cat("Embarked")}},
      {"heloc", {10459, 23, true, {"distribution_shift"}}, "RiskPerformance",
       "https://community.fico.com/s/explainable-machine-learning-challenge", {}},
      {"fraud", {284807, 30, true, {"imbalanced"}}, "Class",
       "https://www.kaggle.com/datasets/mlg-ulb/creditcardfraud", {}},
      {"crime", {878049, 8, false, {"biased_multiclass"}}, "Category",
       "https://www.kaggle.com/c/sf-crime/data",
       {text("Dates"), text("Descript"), text("Address")}},
      {"cancer", {801, 20533, false, {"high_dimensional"}}, "Class",
       "https://archive.ics.uci.edu/dataset/401/gene+expression+cancer+rna+seq", {}},
  };
  return infos;
}

inline const BuiltinInfo& builtin_info(const std::string& name) {
  for (const auto& b : builtin_infos())
    if (b.name == name) return b;
  fail("unknown builtin dataset '" + name +
       "' (expected one of iris, wine, diabetes, titanic, heloc, fraud, crime, cancer)");
}

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& b : builtin_infos()) out.push_back(b.name);
  return out;
}

// Data directory resolution: explicit argument, else $TABTEXT_DATA_DIR,
// else ./data.
inline std::string resolve_data_dir(const std::string& dir = "") {
  if (!dir.empty()) return dir;
  if (const char* env = std::getenv("TABTEXT_DATA_DIR"); env && *env) return env;
  return "data";
}

namespace detail {

// The source Titanic file encodes class as 1/2/3 and the port as S/C/Q; the
// serialization templates speak in ordinals and port names. Recoding is
// idempotent so replica files (already recoded) pass through unchanged.
inline void recode_titanic(TabularDataset& ds) {
  if (Column* pc = ds.find("Pclass")) {
    for (auto& v : pc->strs) {
      if (v == "1") v = "1st";
      else if (v == "2") v = "2nd";
      else if (v == "3") v = "3rd";
    }
  }
  if (Column* em = ds.find("Embarked")) {
    for (auto& v : em->strs) {
      if (v == "S") v = "Southhampton";
      else if (v == "C") v = "Cherbourg";
      else if (v == "Q") v = "Queenstown";
    }
  }
}

}  // namespace detail

// In-memory replica with the documented card attached.
inline TabularDataset synth_builtin(const std::string& name, size_t size_hint = 0) {
  const BuiltinInfo& info = builtin_info(name);
  TabularDataset ds = synth::make_replica(name, size_hint);
  ds.card = info.card;
  return ds;
}

// Write a replica to `<dir>/<name>.csv` so `register_builtin` can load it.
// Returns the file path.
inline std::string write_builtin_csv(const std::string& name, const std::string& dir = "",
                                     size_t size_hint = 0) {
  const std::string root = resolve_data_dir(dir);
  std::filesystem::create_directories(root);
  TabularDataset ds = synth_builtin(name, size_hint);
  std::string path = root + "/" + name + ".csv";
  write_csv(ds, path);
  return path;
}

// Load a builtin corpus from its local source file. The returned card is the
// documented one regardless of what the file holds; shape disagreements are
// the business of `describe`, not a load failure.
inline TabularDataset register_builtin(const std::string& name,
                                       const std::string& dir = "") {
  const BuiltinInfo& info = builtin_info(name);
  const std::string root = resolve_data_dir(dir);
  const std::string path = root + "/" + name + ".csv";
  if (!std::filesystem::exists(path))
    fail("dataset file absent: " + path + " — place the " + name +
         " CSV there (source: " + info.source +
         ") or generate a replica with `tabtext data synth " + name + "`");
  LoadOptions opt;
  opt.dataset_name = name;
  opt.schema_hint = info.hints;
  TabularDataset ds = load_csv(path, info.label, opt);
  if (name == "titanic") detail::recode_titanic(ds);
  ds.card = info.card;
  ds.validate();
  return ds;
}

// Human-readable summary: actual shape, classes, missingness, and any
// disagreement between the documented card and the loaded data.
inline std::string describe(const TabularDataset& ds) {
  std::ostringstream out;
  out << ds.name << ": " << ds.n_rows() << " rows x " << ds.n_features()
      << " features, " << ds.n_classes() << " classes ("
      << (ds.card.is_binary ? "binary" : "multiclass") << " card)\n";
  out << "label: " << ds.label_column << "; classes:";
  std::vector<size_t> counts(ds.n_classes(), 0);
  for (int l : ds.labels) ++counts[static_cast<size_t>(l)];
  for (size_t c = 0; c < ds.n_classes() && c < 8; ++c)
    out << " " << ds.classes[c] << "=" << counts[c];
  if (ds.n_classes() > 8) out << " … (" << ds.n_classes() << " total)";
  out << "\n";

  size_t missing_cells = 0, cells = ds.n_rows() * ds.n_features();
  for (const auto& c : ds.features)
    for (size_t i = 0; i < ds.n_rows(); ++i) missing_cells += c.is_missing(i);
  out << "missing cells: " << missing_cells;
  if (cells) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.2f%%)", 100.0 * missing_cells / cells);
    out << buf;
  }
  out << "\n";
  out << "card: n=" << ds.card.sample_size << ", m=" << ds.card.feature_count
      << (ds.card.is_binary ? ", binary" : ", multiclass");
  for (const auto& f : ds.card.flags) out << ", " << f;
  out << "\n";

  if (ds.card.sample_size && ds.card.sample_size != ds.n_rows())
    out << "MISMATCH: card documents " << ds.card.sample_size << " rows, data holds "
        << ds.n_rows() << "\n";
  if (ds.card.feature_count && ds.card.feature_count != ds.n_features())
    out << "MISMATCH: card documents " << ds.card.feature_count
        << " features, data holds " << ds.n_features() << "\n";
  if (ds.card.is_binary != (ds.n_classes() == 2))
    out << "MISMATCH: card says " << (ds.card.is_binary ? "binary" : "multiclass")
        << ", data has " << ds.n_classes() << " classes\n";
  return out.str();
}

// Card manifest persisted alongside cached datasets.
inline nlohmann::json card_to_json(const DatasetCard& c) {
  return {{"sample_size", c.sample_size},
          {"feature_count", c.feature_count},
          {"is_binary", c.is_binary},
          {"flags", c.flags}};
}

inline DatasetCard card_from_json(const nlohmann::json& j) {
  DatasetCard c;
  c.sample_size = j.at("sample_size").get<size_t>();
  c.feature_count = j.at("feature_count").get<size_t>();
  c.is_binary = j.at("is_binary").get<bool>();
  for (const auto& f : j.at("flags")) c.flags.insert(f.get<std::string>());
  return c;
}

inline void write_card_manifest(const TabularDataset& ds, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + ds.name + ".card.json");
  if (!out) fail("cannot write card manifest for " + ds.name);
  out << card_to_json(ds.card).dump(2) << "\n";
}

}  // namespace tabtext
