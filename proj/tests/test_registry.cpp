// Registry suite: documented cards, local-file loading with hints and
// recodes, replica caching, and the card-vs-data mismatch report.

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "catch2/catch_amalgamated.hpp"
#include "tabtext/registry.hpp"

using namespace tabtext;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tabtext_reg_" + std::to_string(std::rand()) + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("builtin cards carry the documented values exactly") {
  struct Want {
    const char* name;
    size_t n, m;
    bool binary;
    std::set<std::string> flags;
  };
  const std::vector<Want> wants = {
      {"iris", 150, 4, false, {}},
      {"wine", 178, 13, false, {}},
      {"diabetes", 784, 8, true, {}},
      {"titanic", 891, 11, true, {"missing_data"}},
      {"heloc", 10459, 23, true, {"distribution_shift"}},
      {"fraud", 284807, 30, true, {"imbalanced"}},
      {"crime", 878049, 8, false, {"biased_multiclass"}},
      {"cancer", 801, 20533, false, {"high_dimensional"}},
  };
  REQUIRE(builtin_names().size() == 8);
  for (const auto& w : wants) {
    INFO(w.name);
    const auto& card = builtin_info(w.name).card;
    CHECK(card.sample_size == w.n);
    CHECK(card.feature_count == w.m);
    CHECK(card.is_binary == w.binary);
    CHECK(card.flags == w.flags);
  }
}

TEST_CASE("unknown names and absent files error usefully") {
  CHECK_THROWS_WITH(builtin_info("mnist"),
                    Catch::Matchers::ContainsSubstring("unknown builtin dataset"));
  TempDir tmp;
  CHECK_THROWS_WITH(register_builtin("iris", tmp.str()),
                    Catch::Matchers::ContainsSubstring("dataset file absent") &&
                        Catch::Matchers::ContainsSubstring("iris.csv") &&
                        Catch::Matchers::ContainsSubstring("synth"));
}

TEST_CASE("replica cache round-trips through the loader bit-exactly") {
  TempDir tmp;
  std::string path = write_builtin_csv("titanic", tmp.str());
  CHECK(fs::exists(path));
  auto ds = register_builtin("titanic", tmp.str());

  CHECK(ds.name == "titanic");
  CHECK(ds.n_rows() == 891);
  CHECK(ds.n_features() == 11);
  CHECK(ds.card.sample_size == 891);
  CHECK(ds.card.flags.count("missing_data") == 1);

  // hinted free-text columns keep their kind through the loader
  CHECK(ds.find("Name")->kind == FeatureKind::text);
  CHECK(ds.find("Cabin")->kind == FeatureKind::text);
  CHECK(ds.find("Pclass")->kind == FeatureKind::categorical);

  // MISSING survives: Age and Cabin hold the documented sentinels
  const Column& age = *ds.find("Age");
  size_t age_missing = 0;
  for (size_t i = 0; i < ds.n_rows(); ++i) age_missing += age.is_missing(i);
  CHECK(age_missing == 177);

  // shortest-round-trip numerics keep the exact moments intact
  double sum = 0;
  size_t n_present = 0;
  for (size_t i = 0; i < ds.n_rows(); ++i)
    if (!age.is_missing(i)) { sum += age.nums[i]; ++n_present; }
  CHECK(n_present == 714);
  CHECK(sum / 714.0 == Catch::Approx(29.699).margin(1e-9));

  // recode is idempotent: replica values are already ordinals / port names
  CHECK(ds.find("Pclass")->strs[0] == "3rd");
  CHECK(ds.find("Embarked")->strs[0] == "Southhampton");
}

TEST_CASE("source-format titanic columns are recoded to template vocabulary") {
  TempDir tmp;
  {
    std::ofstream out(tmp.path / "titanic.csv");
    out << "PassengerId,Name,Pclass,Sex,Age,SibSp,Parch,Ticket,Fare,Cabin,Embarked,"
           "Survived\n";
    out << "1,\"Braund, Mr. Owen Harris\",3,male,22,1,0,A/5 21171,7.25,,S,0\n";
    out << "2,\"Cumings, Mrs. John\",1,female,38,1,0,PC 17599,71.2833,C85,C,1\n";
    out << "3,\"Heikkinen, Miss. Laina\",3,female,26,0,0,STON/O2,7.925,,Q,1\n";
    out << "4,\"Futrelle, Mrs. Jacques\",1,female,35,1,0,113803,53.1,C123,S,0\n";
  }
  auto ds = register_builtin("titanic", tmp.str());
  CHECK(ds.find("Pclass")->strs[0] == "3rd");
  CHECK(ds.find("Pclass")->strs[1] == "1st");
  CHECK(ds.find("Embarked")->strs[0] == "Southhampton");
  CHECK(ds.find("Embarked")->strs[1] == "Cherbourg");
  CHECK(ds.find("Embarked")->strs[2] == "Queenstown");
  CHECK(ds.find("Cabin")->is_missing(0));
  CHECK_FALSE(ds.find("Cabin")->is_missing(1));
}

TEST_CASE("describe reports card-vs-data mismatches instead of failing") {
  TempDir tmp;
  write_builtin_csv("diabetes", tmp.str());
  auto dia = register_builtin("diabetes", tmp.str());
  std::string report = describe(dia);
  INFO(report);
  CHECK(report.find("MISMATCH: card documents 784 rows, data holds 768") !=
        std::string::npos);

  write_builtin_csv("iris", tmp.str());
  auto iris = register_builtin("iris", tmp.str());
  CHECK(describe(iris).find("MISMATCH") == std::string::npos);

  // desk-scale replicas disagree with full-scale cards by design
  auto crime = synth_builtin("crime", 2000);
  std::string crime_report = describe(crime);
  CHECK(crime_report.find("MISMATCH: card documents 878049 rows") != std::string::npos);
}

TEST_CASE("in-memory replicas carry the documented card") {
  auto ds = synth_builtin("wine");
  CHECK(ds.card.sample_size == 178);
  CHECK(ds.card.feature_count == 13);
  CHECK_FALSE(ds.card.is_binary);
}

TEST_CASE("card manifests persist and reload") {
  TempDir tmp;
  auto ds = synth_builtin("heloc");
  write_card_manifest(ds, tmp.str());
  std::ifstream in(tmp.path / "heloc.card.json");
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  DatasetCard back = card_from_json(j);
  CHECK(back == ds.card);
}

TEST_CASE("data directory resolution prefers explicit over environment") {
  ::setenv("TABTEXT_DATA_DIR", "/tmp/env_data_dir", 1);
  CHECK(resolve_data_dir("explicit") == "explicit");
  CHECK(resolve_data_dir() == "/tmp/env_data_dir");
  ::unsetenv("TABTEXT_DATA_DIR");
  CHECK(resolve_data_dir() == "data");
}
