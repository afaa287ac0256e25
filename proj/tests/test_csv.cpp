#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tabtext/csv.hpp"

using namespace tabtext;

TEST_CASE("load_csv_stream infers schema and encodes labels", "[csv]") {
  std::istringstream in(
      "sepal_length,species,notes\n"
      "5.1,setosa,short\n"
      "7.0,versicolor,longer\n"
      "6.3,virginica,x\n");
  TabularDataset ds = load_csv_stream(in, "species");
  CHECK(ds.n_rows() == 3);
  CHECK(ds.n_features() == 2);
  CHECK(ds.col("sepal_length").kind == FeatureKind::numeric);
  CHECK(ds.col("notes").kind == FeatureKind::categorical);
  CHECK(ds.classes == std::vector<std::string>{"setosa", "versicolor", "virginica"});
  CHECK(ds.labels == std::vector<int>{0, 1, 2});
  CHECK(ds.col("sepal_length").num(1) == 7.0);
}

TEST_CASE("numeric label tokens sort numerically", "[csv]") {
  std::istringstream in("x,y\n1,10\n2,2\n3,10\n");
  TabularDataset ds = load_csv_stream(in, "y");
  CHECK(ds.classes == std::vector<std::string>{"2", "10"});
  CHECK(ds.labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("NA tokens become MISSING, case-insensitively", "[csv]") {
  std::istringstream in(
      "age,cabin,y\n"
      "22,C85,1\n"
      ",nan,0\n"
      "NA,,1\n"
      "null,B2,0\n");
  TabularDataset ds = load_csv_stream(in, "y");
  const Column& age = ds.col("age");
  CHECK(age.kind == FeatureKind::numeric);
  CHECK(age.missing_count() == 3);
  CHECK_FALSE(age.is_missing(0));
  const Column& cabin = ds.col("cabin");
  CHECK(cabin.missing_count() == 2);
  CHECK(cabin.str(3) == "B2");
}

TEST_CASE("quoted fields: delimiters, doubled quotes, embedded newlines", "[csv]") {
  std::istringstream in(
      "name,y\n"
      "\"Smith, John\",1\n"
      "\"say \"\"hi\"\"\",0\n"
      "\"two\nlines\",1\n");
  TabularDataset ds = load_csv_stream(in, "y");
  CHECK(ds.n_rows() == 3);
  CHECK(ds.col("name").str(0) == "Smith, John");
  CHECK(ds.col("name").str(1) == "say \"hi\"");
  CHECK(ds.col("name").str(2) == "two\nlines");
}

TEST_CASE("load errors: label absent, ragged rows, zero data rows", "[csv]") {
  SECTION("missing label column") {
    std::istringstream in("a,b\n1,2\n");
    CHECK_THROWS_WITH(load_csv_stream(in, "y"), Catch::Matchers::ContainsSubstring("label"));
  }
  SECTION("ragged row") {
    std::istringstream in("a,b,y\n1,2,0\n1,0\n");
    CHECK_THROWS_WITH(load_csv_stream(in, "y"), Catch::Matchers::ContainsSubstring("ragged"));
  }
  SECTION("header only") {
    std::istringstream in("a,b,y\n");
    CHECK_THROWS_WITH(load_csv_stream(in, "y"),
                      Catch::Matchers::ContainsSubstring("zero data rows"));
  }
  SECTION("missing label value") {
    std::istringstream in("a,y\n1,\n");
    CHECK_THROWS_AS(load_csv_stream(in, "y"), error);
  }
}

TEST_CASE("schema hints force kinds and attach unit phrases", "[csv]") {
  std::istringstream in("zip,y\n02139,1\n10001,0\n");
  LoadOptions opt;
  opt.schema_hint = {{"zip", FeatureKind::categorical, ""}};
  TabularDataset ds = load_csv_stream(in, "y", opt);
  CHECK(ds.col("zip").kind == FeatureKind::categorical);
  CHECK(ds.col("zip").str(0) == "02139");
}

TEST_CASE("write/load round-trip preserves schema, values, MISSING", "[csv]") {
  std::istringstream in(
      "age,fare,cabin,name,y\n"
      "22,7.25,,\"Braund, Mr. Owen\",0\n"
      ",71.2833,C85,\"Cumings, Mrs. John\",1\n"
      "26.5,0,E46,plain,0\n");
  LoadOptions opt;
  opt.schema_hint = {{"name", FeatureKind::text, ""}};
  TabularDataset ds = load_csv_stream(in, "y", opt);

  std::ostringstream out;
  write_csv_stream(ds, out);
  std::istringstream back(out.str());
  TabularDataset ds2 = load_csv_stream(back, "y", opt);

  REQUIRE(ds2.n_rows() == ds.n_rows());
  REQUIRE(ds2.n_features() == ds.n_features());
  CHECK(ds2.classes == ds.classes);
  CHECK(ds2.labels == ds.labels);
  for (size_t j = 0; j < ds.features.size(); ++j) {
    const Column& a = ds.features[j];
    const Column& b = ds2.features[j];
    CHECK(a.name == b.name);
    CHECK(a.kind == b.kind);
    CHECK(a.miss == b.miss);
    if (a.kind == FeatureKind::numeric) {
      for (size_t i = 0; i < a.size(); ++i)
        if (!a.is_missing(i)) CHECK(a.num(i) == b.num(i));
    } else {
      CHECK(a.strs == b.strs);
    }
  }
}

TEST_CASE("number formatting follows printf fixed-point semantics", "[csv]") {
  CHECK(fmt_fixed(5.1, 1) == "5.1");
  CHECK(fmt_fixed(7.25, 1) == "7.2");  // binary 7.25 sits just below the midpoint
  CHECK(fmt_fixed(22.0, 0) == "22");
  CHECK(fmt_fixed(-0.04, 1) == "-0.0");
  CHECK(fmt_fixed(std::log(23.0), 3) == "3.135");
  CHECK(fmt_fixed(2.11, 3) == "2.110");
  CHECK(fmt_fixed(1065.0, 0) == "1065");
}
