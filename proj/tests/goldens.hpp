#pragma once

// Frozen expected serializations for the published example rows, plus the
// row fixtures that feed them. Shared by the unit tests and the acceptance
// suite. Strings are byte-exact, including double spaces and punctuation.

#include <map>
#include <string>

#include "tabtext/template_engine.hpp"

namespace goldens {

using tabtext::CellValue;
using tabtext::RowValues;

// ---------------------------------------------------------------- iris

inline const std::string iris_text =
    "The Iris has sepal Length is 5.1 centimeters. Sepal width is 3.5 centimeters. "
    "Petal length is  1.4  centimeters. Petal width is  0.2  centimeters.";

inline RowValues iris_row() {
  return {{"sepal_length", CellValue::number(5.1)},
          {"sepal_width", CellValue::number(3.5)},
          {"petal_length", CellValue::number(1.4)},
          {"petal_width", CellValue::number(0.2)}};
}

// ---------------------------------------------------------------- wine

inline const std::string wine_text =
    "My wine has an Alcohol percentage of 14.2%. The Malic Acid is 1.7 grams per liter. "
    "Ash is 2.4  grams per liter. Alcalinity of ash is 15.6 pH. Magnesium is 127 "
    "milligrams per liter. Total Phenols is 2.8  milligrams per liter. Flavanoids is 3.1 "
    "milligrams per liter. Nonflavanoid phenols is 0.3 milligrams per liter. "
    "Proanthocyanins is 2.3 milligrams per liter. Color intensity is 5.6. Hue is 1.0. "
    "OD280/OD315 of diluted wines is 3.9. Proline is 1065.\"";

inline const std::string wine_selected_text =
    "My wine has an Alcohol percentage of 14.2%. The Malic Acid is 1.7 grams per liter. "
    "Ash is 2.4  grams per liter. Total Phenols is 2.8  milligrams per liter. Flavanoids "
    "is 3.1 milligrams per liter. Color intensity is 5.6. Hue is 1.0. OD280/OD315 of "
    "diluted wines is 3.9. Proline is 1065.\"";

inline RowValues wine_row() {
  return {{"alcohol", CellValue::number(14.23)},
          {"malic_acid", CellValue::number(1.71)},
          {"ash", CellValue::number(2.43)},
          {"alcalinity_of_ash", CellValue::number(15.6)},
          {"magnesium", CellValue::number(127)},
          {"total_phenols", CellValue::number(2.80)},
          {"flavanoids", CellValue::number(3.06)},
          {"nonflavanoid_phenols", CellValue::number(0.28)},
          {"proanthocyanins", CellValue::number(2.29)},
          {"color_intensity", CellValue::number(5.64)},
          {"hue", CellValue::number(1.04)},
          {"od280_od315", CellValue::number(3.92)},
          {"proline", CellValue::number(1065)}};
}

// ---------------------------------------------------------------- diabetes

inline const std::string diabetes_text =
    "The Age is 50. The Number of times pregnant is 6. The Diastolic blood pressure is "
    "72. The Triceps skin fold thickness is 32. The Plasma glucose concentration at 2 "
    "hours in an oral glucose tolerance test (GTT) is 148. The 2-hour serum insulin is "
    "0. The Body mass index is 33.6. The Diabetes pedigree function is 0.6.";

inline const std::string diabetes_selected_text =
    "The Age is 50. The Number of times pregnant is 6. The Plasma glucose concentration "
    "at 2 hours in an oral glucose tolerance test (GTT) is 148. The Body mass index is "
    "33.6. The Diabetes pedigree function is 0.6.";

inline RowValues diabetes_row() {
  return {{"Age", CellValue::number(50)},
          {"Pregnancies", CellValue::number(6)},
          {"BloodPressure", CellValue::number(72)},
          {"SkinThickness", CellValue::number(32)},
          {"Glucose", CellValue::number(148)},
          {"Insulin", CellValue::number(0)},
          {"BMI", CellValue::number(33.6)},
          {"DiabetesPedigreeFunction", CellValue::number(0.627)}};
}

// ---------------------------------------------------------------- titanic

inline const std::string titanic_text =
    "Passenger Name is Mr. Own Harris Broaund. Passenger is 22-years-old. Passenger is "
    "male. They paid $7.2. They are in 3rd-class ticket. They embarked from "
    "Southhampton. They are with 1 sibling(s)/spouse(s). They are with 0 "
    "parent(s)/children. They are staying in cabin Unknown.";

inline const std::string titanic_sota_text =
    "Passenger Mr. Own Harris Broaund, a 22-year-old male, paid $7.2 for a 3rd-class "
    "ticket and embarked from Southhampton. They were accompanied by 1 "
    "sibling(s)/spouse(s) and 0 parent(s)/children, they were aboard in cabin Unknown.";

inline const std::string titanic_selected_text =
    "Passenger Mr. Own Harris Broaund, a 22-year-old male, paid $7.2 for a 3rd-class "
    "ticket. They were accompanied by 1 sibling(s)/spouse(s) and 0 parent(s)/children.";

inline const std::string titanic_log_scaled_text =
    "Passenger Mr. Own Harris Broaund, a 3.135-year-old male, paid $2.110 for a "
    "3rd-class ticket. They were accompanied by 1 sibling(s)/spouse(s) and 0 "
    "parent(s)/children.";

inline RowValues titanic_row() {
  RowValues r = {{"PassengerId", CellValue::number(1)},
                 {"Name", CellValue::text("Mr. Own Harris Broaund")},
                 {"Age", CellValue::number(22)},
                 {"Sex", CellValue::text("male")},
                 {"Fare", CellValue::number(7.25)},
                 {"Pclass", CellValue::text("3rd")},
                 {"Embarked", CellValue::text("Southhampton")},
                 {"SibSp", CellValue::number(1)},
                 {"Parch", CellValue::number(0)},
                 {"Ticket", CellValue::text("A/5 21171")},
                 {"Cabin", CellValue::none()}};
  return r;
}

// ---------------------------------------------------------------- heloc

inline const std::string heloc_text =
    "External Risk Estimate is 55. Months Since Oldest Trade Open is 144. Months Since "
    "Most Recent Trade Open is 4. Average Months In File is 84. Number of Satisfactory "
    "Trades is 20. Number of Trades 60 Ever 2 Derogatory/Public Records is 3. Number of "
    "Trades 90 Ever 2 Derogatory/Public Records is 0. Percent Trades Never Delinquent "
    "is 83. Months Since Most Recent Delinquency is 2. Max Delinquency 2 Public Record "
    "Last 12 Months is 3. Maximum Delinquency Ever is 5. Number of Total Trades is 23. "
    "Number of Trades Open in Last 12 Months is 1. Percent Installment Trades is 43. "
    "Months Since Most Recent Inquiry Excluding Last 7 Days is 0. Number of Inquiries "
    "Last 6 Months is 0. Number of Inquiries Last 6 Months Excluding Last 7 Days is 0. "
    "Net Fraction Revolving Burden is 33. Net Fraction Installment Burden is -8. Number "
    "of Revolving Trades with Balance is 8. Number of Installment Trades with Balance "
    "is 1. Number of Bank/National Trades with High Utilization is 1. Percent of Trades "
    "with Balance is 69.";

inline const std::string heloc_selected_text =
    "External Risk Estimate is 55. Months Since Oldest Trade Open is 144. Average "
    "Months In File is 84. Number of Satisfactory Trades is 20. Percent Trades Never "
    "Delinquent is 83. Max Delinquency 2 Public Record Last 12 Months is 3. Maximum "
    "Delinquency Ever is 5. Number of Total Trades is 23. Percent Installment Trades is "
    "43. Months Since Most Recent Inquiry Excluding Last 7 Days is 0. Number of "
    "Inquiries Last 6 Months is 0. Number of Inquiries Last 6 Months Excluding Last 7 "
    "Days is 0. Net Fraction Revolving Burden is 33. Net Fraction Installment Burden is "
    "-8. Percent of Trades with Balance is 69.";

inline RowValues heloc_row() {
  static const std::pair<const char*, double> vals[] = {
      {"ExternalRiskEstimate", 55},
      {"MSinceOldestTradeOpen", 144},
      {"MSinceMostRecentTradeOpen", 4},
      {"AverageMInFile", 84},
      {"NumSatisfactoryTrades", 20},
      {"NumTrades60Ever2DerogPubRec", 3},
      {"NumTrades90Ever2DerogPubRec", 0},
      {"PercentTradesNeverDelq", 83},
      {"MSinceMostRecentDelq", 2},
      {"MaxDelq2PublicRecLast12M", 3},
      {"MaxDelqEver", 5},
      {"NumTotalTrades", 23},
      {"NumTradesOpeninLast12M", 1},
      {"PercentInstallTrades", 43},
      {"MSinceMostRecentInqexcl7days", 0},
      {"NumInqLast6M", 0},
      {"NumInqLast6Mexcl7days", 0},
      {"NetFractionRevolvingBurden", 33},
      {"NetFractionInstallBurden", -8},
      {"NumRevolvingTradesWBalance", 8},
      {"NumInstallTradesWBalance", 1},
      {"NumBank2NatlTradesWHighUtilization", 1},
      {"PercentTradesWBalance", 69},
  };
  RowValues r;
  for (const auto& [k, v] : vals) r[k] = CellValue::number(v);
  return r;
}

// ---------------------------------------------------------------- fraud

inline const std::string fraud_text =
    "V1 is -1.4. V2 is -0.1. V3 is 2.5. V4 is 1.4. V5 is -0.3. V6 is 0.5. V7 is 0.2. V8 "
    "is 0.1. V9 is 0.4. V10 is 0.1. V11 is -0.6. V12 is -0.6. V13 is -1.0. V14 is -0.3. "
    "V15 is 1.5. V16 is -0.5. V17 is 0.2. V18 is 0.0. V19 is 0.4. V20 is 0.3, V21 is "
    "-0.0. V22 is 0.3. V23 is -0.1. V24 is 0.1. V25 is 0.1. V26 is -0.2. V27 is 0.1. "
    "V28 is -0.0.";

inline const std::string fraud_selected_text =
    "V1 is -1.4. V2 is -0.1. V3 is 2.5. V4 is 1.4. V5 is -0.3. V6 is 0.5. V7 is 0.2. V9 "
    "is 0.4. V10 is 0.1. V11 is -0.6. V12 is -0.6. V14 is -0.3. V16 is -0.5. V17 is "
    "0.2. V18 is 0.0. V19 is 0.4. V20 is 0.3, V21 is -0.0.";

inline RowValues fraud_row() {
  static const double vals[28] = {-1.4, -0.1, 2.5,  1.4,  -0.3, 0.5,  0.2,  0.1, 0.4, 0.1,
                                  -0.6, -0.6, -1.0, -0.3, 1.5,  -0.5, 0.2,  0.0, 0.4, 0.3,
                                  -0.0, 0.3,  -0.1, 0.1,  0.1,  -0.2, 0.1,  -0.0};
  RowValues r;
  for (int v = 1; v <= 28; ++v) r["V" + std::to_string(v)] = CellValue::number(vals[v - 1]);
  return r;
}

// ---------------------------------------------------------------- crime

inline const std::string crime_text =
    "The description of the incident was WARRANT ARREST. The crime happened on "
    "Wednesday in the NORTHERN police district. The incident happened at OAK ST / "
    "LAGUNA ST, with coordinates (-122.4, 37.8).";

inline RowValues crime_row() {
  return {{"Dates", CellValue::text("2015-05-13 23:53:00")},
          {"Descript", CellValue::text("WARRANT ARREST")},
          {"DayOfWeek", CellValue::text("Wednesday")},
          {"PdDistrict", CellValue::text("NORTHERN")},
          {"Resolution", CellValue::text("ARREST, BOOKED")},
          {"Address", CellValue::text("OAK ST / LAGUNA ST")},
          {"X", CellValue::number(-122.425891675136)},
          {"Y", CellValue::number(37.7745985956747)}};
}

// ---------------------------------------------------------------- cancer

// Published rendering is truncated at gene 48; this is the exact prefix.
inline const std::string cancer_prefix =
    "Gene 0 is 0.0. Gene 1 is 0.6. Gene 2 is 1.6. Gene 3 is 7.6. Gene 4 is 9.6. Gene 5 "
    "is 0.0. Gene 6 is 6.8. Gene 7 is 0.0. Gene 8 is 0.0. Gene 9 is 0.0. Gene 10 is "
    "0.0. Gene 11 is 0.6. Gene 12 is 2.5. Gene 13 is 1.0. Gene 14 is 0.0. Gene 15 is "
    "0.0. Gene 16 is 0.0. Gene 17 is 0.0. Gene 18 is 0.0. Gene 19 is 11.1. Gene 20 is "
    "3.6. Gene 21 is 0.0. Gene 22 is 10.1. Gene 23 is 0.0. Gene 24 is 0.0. Gene 25 is "
    "0.0. Gene 26 is 9.9. Gene 27 is 8.5. Gene 28 is 1.2. Gene 29 is 4.9. Gene 30 is "
    "0.0. Gene 31 is 0.0. Gene 32 is 5.8. Gene 33 is 1.3. Gene 34 is 13.3. Gene 35 is "
    "6.7. Gene 36 is 0.6. Gene 37 is 0.0. Gene 38 is 9.5. Gene 39 is 0.8. Gene 40 is "
    "9.7. Gene 41 is 0.0. Gene 42 is 0.3. Gene 43 is 0.0. Gene 44 is 2.7. Gene 45 is "
    "6.7. Gene 46 is 9.8. Gene 47 is 8.8. Gene 48 is 11.5.";

inline RowValues cancer_row(size_t n_genes = 20533) {
  static const double head[49] = {0.0, 0.6, 1.6, 7.6,  9.6, 0.0, 6.8, 0.0, 0.0, 0.0,
                                  0.0, 0.6, 2.5, 1.0,  0.0, 0.0, 0.0, 0.0, 0.0, 11.1,
                                  3.6, 0.0, 10.1, 0.0, 0.0, 0.0, 9.9, 8.5, 1.2, 4.9,
                                  0.0, 0.0, 5.8, 1.3,  13.3, 6.7, 0.6, 0.0, 9.5, 0.8,
                                  9.7, 0.0, 0.3, 0.0,  2.7, 6.7, 9.8, 8.8, 11.5};
  RowValues r;
  for (size_t g = 0; g < n_genes; ++g)
    r["gene_" + std::to_string(g)] = CellValue::number(g < 49 ? head[g] : 0.0);
  return r;
}

}  // namespace goldens
