#include "sbic/collection_io.hpp"

#include <gtest/gtest.h>

#include <string>

#include "sbic/errors.hpp"

namespace sbic {
namespace {

using nlohmann::json;

json chain_doc() {
  return json::parse(R"({
    "n": 100,
    "models": [
      {"id": "r0", "loglik": -120.0, "dim": 0},
      {"id": "r1", "loglik": -100.0, "dim": 4, "prior": 2.0}
    ],
    "order": [["r0", "r1"]],
    "coefficients": [
      {"i": "r0", "j": "r0", "lambda": "0", "m": 1},
      {"i": "r1", "j": "r0", "lambda": "3/2", "m": 2},
      {"i": "r1", "j": "r1", "lambda": "2", "m": 1}
    ]
  })");
}

template <class E>
std::string error_of(const json& doc) {
  try {
    parse_model_collection(doc);
  } catch (const E& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error raised";
  return {};
}

TEST(CollectionTest, ParsesChain) {
  const SbicInput in = parse_model_collection(chain_doc());
  EXPECT_EQ(in.poset.size(), 2u);
  EXPECT_TRUE(in.poset.less(0, 1));
  EXPECT_EQ(in.n, 100);
  EXPECT_EQ(in.loglik, (std::vector<double>{-120.0, -100.0}));
  EXPECT_EQ(in.dims, (std::vector<std::int64_t>{0, 4}));
  EXPECT_EQ(in.coefficients.at(1, 0), (LearningCoefficient{Rational(3, 2), 2}));
  EXPECT_DOUBLE_EQ(in.prior[1] / in.prior[0], 2.0);
}

TEST(CollectionTest, RoundTrip) {
  const SbicInput in = parse_model_collection(chain_doc());
  const SbicInput again = parse_model_collection(model_collection_to_json(in));
  EXPECT_EQ(again.loglik, in.loglik);
  EXPECT_EQ(again.dims, in.dims);
  EXPECT_EQ(again.coefficients.entries(), in.coefficients.entries());
  EXPECT_EQ(solve(again).sbic, solve(in).sbic);
}

TEST(CollectionTest, SchemaErrorsNameTheKey) {
  json doc = chain_doc();
  doc.erase("n");
  EXPECT_NE(error_of<SchemaError>(doc).find("'n'"), std::string::npos);

  doc = chain_doc();
  doc["models"][0]["loglik"] = "high";
  EXPECT_NE(error_of<SchemaError>(doc).find("'loglik'"), std::string::npos);

  doc = chain_doc();
  doc["coefficients"][1]["lambda"] = "three halves";
  EXPECT_NE(error_of<SchemaError>(doc).find("'lambda'"), std::string::npos);

  doc = chain_doc();
  doc["order"][0] = json::array({"r0"});
  EXPECT_NE(error_of<SchemaError>(doc).find("'order'"), std::string::npos);

  EXPECT_THROW(parse_model_collection(json::array()), SchemaError);
}

TEST(CollectionTest, ValidationErrors) {
  json doc = chain_doc();
  doc["coefficients"].erase(1);
  EXPECT_NE(error_of<ValidationError>(doc).find("(i=r1, j=r0)"), std::string::npos);

  doc = chain_doc();
  doc["order"].push_back(json::array({"r1", "r0"}));
  error_of<ValidationError>(doc);

  doc = chain_doc();
  doc["order"][0][1] = "r7";
  EXPECT_NE(error_of<ValidationError>(doc).find("r7"), std::string::npos);

  doc = chain_doc();
  doc["models"][1]["id"] = "r0";
  error_of<ValidationError>(doc);

  doc = chain_doc();
  doc["n"] = 2;
  error_of<ValidationError>(doc);

  doc = chain_doc();
  doc["coefficients"][2]["lambda"] = "5/2";
  error_of<ValidationError>(doc);
}

TEST(CollectionTest, ResultSerialization) {
  const SbicInput in = parse_model_collection(chain_doc());
  const SbicResult res = solve(in);
  const json rows = result_to_json(in, res);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["id"], "r1");
  EXPECT_DOUBLE_EQ(rows[1]["sbic"].get<double>(), round_significant(res.sbic[1]));
  const std::string csv = result_to_csv(in, res);
  EXPECT_EQ(csv.rfind("id,loglik,bic,sbic,penalty,posterior_bic,posterior_sbic\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(CollectionTest, RoundSignificant) {
  EXPECT_EQ(round_significant(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(round_significant(-1234.56789012345), -1234.56789012);
  EXPECT_EQ(round_significant(0.0), 0.0);
}

}  // namespace
}  // namespace sbic
