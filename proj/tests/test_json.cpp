#include <gtest/gtest.h>

#include "qaff/json_io.hpp"

using namespace qaff;
using nlohmann::json;

TEST(MatJson, Format) {
  Basis b{Label{0, 1}, Label{0, -1}};
  Mat<QRat> m(b, b);
  m.set(0, 1, QRat::q());
  json j = mat_json(m);
  EXPECT_EQ(j["rows"], json({"0,1", "0,-1"}));
  EXPECT_EQ(j["entries"], json::array({json::array({0, 1, "(q)/(1)"})}));
}

TEST(ReportJson, RoundTripAndDeterminism) {
  Report r;
  r.suite = "s";
  r.config["b"] = "2";
  r.config["a"] = "1";
  Check c = bool_check("x", "anchor", false, "detail");
  c.params["k"] = "v";
  r.checks.push_back(c);
  r.checks.push_back(bool_check("y", "anchor", true));
  std::string t = dump(report_json(r));
  EXPECT_EQ(t, dump(report_json(report_from_json(json::parse(t)))));
  EXPECT_LT(t.find("\"a\""), t.find("\"b\""));
  EXPECT_NE(t.find("\"FAIL\""), std::string::npos);
  EXPECT_EQ(report_json(r)["summary"]["fail"], 1);
}

TEST(PotentialJson, Parse) {
  VectorPotential a = potential_from_json(json::parse(R"j({"1,-1": "(q)/(1)", "0,2": "(3)/(1)", "central": "(1)/(1)"})j"));
  EXPECT_EQ(a.at(1, -1), QRat::q());
  EXPECT_EQ(a.at(0, 2), QRat(3));
  EXPECT_EQ(a.central, QRat(1));
  EXPECT_EQ(potential_from_json(potential_json(a)).coef, a.coef);
  EXPECT_THROW(potential_from_json(json::parse(R"j({"1": "(1)/(1)"})j")), PotentialError);
  EXPECT_THROW(potential_from_json(json::parse(R"j({"1,x": "(1)/(1)"})j")), PotentialError);
  EXPECT_THROW(potential_from_json(json::parse(R"j({"1,1": 2})j")), PotentialError);
  EXPECT_THROW(potential_from_json(json::parse(R"j([1])j")), PotentialError);
}
