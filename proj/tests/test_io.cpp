#include <gtest/gtest.h>

#include "perv/fixtures.hpp"
#include "support.hpp"

using namespace perv;

TEST(Json, RoundTripIsByteExact) {
  rnd::Gen gen(101);
  for (int n = 0; n < 20; ++n) {
    Document d{gen.object(gen.collinear_config(3, 1), 3), std::nullopt, {}, nullptr};
    const std::string text = dump(d);
    const Document back = parse_document(text);
    EXPECT_EQ(back, d);
    EXPECT_EQ(dump(back), text);
  }
}

TEST(Json, Schema) {
  Document d{skyscraper(GaussRat(1, 2), 1), std::nullopt, {}, nullptr};
  const Json j = to_json(d);
  EXPECT_EQ(j.at("points")[0].at("re"), "1/1");
  EXPECT_EQ(j.at("points")[0].at("im"), "2/1");
  EXPECT_EQ(j.at("phi")[0].at("dim"), 1);
  EXPECT_EQ(j.at("phi")[0].at("monodromy")[0][0], "1/1");
  EXPECT_TRUE(j.at("mplus").empty());
  // Keys come out sorted.
  EXPECT_LT(dump(d).find("\"mplus\""), dump(d).find("\"phi\""));
}

TEST(Json, OptionalRecordsSurvive) {
  for (const char* name : {"parallelogram", "collinear-five"}) {
    const Document d = fixture(name, 7);
    EXPECT_EQ(parse_document(dump(d)), d) << name;
  }
}

TEST(Json, Rejections) {
  const std::string good = dump(fixture("two-point", 3));
  for (const std::string& bad :
       {std::string("{"), std::string("[]"), std::string(R"({"points":[],"phi":[]})"),
        std::string(R"({"points":[{"re":"0/1","im":"0/1"}],"phi":[{"dim":1,"monodromy":[[1]]}],"mplus":{}})"),
        std::string(R"({"points":[{"re":"0/1","im":"0/1"}],"phi":[{"dim":1,"monodromy":[["0/1"]]}],"mplus":{}})"),
        std::string(R"({"points":[{"re":"0/1","im":"0/1"}],"phi":[{"dim":1,"monodromy":[["1/1"]]}],"mplus":{},"x":1})")}) {
    EXPECT_THROW(parse_document(bad), Error) << bad;
  }
  EXPECT_NO_THROW(parse_document(good));
  std::string wrong_shape = good;
  wrong_shape.replace(wrong_shape.find("\"0->1\""), 6, "\"0->7\"");
  EXPECT_THROW(parse_document(wrong_shape), Error);
}

TEST(Workspace, SaveLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "perv-workspace-test";
  std::filesystem::remove_all(dir);
  Workspace ws(dir);
  const Document d = fixture("collinear-triple", 11);
  ws.save("tri", d);
  EXPECT_EQ(ws.load("tri"), d);
  EXPECT_THROW(ws.load("missing"), Error);
  EXPECT_THROW(ws.save("../x", d), Error);
  std::filesystem::remove_all(dir);
}

TEST(Checks, AllFixturesPass) {
  for (const auto& name : fixture_names()) {
    const CheckReport r = run_checks(fixture(name, 5), 5);
    EXPECT_TRUE(r.passed()) << name << "\n" << r.str();
  }
}

TEST(Checks, UnitFixtureAllPass) {
  const CheckReport r = run_checks(fixture("unit", 1), 1);
  for (const auto& c : r.results) EXPECT_NE(c.status, CheckStatus::Fail) << c.name;
}

TEST(Checks, CorruptedFixtureFailsWithWitness) {
  const CheckReport r = run_checks(fixture("corrupted", 5), 5);
  EXPECT_FALSE(r.passed());
  for (const auto& c : r.results) {
    if (c.name == "picard-lefschetz") {
      EXPECT_EQ(c.status, CheckStatus::Fail);
      EXPECT_NE(c.detail.find("0->2:-"), std::string::npos) << c.detail;
    } else {
      EXPECT_NE(c.status, CheckStatus::Fail) << c.name;
    }
  }
}

TEST(Checks, ParallelogramDiagonal) {
  const Document d = fixture("parallelogram", 9);
  ASSERT_EQ(d.sheaf.size(), 4u);
  EXPECT_TRUE(d.sheaf.based(0, 3).is_zero());
  for (const auto& c : run_checks(d, 9).results)
    if (c.name == "diagonal-transports-vanish") {
      EXPECT_EQ(c.status, CheckStatus::Pass);
    }
}

TEST(Checks, Deterministic) {
  for (const auto& name : fixture_names()) {
    EXPECT_EQ(dump(fixture(name, 42)), dump(fixture(name, 42))) << name;
    EXPECT_EQ(run_checks(fixture(name, 42), 42).str(), run_checks(fixture(name, 42), 42).str()) << name;
  }
}
