#include "depthlab/json_io.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "depthlab/errors.hpp"
#include "depthlab/exact_depth.hpp"

namespace depthlab {
namespace {

TEST(PmfJson, RoundTrip) {
  const Pmf p = exact_depth_pmf(20, 7);
  const nlohmann::json j = p;
  const Pmf q = nlohmann::json::parse(j.dump()).get<Pmf>();
  EXPECT_EQ(q.offset, p.offset);
  EXPECT_EQ(q.truncated_tail, p.truncated_tail);
  ASSERT_EQ(q.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_EQ(q.masses[i], p.masses[i]);
}

TEST(PmfJson, Rejects) {
  EXPECT_THROW(nlohmann::json::parse(R"({"offset": 0, "masses": []})").get<Pmf>(), DomainError);
  EXPECT_THROW(nlohmann::json::parse(R"({"offset": -1, "masses": [1]})").get<Pmf>(), DomainError);
  EXPECT_ANY_THROW(nlohmann::json::parse(R"({"masses": [1]})").get<Pmf>());
}

TEST(PmfJson, Document) {
  const auto doc = pmf_document(exact_depth_pmf(3, 2), 3, 2, "exact");
  EXPECT_EQ(doc["metadata"]["n"], 3);
  EXPECT_EQ(doc["metadata"]["l"], 2);
  EXPECT_EQ(doc["metadata"]["operation"], "exact");
  EXPECT_EQ(doc["metadata"]["version"], kVersion);
  EXPECT_EQ(doc["masses"].size(), 3u);
}

TEST(MeasureJson, RoundTrip) {
  const MixingMeasure d = make_discrete({{0.0, 0.25}, {1.5, 0.75}});
  const auto back = std::get<DiscreteMeasure>(measure_from_json(nlohmann::json::parse(measure_to_json(d).dump())));
  ASSERT_EQ(back.atoms.size(), 2u);
  EXPECT_EQ(back.atoms[1].location, 1.5);
  EXPECT_EQ(back.atoms[1].weight, 0.75);

  const MixingMeasure r = nu_exponential(100, 0.5);
  const auto j = measure_to_json(r);
  EXPECT_EQ(j["type"], "reflected_exponential");
  EXPECT_EQ(std::get<ReflectedExponential>(measure_from_json(j)).c, std::get<ReflectedExponential>(r).c);
  EXPECT_THROW(measure_from_json({{"type", "gamma"}}), DomainError);
}

TEST(BoundReportJson, Fields) {
  const nlohmann::json j = BoundReport::compare(0.5, 2.0);
  EXPECT_EQ(j["lhs"], 0.5);
  EXPECT_EQ(j["rhs"], 2.0);
  EXPECT_EQ(j["holds"], true);
  EXPECT_EQ(j["margin"], 1.5);
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(format_double(1e-20), "9.9999999999999995e-21");
  for (double x : {0.1, 1.0 / 7.0, 123456.789, std::numeric_limits<double>::min()}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

}  // namespace
}  // namespace depthlab
