#include "depthlab/verify.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "depthlab/errors.hpp"

namespace depthlab {
namespace {

VerifyConfig up_to(std::int64_t n_max) {
  VerifyConfig cfg;
  cfg.n_max = n_max;
  return cfg;
}

TEST(KeyGrid, EndpointsAndDeduplication) {
  EXPECT_EQ(key_grid(1, 20), std::vector<std::int64_t>({1}));
  EXPECT_EQ(key_grid(3, 20), std::vector<std::int64_t>({1, 2, 3}));
  const auto g = key_grid(500, 20);
  EXPECT_EQ(g.size(), 20u);
  EXPECT_EQ(g.front(), 1);
  EXPECT_EQ(g.back(), 500);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
}

TEST(Suites, NamesAndErrors) {
  EXPECT_EQ(suite_names().size(), 14u);
  EXPECT_THROW(run_suite("nope", {}), DomainError);
  VerifyConfig one;
  one.n = 1;
  EXPECT_THROW(run_suite("theorem3", one), DomainError);
  VerifyConfig zero;
  zero.n = 0;
  EXPECT_THROW(run_suite("lemma2", zero), DomainError);
}

TEST(Suites, SmallSweepsHold) {
  for (const char* suite : {"lemma2", "oracle", "moments", "lemma5", "moves"}) {
    const auto rows = run_suite(suite, up_to(suite == std::string("lemma2") ? 100 : 6));
    EXPECT_FALSE(rows.empty()) << suite;
    EXPECT_TRUE(all_hold(rows)) << suite;
    for (const auto& r : rows) EXPECT_EQ(r.suite, suite);
  }
}

TEST(Suites, RandomisedSuitesAreReproducible) {
  VerifyConfig cfg;
  cfg.trials = 50;
  const auto a = run_suite("metrics", cfg);
  const auto b = run_suite("metrics", cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].report.lhs, b[i].report.lhs);
  EXPECT_TRUE(all_hold(a));
}

TEST(Suites, SingleSizeFind) {
  VerifyConfig cfg;
  cfg.n = 5;
  cfg.samples = 1000;
  const auto rows = run_suite("find", cfg);
  EXPECT_TRUE(all_hold(rows));
  cfg.n = 12;
  EXPECT_THROW(run_suite("find", cfg), ResourceError);
}

TEST(AllHold, DetectsFailure) {
  std::vector<CheckRow> rows{{"x", "a", BoundReport::compare(1.0, 2.0)}};
  EXPECT_TRUE(all_hold(rows));
  rows.push_back({"x", "b", BoundReport::compare(3.0, 2.0)});
  EXPECT_FALSE(all_hold(rows));
  EXPECT_FALSE(rows.back().report.holds);
  EXPECT_NEAR(rows.back().report.margin, -1.0, 1e-15);
}

}  // namespace
}  // namespace depthlab
