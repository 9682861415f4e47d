#include "depthlab/distributions.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "depthlab/errors.hpp"
#include "depthlab/montecarlo.hpp"
#include "oracles.hpp"

namespace depthlab {
namespace {

Pmf from_masses(std::int64_t offset, std::initializer_list<double> masses) {
  Pmf p;
  p.offset = offset;
  p.masses = Eigen::Map<const Eigen::VectorXd>(masses.begin(), static_cast<Eigen::Index>(masses.size()));
  return p;
}

Pmf random_pmf(RngStream& rng) {
  Pmf p;
  p.offset = static_cast<std::int64_t>(rng.bounded(6));
  p.masses.resize(static_cast<Eigen::Index>(rng.bounded(12)) + 1);
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) p.masses[i] = rng.uniform();
  p.masses /= p.masses.sum();
  return p;
}

TEST(HarmonicTable, SmallValues) {
  const auto t0 = harmonic_table(0);
  ASSERT_EQ(t0.h.size(), 1u);
  EXPECT_EQ(t0.H(0), 0.0);

  const auto t = harmonic_table(3);
  EXPECT_DOUBLE_EQ(t.H(2), 1.5);
  EXPECT_DOUBLE_EQ(t.H2(2), 1.25);
  EXPECT_NEAR(t.H(3), oracle::harmonic(3).value(), 1e-15);  // 11/6
  EXPECT_NEAR(t.H(3), 11.0 / 6.0, 1e-15);
}

TEST(HarmonicTable, IncrementsAndLargeIndex) {
  const auto t = harmonic_table(1000000);
  for (std::int64_t k = 1; k <= 1000; ++k) {
    EXPECT_NEAR(t.H(k) - t.H(k - 1), 1.0 / static_cast<double>(k), 1e-15);
    EXPECT_NEAR(t.H2(k) - t.H2(k - 1), 1.0 / static_cast<double>(k * k), 1e-15);
  }
  // H_n = log n + gamma + 1/(2n) - 1/(12 n^2) + 1/(120 n^4) - ...
  const double n = 1e6;
  const double asymptotic = std::log(n) + 0.57721566490153286061 + 1.0 / (2 * n) - 1.0 / (12 * n * n);
  EXPECT_NEAR(t.H(1000000), asymptotic, 1e-13);
  EXPECT_NEAR(t.H2(1000000), std::numbers::pi * std::numbers::pi / 6.0 - 1.0 / n + 1.0 / (2 * n * n), 1e-13);
  EXPECT_THROW(harmonic_table(-1), DomainError);
}

TEST(RecordCount, SmallLaws) {
  const Pmf r0 = record_count_pmf(0);
  EXPECT_EQ(r0.offset, 0);
  EXPECT_EQ(r0.size(), 1);
  EXPECT_EQ(r0(0), 1.0);

  const Pmf r1 = record_count_pmf(1);
  EXPECT_EQ(r1.offset, 1);
  EXPECT_EQ(r1(1), 1.0);

  const Pmf r3 = record_count_pmf(3);
  EXPECT_NEAR(r3(1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r3(2), 0.5, 1e-15);
  EXPECT_NEAR(r3(3), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(r3(0), 0.0);
}

TEST(RecordCount, MatchesEnumeration) {
  for (int m = 1; m <= 8; ++m) {
    const Pmf r = record_count_pmf(m);
    for (const auto& [k, f] : oracle::record_law(m)) {
      EXPECT_NEAR(r(k), f.value(), 1e-15) << "m=" << m << " k=" << k;
    }
    EXPECT_TRUE(is_valid(r));
  }
}

TEST(RecordCount, MeanIsHarmonic) {
  const auto h = harmonic_table(10000);
  const auto table = record_count_table(10000);
  for (std::int64_t m : {0, 1, 2, 10, 100, 1000, 5000, 10000}) {
    const Pmf& r = table[static_cast<std::size_t>(m)];
    EXPECT_NEAR(mean_var(r).mean, h.H(m), 1e-10) << m;
    EXPECT_NEAR(mean_var(r).variance, h.H(m) - h.H2(m), 1e-9) << m;
    EXPECT_TRUE(is_valid(r));
    EXPECT_LE(r.truncated_tail, 1e-9);
  }
}

TEST(Convolve, IdentityAndBinomial) {
  const Pmf coin = from_masses(0, {0.5, 0.5});
  const Pmf id = convolve(Pmf::point_mass(0), coin);
  EXPECT_EQ(id.offset, 0);
  EXPECT_EQ(id.masses, coin.masses);

  const Pmf two = convolve(coin, coin);
  EXPECT_DOUBLE_EQ(two(0), 0.25);
  EXPECT_DOUBLE_EQ(two(1), 0.5);
  EXPECT_DOUBLE_EQ(two(2), 0.25);
}

TEST(Convolve, RecordPairsAgainstEnumeration) {
  // two independent permutations of length 2: records each in {1, 2} with prob 1/2
  const Pmf r = convolve(record_count_pmf(2), record_count_pmf(2));
  std::map<int, int> counts;
  oracle::for_each_permutation(2, [&](const std::vector<int>& a) {
    oracle::for_each_permutation(2, [&](const std::vector<int>& b) {
      ++counts[oracle::ascending_records(a) + oracle::ascending_records(b)];
    });
  });
  for (auto [k, c] : counts) EXPECT_DOUBLE_EQ(r(k), c / 4.0);
  EXPECT_DOUBLE_EQ(r(2), 0.25);
  EXPECT_DOUBLE_EQ(r(3), 0.5);
  EXPECT_DOUBLE_EQ(r(4), 0.25);
}

TEST(Convolve, TailBookkeeping) {
  Pmf p = from_masses(0, {0.5, 0.5 - 1e-12});
  p.truncated_tail = 1e-12;
  Pmf q = from_masses(2, {1.0 - 3e-12});
  q.truncated_tail = 3e-12;
  const Pmf r = convolve(p, q);
  EXPECT_EQ(r.offset, 2);
  EXPECT_LE(r.truncated_tail, p.truncated_tail + q.truncated_tail);
  EXPECT_TRUE(is_valid(r));
}

TEST(Poisson, ZeroRateIsPointMass) {
  const Pmf p = poisson_pmf(0.0);
  EXPECT_EQ(p.offset, 0);
  EXPECT_EQ(p.size(), 1);
  EXPECT_EQ(p(0), 1.0);
}

TEST(Poisson, KnownMasses) {
  EXPECT_NEAR(poisson_pmf(std::log(2.0))(0), 0.5, 1e-15);
  EXPECT_NEAR(poisson_pmf(1.0)(1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(poisson_pmf(1.0)(1), 0.367879441171442, 1e-15);
  for (double lambda : {0.3, 2.5, 17.0, 60.0}) {
    const Pmf p = poisson_pmf(lambda);
    EXPECT_EQ(p.offset, 0);
    EXPECT_LT(p.truncated_tail, 1e-12);
    EXPECT_TRUE(is_valid(p, 1e-12));
    for (int k = 0; k < 40 && k < p.size(); ++k) {
      EXPECT_NEAR(p(k), oracle::poisson_mass(lambda, k), 1e-13 * std::max(1.0, p(k) * 100)) << lambda << " " << k;
    }
    EXPECT_NEAR(mean_var(p).mean, lambda, 1e-10);
  }
}

TEST(Poisson, RejectsBadArguments) {
  EXPECT_THROW(poisson_pmf(-0.1), DomainError);
  EXPECT_THROW(poisson_pmf(1.0, 0.0), DomainError);
  EXPECT_THROW(poisson_pmf(1.0, 1e-3), DomainError);
}

TEST(Hypergeometric, MatchesBinomialProducts) {
  for (int population : {1, 5, 12, 40}) {
    for (int successes = 0; successes <= population; successes += 3) {
      for (int draws = 0; draws <= population; draws += 2) {
        const Pmf p = hypergeometric_pmf(population, successes, draws);
        EXPECT_TRUE(is_valid(p, 1e-12));
        for (int k = 0; k <= draws; ++k) {
          EXPECT_NEAR(p(k), oracle::hypergeometric_mass(population, successes, draws, k), 1e-13);
        }
      }
    }
  }
  EXPECT_THROW(hypergeometric_pmf(5, 6, 1), DomainError);
}

TEST(TotalVariation, Examples) {
  const Pmf a = from_masses(0, {0.2, 0.8});
  EXPECT_EQ(total_variation(a, a).value, 0.0);
  EXPECT_DOUBLE_EQ(total_variation(Pmf::point_mass(0), Pmf::point_mass(1)).value, 1.0);

  // Ber(1/2) vs Po(1/2), summed directly
  const Pmf po = poisson_pmf(0.5);
  const double direct = 0.5 * (std::abs(0.5 - std::exp(-0.5)) + std::abs(0.5 - 0.5 * std::exp(-0.5)) +
                               (1.0 - std::exp(-0.5) - 0.5 * std::exp(-0.5)));
  const MetricValue d = total_variation(from_masses(0, {0.5, 0.5}), po);
  EXPECT_NEAR(d.value, direct, 1e-12);
  EXPECT_NEAR(d.value, 0.196735, 1e-6);
  EXPECT_NEAR(d.error_bound, 0.5 * po.truncated_tail, 1e-30);
}

TEST(Wasserstein, Examples) {
  EXPECT_DOUBLE_EQ(wasserstein(Pmf::point_mass(0), Pmf::point_mass(3)).value, 3.0);
  const Pmf a = from_masses(2, {0.1, 0.6, 0.3});
  EXPECT_EQ(wasserstein(a, a).value, 0.0);
  // Po(lambda + c) = Po(lambda) + Po(c) independently, so the additive coupling
  // is monotone and the distance equals the mean shift c
  EXPECT_NEAR(wasserstein(poisson_pmf(1.0), poisson_pmf(2.0)).value, 1.0, 1e-11);
  EXPECT_NEAR(wasserstein(poisson_pmf(10.0), poisson_pmf(10.5)).value, 0.5, 1e-11);
}

TEST(Wasserstein, FarOffsets) {
  EXPECT_DOUBLE_EQ(wasserstein(Pmf::point_mass(1000), Pmf::point_mass(3)).value, 997.0);
  const Pmf a = from_masses(10, {0.5, 0.5});
  const Pmf b = from_masses(20, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(wasserstein(a, b).value, 10.0);
}

TEST(MetricProperties, RandomPairs) {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Pmf p = random_pmf(rng);
    const Pmf q = random_pmf(rng);
    const Pmf r = random_pmf(rng);
    const double tv_pq = total_variation(p, q).value;
    const double w_pq = wasserstein(p, q).value;
    EXPECT_GE(tv_pq, 0.0);
    EXPECT_GE(w_pq, 0.0);
    EXPECT_NEAR(tv_pq, total_variation(q, p).value, 1e-10);
    EXPECT_NEAR(w_pq, wasserstein(q, p).value, 1e-10);
    EXPECT_LE(tv_pq, total_variation(p, r).value + total_variation(r, q).value + 1e-10);
    EXPECT_LE(w_pq, wasserstein(p, r).value + wasserstein(r, q).value + 1e-10);
    EXPECT_LE(tv_pq, 2.0 * w_pq + 1e-12);
    EXPECT_GE(w_pq + 1e-12, std::abs(mean_var(p).mean - mean_var(q).mean));
  }
}

TEST(MeanVar, Examples) {
  const Moments d = mean_var(Pmf::point_mass(5));
  EXPECT_EQ(d.mean, 5.0);
  EXPECT_EQ(d.variance, 0.0);
  const Moments u = mean_var(Pmf::uniform(0, 2));
  EXPECT_NEAR(u.mean, 1.0, 1e-15);
  EXPECT_NEAR(u.variance, 2.0 / 3.0, 1e-15);
  const Moments r = mean_var(record_count_pmf(3));
  EXPECT_NEAR(r.mean, 11.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.variance, 17.0 / 36.0, 1e-15);
}

TEST(KolmogorovSmirnov, Examples) {
  EXPECT_NEAR(ks_to_standard_normal(Pmf::point_mass(0), 0.0, 1.0), 0.5, 1e-15);
  // jumps at -1 and 1 of size 1/2: worst gap is Phi(1) - 1/2
  EXPECT_NEAR(ks_to_standard_normal(Pmf::uniform(0, 1), 0.5, 0.5), 0.341344746068543, 1e-12);
  EXPECT_LT(ks_to_standard_normal(poisson_pmf(100.0), 100.0, 10.0), 0.05);
  EXPECT_THROW(ks_to_standard_normal(Pmf::point_mass(0), 0.0, 0.0), DomainError);
}

TEST(Pmf, TrimAndValidity) {
  Pmf p = from_masses(0, {1e-20, 0.5, 0.5 - 2e-20, 1e-20});
  const Pmf t = trim(p);
  EXPECT_EQ(t.offset, 1);
  EXPECT_EQ(t.size(), 2);
  EXPECT_NEAR(t.truncated_tail, 2e-20, 1e-35);
  EXPECT_TRUE(is_valid(t));

  Pmf bad = from_masses(0, {0.7, 0.7});
  EXPECT_FALSE(is_valid(bad));
  EXPECT_THROW(shifted(Pmf::point_mass(0), -1), DomainError);
}

}  // namespace
}  // namespace depthlab
