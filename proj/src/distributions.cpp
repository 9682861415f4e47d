#include "depthlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthlab/errors.hpp"

namespace depthlab {

Pmf Pmf::point_mass(std::int64_t k) {
  if (k < 0) throw DomainError("point mass location must be nonnegative");
  Pmf p;
  p.offset = k;
  p.masses = Eigen::VectorXd::Ones(1);
  return p;
}

Pmf Pmf::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi < lo) throw DomainError("uniform law needs 0 <= lo <= hi");
  Pmf p;
  p.offset = lo;
  const auto count = static_cast<Eigen::Index>(hi - lo + 1);
  p.masses = Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  return p;
}

double Pmf::total_mass() const {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < masses.size(); ++i) s += masses[i];
  return s.value();
}

bool is_valid(const Pmf& p, double slack) {
  if (p.offset < 0 || p.masses.size() == 0) return false;
  if (!(p.truncated_tail >= 0.0)) return false;
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) {
    const double m = p.masses[i];
    if (!(m >= 0.0 && m <= 1.0)) return false;
  }
  return std::abs(p.total_mass() + p.truncated_tail - 1.0) <= slack;
}

Pmf trim(Pmf p, double floor) {
  Eigen::Index first = 0;
  Eigen::Index last = p.masses.size() - 1;
  double dropped = 0.0;
  while (first < last && p.masses[first] < floor) dropped += p.masses[first++];
  while (last > first && p.masses[last] < floor) dropped += p.masses[last--];
  if (first == 0 && last == p.masses.size() - 1) return p;
  p.offset += first;
  p.masses = p.masses.segment(first, last - first + 1).eval();
  p.truncated_tail += dropped;
  return p;
}

Pmf shifted(Pmf p, std::int64_t delta) {
  if (p.offset + delta < 0) throw DomainError("shift would move support below zero");
  p.offset += delta;
  return p;
}

HarmonicTable harmonic_table(std::int64_t n_max) {
  if (n_max < 0) throw DomainError("harmonic table size must be nonnegative");
  HarmonicTable t;
  const auto len = static_cast<std::size_t>(n_max) + 1;
  t.h.resize(len);
  t.h2.resize(len);
  CompensatedSum h, h2;
  t.h[0] = 0.0;
  t.h2[0] = 0.0;
  for (std::size_t k = 1; k < len; ++k) {
    const double inv = 1.0 / static_cast<double>(k);
    h += inv;
    h2 += inv * inv;
    t.h[k] = h.value();
    t.h2[k] = h2.value();
  }
  return t;
}

BoundReport BoundReport::compare(double lhs, double rhs) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.holds = lhs <= rhs + kBoundSlack;
  return r;
}

std::vector<Pmf> record_count_table(std::int64_t m_max) {
  if (m_max < 0) throw DomainError("record count length must be nonnegative");
  std::vector<Pmf> table;
  table.reserve(static_cast<std::size_t>(m_max) + 1);
  table.push_back(Pmf::point_mass(0));
  for (std::int64_t i = 1; i <= m_max; ++i) {
    const Pmf& prev = table.back();
    const double hit = 1.0 / static_cast<double>(i);
    const double miss = 1.0 - hit;
    Pmf next;
    next.offset = prev.offset;
    next.truncated_tail = prev.truncated_tail;
    const Eigen::Index s = prev.masses.size();
    next.masses.resize(s + 1);
    next.masses.head(s) = miss * prev.masses;
    next.masses[s] = 0.0;
    next.masses.tail(s) += hit * prev.masses;
    table.push_back(trim(std::move(next)));
  }
  return table;
}

Pmf record_count_pmf(std::int64_t m) { return record_count_table(m).back(); }

Pmf convolve(const Pmf& p, const Pmf& q) {
  const Pmf& longer = p.size() >= q.size() ? p : q;
  const Pmf& shorter = p.size() >= q.size() ? q : p;
  Pmf r;
  r.offset = p.offset + q.offset;
  r.masses = Eigen::VectorXd::Zero(p.size() + q.size() - 1);
  for (Eigen::Index j = 0; j < shorter.size(); ++j) {
    r.masses.segment(j, longer.size()) += shorter.masses[j] * longer.masses;
  }
  r.truncated_tail = p.truncated_tail + q.truncated_tail - p.truncated_tail * q.truncated_tail;
  return r;
}

Pmf poisson_pmf(double lambda, double tol) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("Poisson rate must be finite and nonnegative");
  }
  if (!(tol > 0.0 && tol <= 1e-9)) throw DomainError("Poisson tail tolerance must lie in (0, 1e-9]");
  if (lambda == 0.0) return Pmf::point_mass(0);

  const auto mode = static_cast<std::int64_t>(std::floor(lambda));
  const double mode_mass =
      std::exp(static_cast<double>(mode) * std::log(lambda) - lambda - std::lgamma(mode + 1.0));

  std::vector<double> upper{mode_mass};
  double tail_bound = 1.0;
  for (std::int64_t k = mode;; ++k) {
    const double pk = upper.back();
    const double next_ratio = lambda / static_cast<double>(k + 2);
    if (next_ratio < 1.0) {
      tail_bound = pk * (lambda / static_cast<double>(k + 1)) / (1.0 - next_ratio);
      if (tail_bound < tol) break;
    }
    upper.push_back(pk * lambda / static_cast<double>(k + 1));
  }

  Pmf p;
  p.offset = 0;
  p.masses.resize(static_cast<Eigen::Index>(mode) + static_cast<Eigen::Index>(upper.size()));
  for (std::size_t i = 0; i < upper.size(); ++i) {
    p.masses[static_cast<Eigen::Index>(mode) + static_cast<Eigen::Index>(i)] = upper[i];
  }
  double pk = mode_mass;
  for (std::int64_t k = mode; k > 0; --k) {
    pk *= static_cast<double>(k) / lambda;
    p.masses[static_cast<Eigen::Index>(k - 1)] = pk;
  }
  p.truncated_tail = tail_bound;
  return p;
}

namespace {

double log_choose(std::int64_t a, std::int64_t b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(static_cast<double>(a - b) + 1.0);
}

}  // namespace

Pmf hypergeometric_pmf(std::int64_t population, std::int64_t successes, std::int64_t draws) {
  if (population < 0 || successes < 0 || successes > population || draws < 0 ||
      draws > population) {
    throw DomainError("hypergeometric parameters need 0 <= successes, draws <= population");
  }
  const std::int64_t failures = population - successes;
  const std::int64_t lo = std::max<std::int64_t>(0, draws - failures);
  const std::int64_t hi = std::min(successes, draws);
  std::int64_t mode = (draws + 1) * (successes + 1) / (population + 2);
  mode = std::clamp(mode, lo, hi);

  const double mode_mass = std::exp(log_choose(successes, mode) +
                                    log_choose(failures, draws - mode) -
                                    log_choose(population, draws));
  constexpr double kUnderflow = 1e-300;

  // ratio p(k+1)/p(k)
  auto up_ratio = [&](std::int64_t k) {
    return static_cast<double>(successes - k) * static_cast<double>(draws - k) /
           (static_cast<double>(k + 1) * static_cast<double>(failures - draws + k + 1));
  };

  std::vector<double> above;
  double pk = mode_mass;
  for (std::int64_t k = mode; k < hi; ++k) {
    pk *= up_ratio(k);
    if (pk < kUnderflow) break;
    above.push_back(pk);
  }
  std::vector<double> below;
  pk = mode_mass;
  for (std::int64_t k = mode; k > lo; --k) {
    pk /= up_ratio(k - 1);
    if (pk < kUnderflow) break;
    below.push_back(pk);
  }

  Pmf p;
  p.offset = mode - static_cast<std::int64_t>(below.size());
  p.masses.resize(static_cast<Eigen::Index>(below.size() + 1 + above.size()));
  Eigen::Index idx = 0;
  for (auto it = below.rbegin(); it != below.rend(); ++it) p.masses[idx++] = *it;
  p.masses[idx++] = mode_mass;
  for (double a : above) p.masses[idx++] = a;
  // lgamma roundoff only affects the common scale
  p.masses /= p.total_mass();
  return p;
}

MetricValue total_variation(const Pmf& p, const Pmf& q) {
  const std::int64_t lo = std::min(p.offset, q.offset);
  const std::int64_t hi = std::max(p.end(), q.end());
  CompensatedSum s;
  for (std::int64_t k = lo; k < hi; ++k) s += std::abs(p(k) - q(k));
  return {0.5 * s.value(), 0.5 * (p.truncated_tail + q.truncated_tail)};
}

MetricValue wasserstein(const Pmf& p, const Pmf& q) {
  const std::int64_t lo = std::min(p.offset, q.offset);
  const std::int64_t hi = std::max(p.end(), q.end());
  // survival sums S(k) = P(X >= k) over the stored masses, accumulated from the top
  CompensatedSum surv_p, surv_q, total;
  for (std::int64_t k = hi - 1; k >= std::max<std::int64_t>(lo, 1); --k) {
    surv_p += p(k);
    surv_q += q(k);
    total += std::abs(surv_p.value() - surv_q.value());
  }
  if (lo > 1) {
    for (std::int64_t k = lo - 1; k >= 1; --k) {
      surv_p += p(k);
      surv_q += q(k);
    }
    total += static_cast<double>(lo - 1) * std::abs(surv_p.value() - surv_q.value());
  }
  // dropped tail mass could sit anywhere beyond the stored range
  const double bound = (p.truncated_tail + q.truncated_tail) * static_cast<double>(hi);
  return {total.value(), bound};
}

Moments mean_var(const Pmf& p) {
  CompensatedSum first;
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) {
    first += p.masses[i] * static_cast<double>(p.offset + i);
  }
  const double mean = first.value();
  CompensatedSum second;
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) {
    const double d = static_cast<double>(p.offset + i) - mean;
    second += p.masses[i] * d * d;
  }
  return {mean, second.value()};
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_to_standard_normal(const Pmf& p, double shift, double scale) {
  if (!(scale > 0.0)) throw DomainError("KS standardisation scale must be positive");
  CompensatedSum cdf;
  double sup = 0.0;
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) {
    const double x = (static_cast<double>(p.offset + i) - shift) / scale;
    const double phi = standard_normal_cdf(x);
    const double before = cdf.value();
    cdf += p.masses[i];
    sup = std::max({sup, std::abs(before - phi), std::abs(cdf.value() - phi)});
  }
  return std::max(sup, 1.0 - cdf.value());
}

}  // namespace depthlab
