#pragma once

// Probability mass functions on the nonnegative integers and the basic laws
// built from them: record counts, Poisson, hypergeometric. Also the two
// probability metrics (total variation, Wasserstein) and a KS distance to the
// standard normal.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace depthlab {

/// Tail mass dropped when truncating an infinite-support law.
inline constexpr double kDefaultTailTolerance = 1e-12;
/// Masses below this are trimmed from the ends of convolution chains.
inline constexpr double kMassFloor = 1e-18;
/// Slack used when deciding whether a bound holds.
inline constexpr double kBoundSlack = 1e-12;

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Finite pmf: P(X = offset + i) = masses[i]. Mass dropped while building the
/// law is kept in truncated_tail rather than renormalised away.
struct Pmf {
  std::int64_t offset = 0;
  Eigen::VectorXd masses = Eigen::VectorXd::Ones(1);
  double truncated_tail = 0.0;

  static Pmf point_mass(std::int64_t k);
  /// Uniform law on {lo, ..., hi}.
  static Pmf uniform(std::int64_t lo, std::int64_t hi);

  Eigen::Index size() const { return masses.size(); }
  /// One past the largest support point.
  std::int64_t end() const { return offset + static_cast<std::int64_t>(masses.size()); }
  /// Mass at k (zero outside the stored range).
  double operator()(std::int64_t k) const {
    if (k < offset || k >= end()) return 0.0;
    return masses[static_cast<Eigen::Index>(k - offset)];
  }
  double total_mass() const;
};

/// True when every mass lies in [0, 1] and masses plus tail sum to one within slack.
bool is_valid(const Pmf& p, double slack = 1e-9);

/// Move masses below `floor` at either end of the support into truncated_tail.
Pmf trim(Pmf p, double floor = kMassFloor);

/// The pmf shifted by `delta` support points.
Pmf shifted(Pmf p, std::int64_t delta);

struct HarmonicTable {
  std::vector<double> h;   // h[k] = sum_{i<=k} 1/i
  std::vector<double> h2;  // h2[k] = sum_{i<=k} 1/i^2

  std::int64_t max_index() const { return static_cast<std::int64_t>(h.size()) - 1; }
  double H(std::int64_t k) const { return h[static_cast<std::size_t>(k)]; }
  double H2(std::int64_t k) const { return h2[static_cast<std::size_t>(k)]; }
};

HarmonicTable harmonic_table(std::int64_t n_max);

/// A distance together with a bound on the error introduced by truncation.
struct MetricValue {
  double value = 0.0;
  double error_bound = 0.0;
};

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  double margin = 0.0;

  static BoundReport compare(double lhs, double rhs);
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Law of the number of ascending records in a uniform random permutation of
/// length m, i.e. a sum of independent Ber(1/i), i = 1..m.
Pmf record_count_pmf(std::int64_t m);

/// record_count_pmf(0), ..., record_count_pmf(m_max), built in one pass.
std::vector<Pmf> record_count_table(std::int64_t m_max);

/// Law of the sum of independent draws from p and q.
Pmf convolve(const Pmf& p, const Pmf& q);

/// Po(lambda) truncated on the right with tail mass below tol. Po(0) is the point mass at 0.
Pmf poisson_pmf(double lambda, double tol = kDefaultTailTolerance);

/// HypGeo(population; successes, draws): number of successes when drawing
/// without replacement. Masses that underflow are left out of the support.
Pmf hypergeometric_pmf(std::int64_t population, std::int64_t successes, std::int64_t draws);

MetricValue total_variation(const Pmf& p, const Pmf& q);
MetricValue wasserstein(const Pmf& p, const Pmf& q);

Moments mean_var(const Pmf& p);

double standard_normal_cdf(double x);

/// sup_x |P((X - shift)/scale <= x) - Phi(x)|, X ~ p.
double ks_to_standard_normal(const Pmf& p, double shift, double scale);

}  // namespace depthlab
