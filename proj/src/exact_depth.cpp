#include "depthlab/exact_depth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "depthlab/errors.hpp"
#include "depthlab/trees.hpp"
#include "parallel.hpp"

namespace depthlab {

namespace {

void check_key(std::int64_t n, std::int64_t l) {
  if (n < 1 || l < 1 || l > n) {
    throw DomainError("need 1 <= l <= n, got n = " + std::to_string(n) + ", l = " + std::to_string(l));
  }
}

void check_cap(std::int64_t n, const ExactOptions& opts) {
  if (n > opts.cap) {
    throw ResourceError("n = " + std::to_string(n) + " exceeds the exact-computation cap of " +
                        std::to_string(opts.cap));
  }
}

// mantissa * 2^exponent; the joint-law cells range far below the double
// minimum before rising back to O(1/n) along a column.
struct Scaled {
  double mantissa = 1.0;
  int exponent = 0;

  void multiply(double r) {
    mantissa *= r;
    if (mantissa > 0x1p200 || mantissa < 0x1p-200) {
      int e = 0;
      mantissa = std::frexp(mantissa, &e);
      exponent += e;
    }
  }
  double value() const { return exponent == 0 ? mantissa : std::ldexp(mantissa, exponent); }
};

// Walks the joint law of (G, N-1-G) column by column without materialising the
// full l x (n-l+1) grid. JD(0, 0) = 1/n, and neighbouring cells are related by
//   JD(0, j+1) / JD(0, j) = (n-l-j) / (n-1-j)
//   JD(i+1, j) / JD(i, j) = (i+1+j)(l-1-i) / ((i+1)(n-1-i-j)).
class JointColumns {
 public:
  JointColumns(std::int64_t n, std::int64_t l) : n_(n), l_(l) {
    starts_.resize(static_cast<std::size_t>(n - l + 1));
    Scaled s{1.0 / static_cast<double>(n), 0};
    for (std::int64_t j = 0; j <= n - l; ++j) {
      starts_[static_cast<std::size_t>(j)] = s;
      if (j < n - l) {
        s.multiply(static_cast<double>(n - l - j) / static_cast<double>(n - 1 - j));
      }
    }
  }

  std::int64_t columns() const { return n_ - l_ + 1; }

  void fill(std::int64_t j, Eigen::Ref<Eigen::VectorXd> column) const {
    Scaled s = starts_[static_cast<std::size_t>(j)];
    column[0] = s.value();
    const double jd = static_cast<double>(j);
    for (std::int64_t i = 0; i + 1 < l_; ++i) {
      const double id = static_cast<double>(i);
      s.multiply(((id + 1.0 + jd) * static_cast<double>(l_ - 1 - i)) /
                 ((id + 1.0) * static_cast<double>(n_ - 1 - i - j)));
      column[static_cast<Eigen::Index>(i + 1)] = s.value();
    }
  }

 private:
  std::int64_t n_;
  std::int64_t l_;
  std::vector<Scaled> starts_;
};

constexpr std::int64_t kColumnsPerBlock = 64;

// Shared sweep: for each column j, M_j = sum_i JD(i, j) R_i, then hand (j, M_j,
// tail of M_j, column mass) to the block accumulator.
struct Sweep {
  std::vector<Pmf> records;
  Eigen::Index left_width = 1;   // max end of R_i, i < l
  Eigen::Index right_width = 1;  // max end of R_j, j <= n - l

  Sweep(std::int64_t n, std::int64_t l) : records(record_count_table(std::max(l - 1, n - l))) {
    for (std::int64_t i = 0; i < l; ++i) {
      left_width = std::max<Eigen::Index>(left_width, records[static_cast<std::size_t>(i)].end());
    }
    for (std::int64_t j = 0; j <= n - l; ++j) {
      right_width = std::max<Eigen::Index>(right_width, records[static_cast<std::size_t>(j)].end());
    }
  }

  template <class Accumulate>
  void run(const JointColumns& cols, std::int64_t l, Accumulate&& accumulate, std::int64_t j_begin,
           std::int64_t j_end) const {
    Eigen::VectorXd column(l);
    Eigen::VectorXd mixed(left_width);
    for (std::int64_t j = j_begin; j < j_end; ++j) {
      cols.fill(j, column);
      mixed.setZero();
      CompensatedSum mass, tail;
      for (std::int64_t i = 0; i < l; ++i) {
        const double w = column[static_cast<Eigen::Index>(i)];
        if (w == 0.0) continue;
        const Pmf& r = records[static_cast<std::size_t>(i)];
        mixed.segment(r.offset, r.size()) += w * r.masses;
        mass += w;
        tail += w * r.truncated_tail;
      }
      accumulate(records[static_cast<std::size_t>(j)], mixed, mass.value(), tail.value());
    }
  }
};

}  // namespace

JointGN joint_gn(std::int64_t n, std::int64_t l) {
  check_key(n, l);
  JointGN jd;
  jd.n = n;
  jd.l = l;
  jd.weights.resize(l, n - l + 1);
  const JointColumns cols(n, l);
  for (std::int64_t j = 0; j < cols.columns(); ++j) cols.fill(j, jd.weights.col(j));
  return jd;
}

Pmf exact_depth_pmf(std::int64_t n, std::int64_t l, const ExactOptions& opts) {
  check_key(n, l);
  check_cap(n, opts);
  const JointColumns cols(n, l);
  const Sweep sweep(n, l);
  const Eigen::Index width = sweep.left_width + sweep.right_width;

  const auto columns = cols.columns();
  const auto blocks = static_cast<std::size_t>((columns + kColumnsPerBlock - 1) / kColumnsPerBlock);
  std::vector<Eigen::VectorXd> partial(blocks, Eigen::VectorXd::Zero(width));
  std::vector<double> partial_tail(blocks, 0.0);

  detail::parallel_blocks(blocks, [&](std::size_t b) {
    Eigen::VectorXd& acc = partial[b];
    CompensatedSum tail;
    const auto begin = static_cast<std::int64_t>(b) * kColumnsPerBlock;
    sweep.run(
        cols, l,
        [&](const Pmf& right, const Eigen::VectorXd& mixed, double mass, double mixed_tail) {
          for (Eigen::Index s = 0; s < right.size(); ++s) {
            acc.segment(right.offset + s, mixed.size()) += right.masses[s] * mixed;
          }
          tail += mixed_tail + mass * right.truncated_tail;
        },
        begin, std::min(begin + kColumnsPerBlock, columns));
    partial_tail[b] = tail.value();
  });

  Pmf p;
  p.offset = 0;
  p.masses = Eigen::VectorXd::Zero(width);
  CompensatedSum tail;
  for (std::size_t b = 0; b < blocks; ++b) {
    p.masses += partial[b];
    tail += partial_tail[b];
  }
  p.truncated_tail = tail.value();
  return trim(std::move(p));
}

MoveJointPmf exact_move_joint_pmf(std::int64_t n, std::int64_t l, const ExactOptions& opts) {
  check_key(n, l);
  check_cap(n, opts);
  const JointColumns cols(n, l);
  const Sweep sweep(n, l);

  MoveJointPmf out;
  out.n = n;
  out.l = l;
  out.p = Eigen::MatrixXd::Zero(sweep.left_width, sweep.right_width);
  sweep.run(
      cols, l,
      [&](const Pmf& right, const Eigen::VectorXd& mixed, double, double) {
        out.p.block(0, right.offset, mixed.size(), right.size()).noalias() +=
            mixed * right.masses.transpose();
      },
      0, cols.columns());
  return out;
}

Pmf MoveJointPmf::right_marginal() const {
  Pmf m;
  m.masses = p.rowwise().sum();
  return m;
}

Pmf MoveJointPmf::left_marginal() const {
  Pmf m;
  m.masses = p.colwise().sum().transpose();
  return m;
}

Pmf MoveJointPmf::total() const {
  Pmf m;
  m.masses = Eigen::VectorXd::Zero(p.rows() + p.cols() - 1);
  for (Eigen::Index s = 0; s < p.cols(); ++s) m.masses.segment(s, p.rows()) += p.col(s);
  return m;
}

namespace {

void check_table(std::int64_t n, const HarmonicTable& h) {
  if (h.max_index() < n) throw DomainError("harmonic table too short for n");
}

}  // namespace

double ad_mean(std::int64_t n, std::int64_t l, const HarmonicTable& h) {
  check_key(n, l);
  check_table(n, h);
  return h.H(l) + h.H(n + 1 - l) - 2.0;
}

double kp_variance(std::int64_t n, std::int64_t l, const HarmonicTable& h) {
  check_key(n, l);
  check_table(n, h);
  const double prod = static_cast<double>(l) * static_cast<double>(n + 1 - l);
  const double ratio = 2.0 * static_cast<double>(n + 1) / prod;
  return ratio * h.H(n) + (1.0 - ratio) * (h.H(l) + h.H(n + 1 - l)) - h.H2(l) - h.H2(n + 1 - l) +
         2.0 / prod + 2.0;
}

BoundReport theorem3_margin(std::int64_t n, std::int64_t l, const ExactOptions& opts) {
  if (n < 2) throw DomainError("the Poisson bound needs n >= 2");
  check_key(n, l);
  const HarmonicTable h = harmonic_table(n);
  const Pmf exact = exact_depth_pmf(n, l, opts);
  const double lhs = total_variation(exact, poisson_pmf(ad_mean(n, l, h))).value;
  const double rhs = (28.0 + std::numbers::pi * std::numbers::pi) / std::log(static_cast<double>(n));
  return BoundReport::compare(lhs, rhs);
}

std::int64_t central_key(std::int64_t n, double t) {
  if (n < 2) throw DomainError("central key needs n >= 2");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("central key needs t in (0, 1)");
  const auto l = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * t + 0.5));
  return std::clamp<std::int64_t>(l, 1, n - 1);
}

MixedPoissonFit theorem6_distance(std::int64_t n, double t, const ExactOptions& opts) {
  MixedPoissonFit fit;
  fit.l = central_key(n, t);
  const Pmf exact = exact_depth_pmf(n, fit.l, opts);
  const Pmf approx = mixpo_pmf(nu_exponential(n, t));
  fit.distance = wasserstein(exact, approx).value;
  fit.scaled = fit.distance * std::sqrt(std::log(static_cast<double>(n)));
  return fit;
}

BoundReport lemma2_value(std::int64_t n, std::int64_t l) {
  check_key(n, l);
  const HarmonicTable h = harmonic_table(n);
  const JointColumns cols(n, l);
  Eigen::VectorXd column(l);
  CompensatedSum first;
  for (std::int64_t j = 0; j < cols.columns(); ++j) {
    cols.fill(j, column);
    for (std::int64_t i = 0; i < l; ++i) first += column[i] * (h.H(i) + h.H(j));
  }
  const double mean = first.value();
  CompensatedSum second;
  for (std::int64_t j = 0; j < cols.columns(); ++j) {
    cols.fill(j, column);
    for (std::int64_t i = 0; i < l; ++i) {
      const double d = h.H(i) + h.H(j) - mean;
      second += column[i] * d * d;
    }
  }
  return BoundReport::compare(second.value(), 28.0);
}

BoundReport lemma5_margin(std::int64_t population, std::int64_t successes, std::int64_t draws) {
  if (population < 1 || successes < 0 || successes > population || draws < 0 ||
      draws > population) {
    throw DomainError("hypergeometric parameters need 0 <= M, n <= N");
  }
  if (successes * draws < 1) throw DomainError("the hypergeometric bound needs n M >= 1");
  const Pmf law = hypergeometric_pmf(population, successes, draws);
  const double nm = static_cast<double>(draws) * static_cast<double>(successes);
  const double big_n = static_cast<double>(population);
  const double mean = nm / big_n;
  CompensatedSum lhs;
  for (Eigen::Index i = 0; i < law.size(); ++i) {
    const std::int64_t k = law.offset + i;
    if (k > 0) lhs += std::abs(std::log(static_cast<double>(k) / mean)) * law.masses[i];
  }
  const double rhs = 4.0 * big_n * std::log(big_n) / nm + 2.0 * std::sqrt(big_n / nm);
  return BoundReport::compare(lhs.value(), rhs);
}

Pmf brute_force_depth_pmf(std::int64_t n, std::int64_t l) {
  if (n > kBruteForceCap) {
    throw ResourceError("brute-force enumeration is capped at n = " + std::to_string(kBruteForceCap));
  }
  check_key(n, l);
  std::vector<std::int64_t> values(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = k + 1;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  std::int64_t total = 0;
  do {
    const Bst tree = build_bst(Permutation(values));
    ++counts[static_cast<std::size_t>(node_depth(tree, l))];
    ++total;
  } while (std::next_permutation(values.begin(), values.end()));

  std::int64_t last = n - 1;
  while (last > 0 && counts[static_cast<std::size_t>(last)] == 0) --last;
  Pmf p;
  p.offset = 0;
  p.masses.resize(last + 1);
  for (std::int64_t k = 0; k <= last; ++k) {
    p.masses[k] = static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(total);
  }
  return p;
}

}  // namespace depthlab
