#include "depthlab/mixing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "depthlab/errors.hpp"
#include "depthlab/exact_depth.hpp"

namespace depthlab {

double ReflectedExponential::atom_at_zero() const { return c <= 0.0 ? 1.0 : std::exp(-0.5 * c); }

DiscreteMeasure make_discrete(std::vector<Atom> atoms) {
  CompensatedSum total;
  for (const Atom& a : atoms) {
    if (!(a.location >= 0.0) || !std::isfinite(a.location)) {
      throw DomainError("mixing measure atoms must sit on [0, inf)");
    }
    if (!(a.weight >= 0.0)) throw DomainError("mixing measure weights must be nonnegative");
    total += a.weight;
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw DomainError("mixing measure weights must sum to one");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  DiscreteMeasure m;
  for (const Atom& a : atoms) {
    if (a.weight == 0.0) continue;
    if (!m.atoms.empty() && m.atoms.back().location == a.location) {
      m.atoms.back().weight += a.weight;
    } else {
      m.atoms.push_back(a);
    }
  }
  return m;
}

ReflectedExponential nu_exponential(std::int64_t n, double t) {
  if (n < 1) throw DomainError("nu_exponential needs n >= 1");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("nu_exponential needs t in (0, 1)");
  return {2.0 * std::log(static_cast<double>(n)) + 2.0 * kEulerGamma + std::log(t * (1.0 - t))};
}

DiscreteMeasure mu_discrete(std::int64_t n, std::int64_t l, const JointGN& jd,
                            const HarmonicTable& h) {
  if (jd.n != n || jd.l != l || jd.weights.rows() != l || jd.weights.cols() != n - l + 1) {
    throw DomainError("joint law does not match (n, l)");
  }
  if (h.max_index() < n - 1) throw DomainError("harmonic table too short for n");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(jd.weights.size()));
  for (Eigen::Index j = 0; j < jd.weights.cols(); ++j) {
    for (Eigen::Index i = 0; i < jd.weights.rows(); ++i) {
      atoms.push_back({h.H(i) + h.H(j), jd.weights(i, j)});
    }
  }
  return make_discrete(std::move(atoms));
}

Moments measure_moments(const MixingMeasure& nu) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&nu)) {
    CompensatedSum first;
    for (const Atom& a : d->atoms) first += a.weight * a.location;
    const double mean = first.value();
    CompensatedSum second;
    for (const Atom& a : d->atoms) second += a.weight * (a.location - mean) * (a.location - mean);
    return {mean, second.value()};
  }
  const double c = std::get<ReflectedExponential>(nu).c;
  if (c <= 0.0) return {0.0, 0.0};
  const double a = 0.5 * c;
  const double ea = std::exp(-a);
  const double mean = c - 2.0 + 2.0 * ea;
  const double second = 4.0 * (a * a - 2.0 * a + 2.0 - 2.0 * ea);
  return {mean, second - mean * mean};
}

namespace {

constexpr int kGaussOrder = 16;

struct GaussLegendre {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kGaussOrder; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kGaussOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kGaussOrder; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = kGaussOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

// Absolutely continuous part of MixPo(nu_c) at k = 0..size-1, evaluated at rate lambda.
void density_terms(double c, double lambda, Eigen::VectorXd& out) {
  const double log_lambda = std::log(lambda);
  const double base = -lambda - 0.5 * (c - lambda) - std::numbers::ln2;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k] = std::exp(base + kd * log_lambda - std::lgamma(kd + 1.0));
  }
}

Eigen::VectorXd gauss_panel(double c, double a, double b, Eigen::Index size) {
  const auto& rule = gauss_legendre();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd f(size);
  for (int i = 0; i < kGaussOrder; ++i) {
    density_terms(c, mid + half * rule.nodes[static_cast<std::size_t>(i)], f);
    sum += rule.weights[static_cast<std::size_t>(i)] * f;
  }
  return half * sum;
}

Eigen::VectorXd adaptive_panel(double c, double a, double b, const Eigen::VectorXd& whole,
                               double tol, int depth) {
  const double mid = 0.5 * (a + b);
  Eigen::VectorXd left = gauss_panel(c, a, mid, whole.size());
  Eigen::VectorXd right = gauss_panel(c, mid, b, whole.size());
  Eigen::VectorXd refined = left + right;
  if (depth >= 40 || (refined - whole).cwiseAbs().maxCoeff() < tol) return refined;
  const double child_tol = std::max(0.5 * tol, 1e-16);
  return adaptive_panel(c, a, mid, left, child_tol, depth + 1) +
         adaptive_panel(c, mid, b, right, child_tol, depth + 1);
}

Pmf mixpo_reflected(const ReflectedExponential& nu, double tol) {
  if (nu.c <= 0.0) return Pmf::point_mass(0);
  // every rate is at most c, so the Po(c) tail dominates the mixture tail
  const Pmf envelope = poisson_pmf(nu.c, tol);
  const Eigen::Index size = envelope.size();
  Eigen::VectorXd masses =
      adaptive_panel(nu.c, 0.0, nu.c, gauss_panel(nu.c, 0.0, nu.c, size), 0.1 * tol, 0);
  masses[0] += nu.atom_at_zero();
  Pmf p;
  p.offset = 0;
  p.masses = masses.cwiseMax(0.0);
  p.truncated_tail = envelope.truncated_tail;
  return p;
}

Pmf mixpo_discrete(const DiscreteMeasure& nu, double tol) {
  if (nu.atoms.empty()) throw DomainError("mixing measure has no atoms");
  std::vector<Pmf> parts;
  parts.reserve(nu.atoms.size());
  Eigen::Index size = 1;
  for (const Atom& a : nu.atoms) {
    parts.push_back(poisson_pmf(a.location, tol));
    size = std::max(size, parts.back().size());
  }
  Pmf p;
  p.offset = 0;
  p.masses = Eigen::VectorXd::Zero(size);
  CompensatedSum tail;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double w = nu.atoms[i].weight;
    p.masses.head(parts[i].size()) += w * parts[i].masses;
    tail += w * parts[i].truncated_tail;
  }
  p.truncated_tail = tail.value();
  return p;
}

}  // namespace

Pmf mixpo_pmf(const MixingMeasure& nu, double tol) {
  if (!(tol > 0.0 && tol <= 1e-9)) throw DomainError("mixed Poisson tolerance must lie in (0, 1e-9]");
  if (const auto* d = std::get_if<DiscreteMeasure>(&nu)) return mixpo_discrete(*d, tol);
  return mixpo_reflected(std::get<ReflectedExponential>(nu), tol);
}

double measure_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.atoms.empty() || nu.atoms.empty()) throw DomainError("empty mixing measure");
  std::size_t i = 0, j = 0;
  double left_i = mu.atoms[0].weight;
  double left_j = nu.atoms[0].weight;
  CompensatedSum total;
  while (i < mu.atoms.size() && j < nu.atoms.size()) {
    const double step = std::min(left_i, left_j);
    total += step * std::abs(mu.atoms[i].location - nu.atoms[j].location);
    left_i -= step;
    left_j -= step;
    if (left_i <= 0.0 && ++i < mu.atoms.size()) left_i = mu.atoms[i].weight;
    if (left_j <= 0.0 && ++j < nu.atoms.size()) left_j = nu.atoms[j].weight;
  }
  return total.value();
}

}  // namespace depthlab
