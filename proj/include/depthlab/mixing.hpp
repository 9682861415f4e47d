#pragma once

// Mixing measures on [0, inf) and the mixed Poisson laws they generate.

#include <cstdint>
#include <variant>
#include <vector>

#include "depthlab/distributions.hpp"

namespace depthlab {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct JointGN;

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Finitely many atoms, sorted by location with distinct locations.
struct DiscreteMeasure {
  std::vector<Atom> atoms;
};

/// Law of (c - 2X)^+ with X ~ Exp(1): an atom exp(-c/2) at zero plus the
/// density exp(-(c - x)/2)/2 on (0, c). For c <= 0 this is the point mass at 0.
struct ReflectedExponential {
  double c = 0.0;

  double atom_at_zero() const;
};

using MixingMeasure = std::variant<DiscreteMeasure, ReflectedExponential>;

/// Sorts atoms, merges equal locations and drops zero weights.
/// Throws DomainError for negative locations or weights, or total weight away from 1.
DiscreteMeasure make_discrete(std::vector<Atom> atoms);

/// Limit mixing measure for a key at relative position t in a tree of size n:
/// c = 2 log n + 2 gamma + log(t (1 - t)).
ReflectedExponential nu_exponential(std::int64_t n, double t);

/// Law of H(G) + H(N - 1 - G) with (G, N - 1 - G) distributed according to jd.
DiscreteMeasure mu_discrete(std::int64_t n, std::int64_t l, const JointGN& jd,
                            const HarmonicTable& h);

Moments measure_moments(const MixingMeasure& nu);

/// Mixed Poisson pmf, truncated on the right with tail mass below tol.
Pmf mixpo_pmf(const MixingMeasure& nu, double tol = kDefaultTailTolerance);

/// Wasserstein distance between two finite measures on the real line, via the
/// quantile coupling: integral over u of |F^-1(u) - G^-1(u)|.
double measure_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace depthlab
