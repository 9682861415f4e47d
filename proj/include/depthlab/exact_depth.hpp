#pragma once

// Exact law of the depth X_{n,l} of key l in a random binary search tree of
// size n, via its representation as a mixture of sums of independent record
// counts, together with closed-form moments and the bound checks built on them.

#include <cstdint>

#include <Eigen/Dense>

#include "depthlab/distributions.hpp"
#include "depthlab/mixing.hpp"

namespace depthlab {

inline constexpr std::int64_t kDefaultExactCap = 32768;

struct ExactOptions {
  std::int64_t cap = kDefaultExactCap;
};

/// Joint law of (G, N - 1 - G): N is the insertion position of key l and G
/// the number of smaller keys inserted before it. weights(i, j) for
/// 0 <= i < l, 0 <= j <= n - l.
struct JointGN {
  std::int64_t n = 1;
  std::int64_t l = 1;
  Eigen::MatrixXd weights;
};

JointGN joint_gn(std::int64_t n, std::int64_t l);

/// Joint law of (moves right, moves left) on the root-to-l path.
/// p(r, s) = P(right = r, left = s).
struct MoveJointPmf {
  std::int64_t n = 1;
  std::int64_t l = 1;
  Eigen::MatrixXd p;

  Pmf right_marginal() const;
  Pmf left_marginal() const;
  /// Law of right + left, i.e. of the depth.
  Pmf total() const;
};

Pmf exact_depth_pmf(std::int64_t n, std::int64_t l, const ExactOptions& opts = {});
MoveJointPmf exact_move_joint_pmf(std::int64_t n, std::int64_t l, const ExactOptions& opts = {});

/// E X_{n,l} = H_l + H_{n+1-l} - 2.
double ad_mean(std::int64_t n, std::int64_t l, const HarmonicTable& h);
/// Closed-form variance of X_{n,l} (Kirschenhofer-Prodinger).
double kp_variance(std::int64_t n, std::int64_t l, const HarmonicTable& h);

/// d_TV(L(X_{n,l}), Po(E X_{n,l})) against (28 + pi^2)/log n. Requires n >= 2.
BoundReport theorem3_margin(std::int64_t n, std::int64_t l, const ExactOptions& opts = {});

struct MixedPoissonFit {
  std::int64_t l = 1;
  double distance = 0.0;  // d_W(L(X_{n,l}), MixPo(nu_{n,t}))
  double scaled = 0.0;    // distance * sqrt(log n)
};

/// Key l = round(n t) (half up), clamped to [1, n-1].
std::int64_t central_key(std::int64_t n, double t);

MixedPoissonFit theorem6_distance(std::int64_t n, double t, const ExactOptions& opts = {});

/// var(H(G) + H(N-1-G)) against 28.
BoundReport lemma2_value(std::int64_t n, std::int64_t l);

/// E(|log(X / EX)| 1{X > 0}) for X ~ HypGeo(N; M, n) against
/// 4 N log N / (n M) + 2 sqrt(N / (n M)).
BoundReport lemma5_margin(std::int64_t population, std::int64_t successes, std::int64_t draws);

inline constexpr std::int64_t kBruteForceCap = 9;

/// Depth law by enumerating all n! insertion orders. n <= 9.
Pmf brute_force_depth_pmf(std::int64_t n, std::int64_t l);

}  // namespace depthlab
