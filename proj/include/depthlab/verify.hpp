#pragma once

// Verification sweeps: each suite evaluates one family of identities or bounds
// over a parameter grid and returns one BoundReport row per check.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depthlab/distributions.hpp"

namespace depthlab {

struct CheckRow {
  std::string suite;
  std::string label;
  BoundReport report;
};

struct VerifyConfig {
  std::optional<std::int64_t> n;      // single size, for suites indexed by n
  std::optional<std::int64_t> n_max;  // upper end of the sweep; suite default if unset
  std::uint64_t seed = 20050101;
  std::int64_t trials = 1000;     // random pairs for the metric and contraction checks
  std::int64_t samples = 100000;  // Monte Carlo sample size
};

/// oracle, moments, theorem3, theorem6, lemma2, lemma4b, lemma5, metrics,
/// poisson_steps, find, moves, normality, louchard, sampler.
std::span<const std::string_view> suite_names();

/// Runs one suite ("all" runs every suite in order). Throws DomainError for an
/// unknown suite or an n outside the suite's domain.
std::vector<CheckRow> run_suite(std::string_view suite, const VerifyConfig& config);

bool all_hold(std::span<const CheckRow> rows);

/// 1 + round(k (n - 1) / (points - 1)), k = 0..points-1, deduplicated.
std::vector<std::int64_t> key_grid(std::int64_t n, std::int64_t points);

}  // namespace depthlab
