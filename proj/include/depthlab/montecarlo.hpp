#pragma once

// Seeded sampling of node depths by three independent routes: growing a tree,
// the record representation, and counting FIND recursions.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "depthlab/distributions.hpp"
#include "depthlab/trees.hpp"

namespace depthlab {

/// A reproducible random stream identified by (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Unbiased uniform integer on [0, range), range >= 1.
  std::uint64_t bounded(std::uint64_t range);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Reads DEPTHLAB_SEED (decimal 64-bit); nullopt if unset. Throws DomainError if malformed.
std::optional<std::uint64_t> seed_from_environment();

Permutation random_permutation(std::int64_t n, RngStream& rng);

/// Draw from HypGeo(population; successes, draws) by inversion of the exact pmf.
std::int64_t sample_hypergeometric(std::int64_t population, std::int64_t successes,
                                   std::int64_t draws, RngStream& rng);

std::int64_t sample_depth_bst(std::int64_t n, std::int64_t l, RngStream& rng);
std::int64_t sample_depth_representation(std::int64_t n, std::int64_t l, RngStream& rng);
std::int64_t sample_find_recursions(std::int64_t n, std::int64_t l, RngStream& rng);
/// Depth of a key drawn uniformly from 1..n, sampled through the record representation.
std::int64_t sample_random_key_depth(std::int64_t n, RngStream& rng);

enum class Route { kBst, kRepresentation, kFind, kRandomKey };

/// "bst", "representation", "find", "random-key".
std::optional<Route> parse_route(std::string_view name);
std::string_view route_name(Route route);

inline constexpr std::int64_t kSamplesPerStream = 4096;

/// count samples; chunk c of kSamplesPerStream samples draws from stream
/// (seed, first_stream + c), so results do not depend on the thread count.
std::vector<std::int64_t> sample_batch(Route route, std::int64_t n, std::int64_t l,
                                       std::int64_t count, std::uint64_t seed,
                                       std::uint64_t first_stream = 0, unsigned threads = 0);

struct EmpiricalPmf {
  std::vector<std::int64_t> counts;  // counts[k - offset]
  std::int64_t offset = 0;
  std::int64_t sample_size = 0;

  Pmf to_pmf() const;
};

EmpiricalPmf tally(std::span<const std::int64_t> samples);

/// Normalised counts; truncated_tail = 0. Throws DomainError on empty input.
Pmf empirical_pmf(std::span<const std::int64_t> samples);

}  // namespace depthlab
