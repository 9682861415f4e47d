#include "depthlab/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

#include "depthlab/errors.hpp"
#include "parallel.hpp"

namespace depthlab {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

void check_key(std::int64_t n, std::int64_t l) {
  if (n < 1 || l < 1 || l > n) throw DomainError("need 1 <= l <= n");
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

std::uint64_t RngStream::bounded(std::uint64_t range) {
  // Lemire's multiply-and-reject
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("DEPTHLAB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t seed = 0;
  const char* end = raw + std::strlen(raw);
  auto [p, ec] = std::from_chars(raw, end, seed);
  if (ec != std::errc{} || p != end) throw DomainError("DEPTHLAB_SEED must be a decimal 64-bit integer");
  return seed;
}

Permutation random_permutation(std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("permutation size must be positive");
  std::vector<std::int64_t> v(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = k + 1;
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(i + 1)));
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
  return Permutation(std::move(v));
}

std::int64_t sample_hypergeometric(std::int64_t population, std::int64_t successes,
                                   std::int64_t draws, RngStream& rng) {
  const Pmf law = hypergeometric_pmf(population, successes, draws);
  const double u = rng.uniform();
  double cdf = 0.0;
  for (Eigen::Index i = 0; i < law.size(); ++i) {
    cdf += law.masses[i];
    if (u < cdf) return law.offset + i;
  }
  return law.end() - 1;
}

std::int64_t sample_depth_bst(std::int64_t n, std::int64_t l, RngStream& rng) {
  check_key(n, l);
  return node_depth(build_bst(random_permutation(n, rng)), l);
}

std::int64_t sample_depth_representation(std::int64_t n, std::int64_t l, RngStream& rng) {
  check_key(n, l);
  const auto position = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(n))) + 1;
  const std::int64_t smaller = sample_hypergeometric(n - 1, l - 1, position - 1, rng);
  const std::int64_t larger = position - 1 - smaller;
  std::int64_t depth = 0;
  for (std::int64_t i = 1; i <= smaller; ++i) depth += rng.uniform() * static_cast<double>(i) < 1.0;
  for (std::int64_t i = 1; i <= larger; ++i) depth += rng.uniform() * static_cast<double>(i) < 1.0;
  return depth;
}

std::int64_t sample_find_recursions(std::int64_t n, std::int64_t l, RngStream& rng) {
  check_key(n, l);
  return find_select(random_permutation(n, rng), l).recursions;
}

std::int64_t sample_random_key_depth(std::int64_t n, RngStream& rng) {
  if (n < 1) throw DomainError("tree size must be positive");
  const auto key = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(n))) + 1;
  return sample_depth_representation(n, key, rng);
}

std::optional<Route> parse_route(std::string_view name) {
  if (name == "bst") return Route::kBst;
  if (name == "representation") return Route::kRepresentation;
  if (name == "find") return Route::kFind;
  if (name == "random-key") return Route::kRandomKey;
  return std::nullopt;
}

std::string_view route_name(Route route) {
  switch (route) {
    case Route::kBst: return "bst";
    case Route::kRepresentation: return "representation";
    case Route::kFind: return "find";
    case Route::kRandomKey: return "random-key";
  }
  return "unknown";
}

std::vector<std::int64_t> sample_batch(Route route, std::int64_t n, std::int64_t l,
                                       std::int64_t count, std::uint64_t seed,
                                       std::uint64_t first_stream, unsigned threads) {
  if (count < 1) throw DomainError("sample count must be positive");
  if (route == Route::kRandomKey) {
    if (n < 1) throw DomainError("tree size must be positive");
  } else {
    check_key(n, l);
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(count));
  const auto chunks = static_cast<std::size_t>((count + kSamplesPerStream - 1) / kSamplesPerStream);
  detail::parallel_blocks(
      chunks,
      [&](std::size_t c) {
        RngStream rng(seed, first_stream + c);
        const auto begin = static_cast<std::int64_t>(c) * kSamplesPerStream;
        const auto end = std::min(begin + kSamplesPerStream, count);
        for (std::int64_t s = begin; s < end; ++s) {
          std::int64_t x = 0;
          switch (route) {
            case Route::kBst: x = sample_depth_bst(n, l, rng); break;
            case Route::kRepresentation: x = sample_depth_representation(n, l, rng); break;
            case Route::kFind: x = sample_find_recursions(n, l, rng); break;
            case Route::kRandomKey: x = sample_random_key_depth(n, rng); break;
          }
          out[static_cast<std::size_t>(s)] = x;
        }
      },
      threads);
  return out;
}

Pmf EmpiricalPmf::to_pmf() const {
  Pmf p;
  p.offset = offset;
  p.masses.resize(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p.masses[static_cast<Eigen::Index>(i)] =
        static_cast<double>(counts[i]) / static_cast<double>(sample_size);
  }
  return p;
}

EmpiricalPmf tally(std::span<const std::int64_t> samples) {
  if (samples.empty()) throw DomainError("no samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (*lo < 0) throw DomainError("samples must be nonnegative");
  EmpiricalPmf e;
  e.offset = *lo;
  e.counts.assign(static_cast<std::size_t>(*hi - *lo + 1), 0);
  for (std::int64_t x : samples) ++e.counts[static_cast<std::size_t>(x - e.offset)];
  e.sample_size = static_cast<std::int64_t>(samples.size());
  return e;
}

Pmf empirical_pmf(std::span<const std::int64_t> samples) { return tally(samples).to_pmf(); }

}  // namespace depthlab
