#include "depthlab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "depthlab/errors.hpp"
#include "depthlab/exact_depth.hpp"
#include "depthlab/mixing.hpp"
#include "depthlab/montecarlo.hpp"
#include "depthlab/trees.hpp"

namespace depthlab {

namespace {

constexpr std::array<std::string_view, 14> kSuites = {
    "oracle", "moments",  "theorem3",      "theorem6", "lemma2", "lemma4b",   "lemma5",
    "metrics", "poisson_steps", "find", "moves",    "normality", "louchard", "sampler"};

std::string label(std::initializer_list<std::pair<const char*, std::int64_t>> parts,
                  std::string_view suffix = {}) {
  std::string s;
  for (const auto& [name, value] : parts) {
    if (!s.empty()) s += ' ';
    s += name;
    s += '=';
    s += std::to_string(value);
  }
  if (!suffix.empty()) {
    s += ' ';
    s += suffix;
  }
  return s;
}

std::vector<std::int64_t> sizes(const VerifyConfig& cfg, std::int64_t lo, std::int64_t default_max) {
  if (cfg.n) return {*cfg.n};
  std::vector<std::int64_t> out;
  for (std::int64_t n = lo; n <= cfg.n_max.value_or(default_max); ++n) out.push_back(n);
  return out;
}

std::vector<std::int64_t> filtered(const VerifyConfig& cfg, std::vector<std::int64_t> grid) {
  if (cfg.n) return {*cfg.n};
  if (cfg.n_max) std::erase_if(grid, [&](std::int64_t n) { return n > *cfg.n_max; });
  return grid;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

void require_size(std::int64_t n, std::int64_t lo, std::string_view suite) {
  if (n < lo) {
    throw DomainError(std::string(suite) + " needs n >= " + std::to_string(lo) + ", got " +
                      std::to_string(n));
  }
}

using Rows = std::vector<CheckRow>;

// How close a check comes to failing: lhs/rhs, with failures ranked above everything.
double tightness(const BoundReport& r) {
  if (!r.holds) return std::numeric_limits<double>::infinity();
  return r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
}

Rows oracle(const VerifyConfig& cfg) {
  Rows rows;
  for (std::int64_t n : sizes(cfg, 1, 8)) {
    require_size(n, 1, "oracle");
    for (std::int64_t l = 1; l <= n; ++l) {
      const double d = total_variation(exact_depth_pmf(n, l), brute_force_depth_pmf(n, l)).value;
      rows.push_back({"oracle", label({{"n", n}, {"l", l}}, "d_TV(exact, enumeration)"),
                      BoundReport::compare(d, 1e-12)});
    }
  }
  return rows;
}

Rows moments(const VerifyConfig& cfg) {
  Rows rows;
  const auto ns = sizes(cfg, 1, 500);
  const HarmonicTable h = harmonic_table(*std::max_element(ns.begin(), ns.end()) + 1);
  for (std::int64_t n : ns) {
    require_size(n, 1, "moments");
    double mean_err = 0.0, var_err = 0.0;
    for (std::int64_t l : key_grid(n, 20)) {
      const Moments m = mean_var(exact_depth_pmf(n, l));
      const double kp = kp_variance(n, l, h);
      mean_err = std::max(mean_err, std::abs(m.mean - ad_mean(n, l, h)));
      var_err = std::max(var_err, std::abs(m.variance - kp) / std::max(1.0, kp));
    }
    rows.push_back({"moments", label({{"n", n}}, "max |mean - (H_l + H_{n+1-l} - 2)|"),
                    BoundReport::compare(mean_err, 1e-9)});
    rows.push_back({"moments", label({{"n", n}}, "max relative variance error"),
                    BoundReport::compare(var_err, 1e-8)});
  }
  return rows;
}

Rows theorem3(const VerifyConfig& cfg) {
  Rows rows;
  for (std::int64_t n : filtered(cfg, {2, 3, 5, 10, 30, 100, 300, 1000, 3000})) {
    require_size(n, 2, "theorem3");
    std::vector<std::int64_t> keys{1, ceil_div(n, 4), ceil_div(n, 2), n};
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (std::int64_t l : keys) {
      rows.push_back({"theorem3", label({{"n", n}, {"l", l}}, "d_TV(X, Po(EX)) vs (28+pi^2)/log n"),
                      theorem3_margin(n, l)});
    }
  }
  return rows;
}

Rows theorem6(const VerifyConfig& cfg) {
  Rows rows;
  std::optional<double> first;
  for (std::int64_t n : filtered(cfg, {64, 256, 1024, 4096, 16384})) {
    require_size(n, 2, "theorem6");
    const MixedPoissonFit fit = theorem6_distance(n, 0.5);
    if (!first) first = fit.scaled;
    rows.push_back({"theorem6",
                    label({{"n", n}, {"l", fit.l}}, "d_W sqrt(log n) vs 1.1 x smallest-n value"),
                    BoundReport::compare(fit.scaled, 1.1 * *first)});
  }
  return rows;
}

Rows lemma2(const VerifyConfig& cfg) {
  Rows rows;
  for (std::int64_t n : sizes(cfg, 1, 300)) {
    require_size(n, 1, "lemma2");
    BoundReport worst = BoundReport::compare(0.0, 28.0);
    std::int64_t worst_l = 1;
    for (std::int64_t l = 1; l <= n; ++l) {
      const BoundReport r = lemma2_value(n, l);
      if (r.lhs > worst.lhs) {
        worst = r;
        worst_l = l;
      }
    }
    rows.push_back({"lemma2", label({{"n", n}, {"worst l", worst_l}}, "var(H(G) + H(N-1-G)) vs 28"),
                    worst});
  }
  return rows;
}

Rows lemma5(const VerifyConfig& cfg) {
  Rows rows;
  for (std::int64_t big_n : sizes(cfg, 1, 80)) {
    require_size(big_n, 1, "lemma5");
    std::optional<BoundReport> worst;
    std::int64_t worst_m = 0, worst_draws = 0;
    for (std::int64_t m = 1; m <= big_n; ++m) {
      for (std::int64_t draws = 1; draws <= big_n; ++draws) {
        const BoundReport r = lemma5_margin(big_n, m, draws);
        if (!worst || tightness(r) > tightness(*worst)) {
          worst = r;
          worst_m = m;
          worst_draws = draws;
        }
      }
    }
    rows.push_back({"lemma5", label({{"N", big_n}, {"worst M", worst_m}, {"n", worst_draws}},
                                    "E|log(X/EX)| 1{X>0} vs bound"),
                    *worst});
  }
  return rows;
}

DiscreteMeasure random_measure(RngStream& rng) {
  const auto atoms = static_cast<std::size_t>(rng.bounded(6)) + 1;
  std::vector<Atom> a(atoms);
  double total = 0.0;
  for (Atom& atom : a) {
    atom.location = 20.0 * rng.uniform();
    atom.weight = 0.05 + rng.uniform();
    total += atom.weight;
  }
  for (Atom& atom : a) atom.weight /= total;
  return make_discrete(std::move(a));
}

Pmf random_pmf(RngStream& rng) {
  Pmf p;
  p.offset = static_cast<std::int64_t>(rng.bounded(6));
  p.masses.resize(static_cast<Eigen::Index>(rng.bounded(12)) + 1);
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) p.masses[i] = rng.uniform();
  p.masses /= p.masses.sum();
  return p;
}

Rows worst_of(std::string suite, std::string what, std::int64_t trials,
              const std::function<BoundReport(std::int64_t)>& trial) {
  std::optional<BoundReport> worst;
  std::int64_t failures = 0;
  for (std::int64_t k = 0; k < trials; ++k) {
    const BoundReport r = trial(k);
    failures += r.holds ? 0 : 1;
    if (!worst || tightness(r) > tightness(*worst)) worst = r;
  }
  return {{std::move(suite),
           what + " (worst of " + std::to_string(trials) + ", failures " + std::to_string(failures) + ")",
           *worst}};
}

Rows lemma4b(const VerifyConfig& cfg) {
  RngStream rng(cfg.seed, 401);
  return worst_of("lemma4b", "d_W(MixPo mu, MixPo nu) vs d_W(mu, nu) + 1e-8", cfg.trials,
                  [&](std::int64_t) {
                    const DiscreteMeasure mu = random_measure(rng);
                    const DiscreteMeasure nu = random_measure(rng);
                    const double lhs = wasserstein(mixpo_pmf(mu), mixpo_pmf(nu)).value;
                    return BoundReport::compare(lhs, measure_wasserstein(mu, nu) + 1e-8);
                  });
}

Rows metrics(const VerifyConfig& cfg) {
  RngStream rng(cfg.seed, 402);
  std::vector<std::pair<Pmf, Pmf>> pairs;
  for (std::int64_t k = 0; k < cfg.trials; ++k) {
    Pmf p = random_pmf(rng);
    pairs.emplace_back(std::move(p), random_pmf(rng));
  }
  Rows rows = worst_of("metrics", "d_TV vs 2 d_W", cfg.trials, [&](std::int64_t k) {
    const auto& [p, q] = pairs[static_cast<std::size_t>(k)];
    return BoundReport::compare(total_variation(p, q).value, 2.0 * wasserstein(p, q).value);
  });
  Rows means = worst_of("metrics", "|mean difference| vs d_W", cfg.trials, [&](std::int64_t k) {
    const auto& [p, q] = pairs[static_cast<std::size_t>(k)];
    return BoundReport::compare(std::abs(mean_var(p).mean - mean_var(q).mean), wasserstein(p, q).value);
  });
  rows.insert(rows.end(), means.begin(), means.end());
  return rows;
}

Rows poisson_steps(const VerifyConfig& cfg) {
  Rows rows;
  const std::int64_t m_max = cfg.n_max.value_or(500);
  const HarmonicTable h = harmonic_table(std::max<std::int64_t>(m_max, 100000));
  const auto records = record_count_table(m_max);
  rows.push_back(worst_of("poisson_steps", "d_TV(records(m), Po(H_m)) vs H2_m / H_m, m <= " + std::to_string(m_max),
                          m_max, [&](std::int64_t k) {
                            const std::int64_t m = k + 1;
                            const double lhs = total_variation(records[static_cast<std::size_t>(m)],
                                                               poisson_pmf(h.H(m))).value;
                            return BoundReport::compare(lhs, h.H2(m) / h.H(m));
                          })
                     .front());
  CompensatedSum inverse_sum;
  std::optional<BoundReport> worst;
  for (std::int64_t n = 2; n <= 100000; ++n) {
    inverse_sum += 1.0 / h.H(n - 1);
    const BoundReport r =
        BoundReport::compare(inverse_sum.value(), 3.0 * static_cast<double>(n) / std::log(static_cast<double>(n)));
    if (!worst || tightness(r) > tightness(*worst)) worst = r;
  }
  rows.push_back({"poisson_steps", "sum_{m<n} 1/H_m vs 3n/log n, 2 <= n <= 100000 (worst)", *worst});

  RngStream rng(cfg.seed, 403);
  rows.push_back(worst_of("poisson_steps", "d_TV(MixPo mu, Po(mean mu)) vs var/mean", cfg.trials,
                          [&](std::int64_t) {
                            const DiscreteMeasure mu = random_measure(rng);
                            const Moments m = measure_moments(mu);
                            const double lhs = total_variation(mixpo_pmf(mu), poisson_pmf(m.mean)).value;
                            return BoundReport::compare(lhs, m.variance / m.mean);
                          })
                     .front());
  return rows;
}

Rows find(const VerifyConfig& cfg) {
  Rows rows;
  for (std::int64_t n : sizes(cfg, 1, 7)) {
    require_size(n, 1, "find");
    if (n > kBruteForceCap) throw ResourceError("exhaustive FIND sweep is capped at n = 9");
    for (std::int64_t l = 1; l <= n; ++l) {
      std::vector<std::int64_t> values(static_cast<std::size_t>(n));
      for (std::int64_t k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = k + 1;
      std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
      std::int64_t total = 0, mismatches = 0;
      do {
        const Permutation perm(values);
        const std::int64_t recursions = find_select(perm, l).recursions;
        const std::int64_t depth = node_depth(build_bst(perm), l);
        const RecordDecomposition rd = record_decomposition(perm, l);
        ++counts[static_cast<std::size_t>(recursions)];
        ++total;
        mismatches += (recursions != depth) + (rd.r_minus + rd.r_plus != depth);
      } while (std::next_permutation(values.begin(), values.end()));
      const Pmf oracle = brute_force_depth_pmf(n, l);
      double diff = 0.0;
      for (std::int64_t k = 0; k < n; ++k) {
        diff = std::max(diff, std::abs(static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                                           static_cast<double>(total) -
                                       oracle(k)));
      }
      rows.push_back({"find", label({{"n", n}, {"l", l}}, "max |P(R = k) - P(X = k)|"),
                      BoundReport::compare(diff, 0.0)});
      rows.push_back({"find", label({{"n", n}, {"l", l}}, "pathwise mismatches"),
                      BoundReport::compare(static_cast<double>(mismatches), 0.0)});
    }
  }
  RngStream rng(cfg.seed, 404);
  std::int64_t mismatches = 0;
  for (std::int64_t k = 0; k < cfg.samples; ++k) {
    const auto n = static_cast<std::int64_t>(rng.bounded(500)) + 1;
    const auto l = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(n))) + 1;
    const Permutation perm = random_permutation(n, rng);
    const std::int64_t depth = node_depth(build_bst(perm), l);
    const RecordDecomposition rd = record_decomposition(perm, l);
    mismatches += (rd.r_minus + rd.r_plus != depth) + (find_select(perm, l).recursions != depth);
  }
  rows.push_back({"find",
                  "random n <= 500: mismatches in r_minus + r_plus = depth = recursions over " +
                      std::to_string(cfg.samples) + " cases",
                  BoundReport::compare(static_cast<double>(mismatches), 0.0)});
  return rows;
}

Rows moves(const VerifyConfig& cfg) {
  Rows rows;
  for (std::int64_t n : sizes(cfg, 1, 30)) {
    require_size(n, 1, "moves");
    const auto records = record_count_table(n);
    double worst = 0.0;
    for (std::int64_t l = 1; l <= n; ++l) {
      const MoveJointPmf joint = exact_move_joint_pmf(n, l);
      const Pmf right = shifted(records[static_cast<std::size_t>(l)], -1);
      const Pmf left = shifted(records[static_cast<std::size_t>(n + 1 - l)], -1);
      worst = std::max({worst, total_variation(joint.right_marginal(), right).value,
                        total_variation(joint.left_marginal(), left).value,
                        total_variation(joint.total(), exact_depth_pmf(n, l)).value});
    }
    rows.push_back({"moves", label({{"n", n}}, "marginals vs record laws, sum vs depth law (max d_TV)"),
                    BoundReport::compare(worst, 1e-12)});
  }
  const MoveJointPmf joint = exact_move_joint_pmf(3, 2);
  const double p00 = joint.p(0, 0);
  const double product = joint.right_marginal()(0) * joint.left_marginal()(0);
  rows.push_back({"moves", "n=3 l=2 |P(0,0) - 1/3|", BoundReport::compare(std::abs(p00 - 1.0 / 3.0), 1e-12)});
  rows.push_back({"moves", "n=3 l=2 |P(0,0) - product of marginals| must reach 0.05",
                  BoundReport::compare(0.05, std::abs(p00 - product))});
  return rows;
}

Rows normality(const VerifyConfig& cfg) {
  Rows rows;
  const auto ns = filtered(cfg, {100, 1000, 10000});
  for (const bool extreme : {true, false}) {
    std::optional<double> previous;
    for (std::int64_t n : ns) {
      require_size(n, 2, "normality");
      const std::int64_t l = extreme ? 1 : ceil_div(n, 2);
      const HarmonicTable h = harmonic_table(n);
      const double mean = ad_mean(n, l, h);
      const double ks = ks_to_standard_normal(exact_depth_pmf(n, l), mean, std::sqrt(mean));
      if (previous) {
        rows.push_back({"normality", label({{"n", n}, {"l", l}}, "KS non-increasing in n"),
                        BoundReport::compare(ks, *previous)});
      }
      if (n >= 10000) {
        rows.push_back({"normality", label({{"n", n}, {"l", l}}, "KS vs 0.1"), BoundReport::compare(ks, 0.1)});
      }
      previous = ks;
    }
  }
  return rows;
}

Rows louchard(const VerifyConfig& cfg) {
  const std::int64_t n = cfg.n.value_or(10000);
  require_size(n, 2, "louchard");
  const auto samples = sample_batch(Route::kRandomKey, n, 1, cfg.samples, cfg.seed, 4050);
  const double centre = 2.0 * std::log(static_cast<double>(n));
  const double ks = ks_to_standard_normal(empirical_pmf(samples), centre, std::sqrt(centre));
  return {{"louchard",
           label({{"n", n}, {"samples", cfg.samples}}, "KS of (X_{n,U} - 2 log n)/sqrt(2 log n) vs 0.05"),
           BoundReport::compare(ks, 0.05)}};
}

Rows sampler(const VerifyConfig& cfg) {
  Rows rows;
  const std::array<Route, 3> routes{Route::kBst, Route::kRepresentation, Route::kFind};
  std::vector<std::pair<std::int64_t, std::int64_t>> cases{{50, 1}, {100, 37}, {500, 250}};
  if (cfg.n) {
    cases = {{*cfg.n, ceil_div(*cfg.n, 2)}};
  } else if (cfg.n_max) {
    std::erase_if(cases, [&](const auto& c) { return c.first > *cfg.n_max; });
  }
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto [n, l] = cases[c];
    require_size(n, 1, "sampler");
    const Pmf exact = exact_depth_pmf(n, l);
    std::vector<Pmf> laws;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      const auto stream = static_cast<std::uint64_t>(1000 * (c + 1) + 100 * r);
      laws.push_back(empirical_pmf(sample_batch(routes[r], n, l, cfg.samples, cfg.seed, stream)));
      rows.push_back({"sampler",
                      label({{"n", n}, {"l", l}}, "route " + std::string(route_name(routes[r])) + " d_TV to exact"),
                      BoundReport::compare(total_variation(laws.back(), exact).value, 0.01)});
    }
    for (std::size_t a = 0; a < routes.size(); ++a) {
      for (std::size_t b = a + 1; b < routes.size(); ++b) {
        rows.push_back({"sampler",
                        label({{"n", n}, {"l", l}}, std::string(route_name(routes[a])) + " vs " +
                                                        std::string(route_name(routes[b])) + " d_TV"),
                        BoundReport::compare(total_variation(laws[a], laws[b]).value, 0.015)});
      }
    }
  }
  const auto once = sample_batch(Route::kRepresentation, 100, 37, 20000, cfg.seed, 77, 1);
  const auto again = sample_batch(Route::kRepresentation, 100, 37, 20000, cfg.seed, 77, 4);
  rows.push_back({"sampler", "fixed seed, 1 vs 4 threads: differing samples",
                  BoundReport::compare(once == again ? 0.0 : 1.0, 0.0)});
  return rows;
}

}  // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

std::vector<std::int64_t> key_grid(std::int64_t n, std::int64_t points) {
  std::vector<std::int64_t> keys;
  for (std::int64_t k = 0; k < points; ++k) {
    const double x = 1.0 + static_cast<double>(k) * static_cast<double>(n - 1) / static_cast<double>(points - 1);
    const auto l = static_cast<std::int64_t>(std::floor(x + 0.5));
    if (keys.empty() || keys.back() != l) keys.push_back(l);
  }
  return keys;
}

std::vector<CheckRow> run_suite(std::string_view suite, const VerifyConfig& config) {
  static const std::map<std::string_view, Rows (*)(const VerifyConfig&)> table = {
      {"oracle", oracle},   {"moments", moments},   {"theorem3", theorem3},
      {"theorem6", theorem6}, {"lemma2", lemma2},   {"lemma4b", lemma4b},
      {"lemma5", lemma5},   {"metrics", metrics},   {"poisson_steps", poisson_steps},
      {"find", find},       {"moves", moves},       {"normality", normality},
      {"louchard", louchard}, {"sampler", sampler}};
  if (suite == "all") {
    Rows rows;
    for (std::string_view name : kSuites) {
      Rows part = table.at(name)(config);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
  }
  const auto it = table.find(suite);
  if (it == table.end()) throw DomainError("unknown suite '" + std::string(suite) + "'");
  return it->second(config);
}

bool all_hold(std::span<const CheckRow> rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.report.holds; });
}

}  // namespace depthlab
