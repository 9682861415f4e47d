// depthlab: exact node-depth laws, approximation reports, verification
// sweeps, simulation and depth plots for random binary search trees.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "depthlab/distributions.hpp"
#include "depthlab/errors.hpp"
#include "depthlab/exact_depth.hpp"
#include "depthlab/json_io.hpp"
#include "depthlab/mixing.hpp"
#include "depthlab/montecarlo.hpp"
#include "depthlab/trees.hpp"
#include "depthlab/verify.hpp"

namespace {

using depthlab::format_double;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBoundViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

enum class Format { kJson, kCsv };

struct RunConfig {
  std::int64_t n = 0;
  std::optional<std::int64_t> l;
  std::optional<double> t;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  std::int64_t samples = 100000;
  std::string format;  // empty: the command's default
  std::string output;
  std::int64_t cap = depthlab::kDefaultExactCap;
  // command specific
  std::string suite = "all";
  std::optional<std::int64_t> n_max;
  std::int64_t trials = 1000;
  std::string route;
  std::string samples_out;
  std::string perm_file;
  unsigned threads = 0;

  Format output_format() const {
    if (format == "json") return Format::kJson;
    if (format == "csv") return Format::kCsv;
    throw depthlab::DomainError("--format must be json or csv");
  }

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    return depthlab::seed_from_environment().value_or(0);
  }

  // Exactly one of --l / --t; --t maps to round(n t).
  std::int64_t key() const {
    if (l.has_value() == t.has_value()) throw depthlab::DomainError("supply exactly one of --l and --t");
    if (l) return *l;
    return depthlab::central_key(n, *t);
  }
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw depthlab::DomainError("cannot open output file " + cfg.output);
  out << text;
}

std::string pmf_csv(const depthlab::Pmf& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.masses.size(); ++i) {
    s += "mass," + std::to_string(p.offset + i) + "," + format_double(p.masses[i]) + "\n";
  }
  s += "truncated_tail,," + format_double(p.truncated_tail) + "\n";
  return s;
}

int cmd_exact(const RunConfig& cfg) {
  const std::int64_t l = cfg.key();
  const depthlab::ExactOptions opts{cfg.cap};
  const depthlab::Pmf p = depthlab::exact_depth_pmf(cfg.n, l, opts);
  const depthlab::HarmonicTable h = depthlab::harmonic_table(cfg.n);
  const double mean = depthlab::ad_mean(cfg.n, l, h);
  const double variance = depthlab::kp_variance(cfg.n, l, h);
  if (cfg.output_format() == Format::kJson) {
    json doc = depthlab::pmf_document(p, cfg.n, l, "exact");
    doc["mean"] = mean;
    doc["variance"] = variance;
    emit(cfg, doc.dump(2) + "\n");
  } else {
    emit(cfg, "field,k,value\n" + pmf_csv(p) + "mean,," + format_double(mean) + "\nvariance,," +
                  format_double(variance) + "\n");
  }
  return kExitOk;
}

int cmd_approx(const RunConfig& cfg) {
  const std::int64_t l = cfg.key();
  if (cfg.n < 2) throw depthlab::DomainError("approx needs n >= 2");
  const depthlab::ExactOptions opts{cfg.cap};
  const depthlab::Pmf exact = depthlab::exact_depth_pmf(cfg.n, l, opts);
  const depthlab::HarmonicTable h = depthlab::harmonic_table(cfg.n);
  const double mean = depthlab::ad_mean(cfg.n, l, h);
  const depthlab::Pmf poisson = depthlab::poisson_pmf(mean);
  const depthlab::BoundReport bound = depthlab::theorem3_margin(cfg.n, l, opts);

  json doc = {{"n", cfg.n},
              {"l", l},
              {"mean", mean},
              {"variance", depthlab::kp_variance(cfg.n, l, h)},
              {"poisson",
               {{"rate", mean},
                {"total_variation", bound.lhs},
                {"wasserstein", depthlab::wasserstein(exact, poisson).value},
                {"bound", bound.rhs},
                {"holds", bound.holds}}}};
  if (cfg.t) {
    const auto nu = depthlab::nu_exponential(cfg.n, *cfg.t);
    const depthlab::Pmf mixed = depthlab::mixpo_pmf(nu);
    const double dw = depthlab::wasserstein(exact, mixed).value;
    doc["t"] = *cfg.t;
    doc["mixed_poisson"] = {{"measure", depthlab::measure_to_json(nu)},
                            {"wasserstein", dw},
                            {"scaled", dw * std::sqrt(std::log(static_cast<double>(cfg.n)))},
                            {"total_variation", depthlab::total_variation(exact, mixed).value}};
  }
  doc["metadata"] = {{"n", cfg.n}, {"l", l}, {"operation", "approx"}, {"version", depthlab::kVersion}};
  if (cfg.output_format() == Format::kJson) {
    emit(cfg, doc.dump(2) + "\n");
    return kExitOk;
  }
  std::string s = "field,value\n";
  s += "mean," + format_double(mean) + "\n";
  s += "variance," + format_double(doc["variance"].get<double>()) + "\n";
  s += "poisson_total_variation," + format_double(bound.lhs) + "\n";
  s += "poisson_wasserstein," + format_double(doc["poisson"]["wasserstein"].get<double>()) + "\n";
  s += "poisson_bound," + format_double(bound.rhs) + "\n";
  if (cfg.t) {
    s += "mixed_poisson_wasserstein," + format_double(doc["mixed_poisson"]["wasserstein"].get<double>()) + "\n";
    s += "mixed_poisson_scaled," + format_double(doc["mixed_poisson"]["scaled"].get<double>()) + "\n";
  }
  emit(cfg, s);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  depthlab::VerifyConfig vc;
  if (cfg.n != 0) vc.n = cfg.n;
  vc.n_max = cfg.n_max;
  vc.seed = cfg.seed ? *cfg.seed : depthlab::seed_from_environment().value_or(vc.seed);
  vc.trials = cfg.trials;
  vc.samples = cfg.samples;
  const Format format = cfg.output_format();
  const auto rows = depthlab::run_suite(cfg.suite, vc);
  const bool ok = depthlab::all_hold(rows);
  if (format == Format::kJson) {
    json list = json::array();
    for (const auto& r : rows) {
      json row = r.report;
      row["suite"] = r.suite;
      row["check"] = r.label;
      list.push_back(row);
    }
    json doc = {{"suite", cfg.suite}, {"all_hold", ok}, {"rows", list}};
    doc["metadata"] = {{"operation", "verify"}, {"version", depthlab::kVersion}};
    emit(cfg, doc.dump(2) + "\n");
  } else {
    std::string s = "suite,check,lhs,rhs,holds,margin\n";
    for (const auto& r : rows) {
      s += r.suite + ",\"" + r.label + "\"," + format_double(r.report.lhs) + "," + format_double(r.report.rhs) +
           "," + (r.report.holds ? "true" : "false") + "," + format_double(r.report.margin) + "\n";
    }
    emit(cfg, s);
  }
  if (!ok) {
    for (const auto& r : rows) {
      if (!r.report.holds) {
        std::cerr << "FAILED " << r.suite << ": " << r.label << " (lhs " << format_double(r.report.lhs)
                  << ", rhs " << format_double(r.report.rhs) << ")\n";
      }
    }
    return kExitBoundViolated;
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto route = depthlab::parse_route(cfg.route);
  if (!route) throw depthlab::DomainError("unknown route '" + cfg.route + "'");
  if (cfg.samples < 1) throw depthlab::DomainError("--samples must be at least 1");
  std::int64_t l = 0;
  if (*route != depthlab::Route::kRandomKey) l = cfg.key();
  if (cfg.n < 1) throw depthlab::DomainError("--n must be positive");
  const std::uint64_t seed = cfg.resolved_seed();
  const auto samples = depthlab::sample_batch(*route, cfg.n, l, cfg.samples, seed, cfg.stream, cfg.threads);
  const depthlab::Pmf empirical = depthlab::empirical_pmf(samples);
  const depthlab::Moments moments = depthlab::mean_var(empirical);

  std::optional<depthlab::Pmf> exact;
  constexpr std::int64_t kRandomKeyExactCap = 256;
  if (*route != depthlab::Route::kRandomKey && cfg.n <= cfg.cap) {
    exact = depthlab::exact_depth_pmf(cfg.n, l, {cfg.cap});
  } else if (*route == depthlab::Route::kRandomKey && cfg.n <= kRandomKeyExactCap) {
    // X_{n,U}: average of the n fixed-key laws
    depthlab::Pmf avg = depthlab::Pmf::point_mass(0);
    avg.masses = Eigen::VectorXd::Zero(cfg.n);
    for (std::int64_t key = 1; key <= cfg.n; ++key) {
      const depthlab::Pmf p = depthlab::exact_depth_pmf(cfg.n, key);
      avg.masses.segment(p.offset, p.size()) += p.masses / static_cast<double>(cfg.n);
      avg.truncated_tail += p.truncated_tail / static_cast<double>(cfg.n);
    }
    exact = avg;
  }

  if (!cfg.samples_out.empty()) {
    std::ofstream out(cfg.samples_out, std::ios::binary);
    if (!out) throw depthlab::DomainError("cannot open " + cfg.samples_out);
    for (std::int64_t x : samples) out << x << '\n';
  }

  if (cfg.output_format() == Format::kJson) {
    json doc = {{"route", cfg.route},  {"n", cfg.n},       {"samples", cfg.samples},
                {"seed", seed},        {"stream", cfg.stream}, {"empirical", empirical},
                {"mean", moments.mean}, {"variance", moments.variance}};
    if (*route != depthlab::Route::kRandomKey) doc["l"] = l;
    if (exact) doc["total_variation_to_exact"] = depthlab::total_variation(empirical, *exact).value;
    doc["metadata"] = {{"n", cfg.n}, {"l", l}, {"operation", "simulate"}, {"version", depthlab::kVersion}};
    emit(cfg, doc.dump(2) + "\n");
  } else {
    std::string s = "field,k,value\n" + pmf_csv(empirical);
    s += "mean,," + format_double(moments.mean) + "\nvariance,," + format_double(moments.variance) + "\n";
    if (exact) s += "total_variation_to_exact,," + format_double(depthlab::total_variation(empirical, *exact).value) + "\n";
    emit(cfg, s);
  }
  return kExitOk;
}

int cmd_depth_plot(const RunConfig& cfg) {
  std::optional<depthlab::Permutation> perm;
  if (!cfg.perm_file.empty()) {
    std::ifstream in(cfg.perm_file);
    if (!in) throw depthlab::DomainError("cannot read permutation file " + cfg.perm_file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    perm = depthlab::parse_permutation(buffer.str());
  } else {
    if (cfg.n < 1) throw depthlab::DomainError("depth-plot needs --perm-file or --n with a seed");
    depthlab::RngStream rng(cfg.resolved_seed(), cfg.stream);
    perm = depthlab::random_permutation(cfg.n, rng);
  }
  const auto depths = depthlab::depth_plot(*perm);
  if (cfg.output_format() == Format::kJson) {
    json points = json::array();
    for (std::size_t i = 0; i < depths.size(); ++i) {
      points.push_back({{"l", static_cast<std::int64_t>(i) + 1}, {"depth", depths[i]}});
    }
    json doc = {{"n", perm->size()},
                {"permutation", std::vector<std::int64_t>(perm->values().begin(), perm->values().end())},
                {"points", points}};
    doc["metadata"] = {{"n", perm->size()}, {"operation", "depth-plot"}, {"version", depthlab::kVersion}};
    emit(cfg, doc.dump(2) + "\n");
  } else {
    std::string s = "l,depth\n";
    for (std::size_t i = 0; i < depths.size(); ++i) s += std::to_string(i + 1) + "," + std::to_string(depths[i]) + "\n";
    emit(cfg, s);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and approximate node-depth laws for random binary search trees"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_key = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "tree size")->required();
    auto* l = sub->add_option("--l", cfg.l, "key (1..n)");
    auto* t = sub->add_option("--t", cfg.t, "relative key position in (0, 1)");
    l->excludes(t);
  };
  auto add_output = [&](CLI::App* sub, const char* default_format) {
    sub->add_option("--format", cfg.format, std::string("json or csv (default ") + default_format + ")");
    sub->add_option("--output", cfg.output, "write to this file instead of standard output");
  };

  auto* exact = app.add_subcommand("exact", "exact depth law with mean and variance");
  add_key(exact);
  add_output(exact, "json");
  exact->add_option("--cap", cfg.cap, "largest n accepted by the exact computation")->capture_default_str();

  auto* approx = app.add_subcommand("approx", "Poisson and mixed Poisson approximation report");
  add_key(approx);
  add_output(approx, "json");
  approx->add_option("--cap", cfg.cap, "largest n accepted by the exact computation")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run verification sweeps; exit 0 iff every check holds");
  verify->add_option("--suite", cfg.suite, "suite name or 'all'")->capture_default_str();
  verify->add_option("--n", cfg.n, "restrict to a single size");
  verify->add_option("--n-max", cfg.n_max, "largest size in the sweep");
  verify->add_option("--seed", cfg.seed, "random seed (falls back to DEPTHLAB_SEED)");
  verify->add_option("--trials", cfg.trials, "random pairs for metric checks")->capture_default_str();
  verify->add_option("--samples", cfg.samples, "Monte Carlo sample size")->capture_default_str();
  add_output(verify, "json");

  auto* simulate = app.add_subcommand("simulate", "sample depths by one route");
  simulate->add_option("--route", cfg.route, "bst, representation, find or random-key")->required();
  simulate->add_option("--n", cfg.n, "tree size")->required();
  auto* sim_l = simulate->add_option("--l", cfg.l, "key (1..n)");
  auto* sim_t = simulate->add_option("--t", cfg.t, "relative key position in (0, 1)");
  sim_l->excludes(sim_t);
  simulate->add_option("--samples", cfg.samples, "number of samples")->capture_default_str();
  simulate->add_option("--seed", cfg.seed, "random seed (falls back to DEPTHLAB_SEED)");
  simulate->add_option("--stream", cfg.stream, "first stream id")->capture_default_str();
  simulate->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  simulate->add_option("--samples-out", cfg.samples_out, "write raw samples, one per line");
  simulate->add_option("--cap", cfg.cap, "largest n for the exact comparison")->capture_default_str();
  add_output(simulate, "json");

  auto* plot = app.add_subcommand("depth-plot", "depth of every key for one permutation");
  plot->add_option("--perm-file", cfg.perm_file, "one line of whitespace-separated integers 1..n");
  plot->add_option("--n", cfg.n, "size of a generated permutation");
  plot->add_option("--seed", cfg.seed, "random seed (falls back to DEPTHLAB_SEED)");
  plot->add_option("--stream", cfg.stream, "stream id")->capture_default_str();
  add_output(plot, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cfg.format.empty()) cfg.format = plot->parsed() ? "csv" : "json";

  try {
    if (exact->parsed()) return cmd_exact(cfg);
    if (approx->parsed()) return cmd_approx(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (plot->parsed()) return cmd_depth_plot(cfg);
  } catch (const depthlab::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const depthlab::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
