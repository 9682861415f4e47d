#include "depthlab/json_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "depthlab/errors.hpp"

namespace depthlab {

void to_json(nlohmann::json& j, const Pmf& p) {
  std::vector<double> masses(p.masses.data(), p.masses.data() + p.masses.size());
  j = nlohmann::json{{"offset", p.offset}, {"masses", masses}, {"truncated_tail", p.truncated_tail}};
}

void from_json(const nlohmann::json& j, Pmf& p) {
  const auto masses = j.at("masses").get<std::vector<double>>();
  if (masses.empty()) throw DomainError("pmf JSON has no masses");
  p.offset = j.at("offset").get<std::int64_t>();
  p.masses = Eigen::Map<const Eigen::VectorXd>(masses.data(), static_cast<Eigen::Index>(masses.size()));
  p.truncated_tail = j.value("truncated_tail", 0.0);
  if (p.offset < 0) throw DomainError("pmf JSON offset must be nonnegative");
}

nlohmann::json measure_to_json(const MixingMeasure& nu) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&nu)) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : d->atoms) atoms.push_back({{"location", a.location}, {"weight", a.weight}});
    return {{"type", "discrete"}, {"atoms", atoms}};
  }
  return {{"type", "reflected_exponential"}, {"c", std::get<ReflectedExponential>(nu).c}};
}

MixingMeasure measure_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "reflected_exponential") return ReflectedExponential{j.at("c").get<double>()};
  if (type != "discrete") throw DomainError("unknown mixing measure type '" + type + "'");
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    atoms.push_back({a.at("location").get<double>(), a.at("weight").get<double>()});
  }
  return make_discrete(std::move(atoms));
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}, {"margin", r.margin}};
}

nlohmann::json pmf_document(const Pmf& p, std::int64_t n, std::int64_t l, const std::string& operation) {
  nlohmann::json doc = p;
  doc["metadata"] = {{"n", n}, {"l", l}, {"operation", operation}, {"version", kVersion}};
  return doc;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

}  // namespace depthlab
