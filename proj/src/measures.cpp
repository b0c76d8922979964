#include "cperc/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cperc/error.hpp"
#include "cperc/geometry.hpp"

namespace cperc {

RadiusMeasure::RadiusMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  require(!atoms_.empty(), "radius measure needs at least one atom");
  for (const Atom& a : atoms_) {
    require(std::isfinite(a.radius) && a.radius > 0.0, "atom radius must be positive and finite");
    require(std::isfinite(a.mass) && a.mass > 0.0, "atom mass must be positive and finite");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.radius < b.radius; });
  for (std::size_t i = 1; i < atoms_.size(); ++i)
    require(atoms_[i].radius != atoms_[i - 1].radius, "atom radii must be distinct");
}

double RadiusMeasure::total_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.mass;
  return m;
}

ModelParams::ModelParams(int d, double lambda, RadiusMeasure nu)
    : dimension(d), intensity(lambda), measure(std::move(nu)) {
  require(dimension >= 2, "model dimension must be >= 2");
  require(std::isfinite(intensity) && intensity > 0.0, "intensity must be positive");
}

double log_moment(const RadiusMeasure& nu, int d) {
  require(d >= 0, "moment order must be >= 0");
  std::vector<double> terms;
  terms.reserve(nu.size());
  for (const Atom& a : nu.atoms()) terms.push_back(std::log(a.mass) + d * std::log(a.radius));
  return log_sum_exp(terms);
}

double moment(const RadiusMeasure& nu, int d) {
  require(d >= 0, "moment order must be >= 0");
  // Direct sum is exact enough while every term is representable.
  double s = 0.0;
  bool ok = true;
  for (const Atom& a : nu.atoms()) {
    const double t = a.mass * std::pow(a.radius, d);
    if (!std::isfinite(t) || t == 0.0) ok = false;
    s += t;
  }
  return ok ? s : std::exp(log_moment(nu, d));
}

double covered_volume(const ModelParams& p) {
  const double log_rate = std::log(p.intensity) + log_unit_ball_volume(p.dimension) +
                          log_moment(p.measure, p.dimension);
  return -std::expm1(-std::exp(log_rate));
}

LogReal normalized_intensity_log(const ModelParams& p) {
  return {std::log(p.intensity) + log_unit_ball_volume(p.dimension) +
          p.dimension * std::numbers::ln2 + log_moment(p.measure, p.dimension)};
}

double normalized_intensity(const ModelParams& p) {
  return normalized_intensity_log(p).value();
}

double covered_volume_from_normalized(double normalized, int d) {
  return -std::expm1(-normalized / std::ldexp(1.0, d));
}

RadiusMeasure scale_measure(const RadiusMeasure& nu, double a) {
  require(std::isfinite(a) && a > 0.0, "scale factor must be positive");
  std::vector<Atom> atoms = nu.atoms();
  for (Atom& at : atoms) at.radius *= a;
  return RadiusMeasure(std::move(atoms));
}

RadiusMeasure make_mu_d(double rho, int d) {
  require(rho > 1.0, "mu_d needs rho > 1");
  require(d >= 1, "mu_d needs d >= 1");
  const double mass = std::exp(-d * std::log(rho));
  if (mass == 0.0) throw InvalidArgument("rho^-d underflows; use the log-domain analytics");
  return RadiusMeasure({{1.0, 1.0}, {rho, mass}});
}

TwoTypeIntensities two_type_intensities(double kappa, double rho, int d) {
  require(kappa > 0.0, "kappa must be positive");
  require(rho > 1.0, "rho must exceed 1");
  require(d >= 1, "dimension must be >= 1");
  const double log_unit =
      d * std::log(kappa) - log_unit_ball_volume(d) - d * std::numbers::ln2;
  return {LogReal{log_unit}, LogReal{log_unit - d * std::log(rho)}};
}

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InvalidArgument("bad number '" + s + "' in " + ctx);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

RadiusMeasure parse_measure_spec(const std::string& spec, int d) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("measure spec needs kind:args, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "dirac") return RadiusMeasure::dirac(parse_double(args, spec));
  if (kind == "mud") return make_mu_d(parse_double(args, spec), d);
  if (kind == "mix") {
    std::vector<Atom> atoms;
    for (const std::string& part : split(args, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw InvalidArgument("mix atom needs R=M, got '" + part + "'");
      atoms.push_back({parse_double(part.substr(0, eq), spec), parse_double(part.substr(eq + 1), spec)});
    }
    return RadiusMeasure(std::move(atoms));
  }
  throw InvalidArgument("unknown measure kind '" + kind + "'");
}

std::string exact_decimal(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

nlohmann::json to_json(const RadiusMeasure& nu) {
  nlohmann::json out = nlohmann::json::array();
  for (const Atom& a : nu.atoms())
    out.push_back({{"radius", exact_decimal(a.radius)}, {"mass", exact_decimal(a.mass)}});
  return out;
}

RadiusMeasure measure_from_json(const nlohmann::json& j) {
  require(j.is_array(), "measure JSON must be an array");
  auto read = [](const nlohmann::json& v, const char* key) {
    require(v.contains(key), std::string("atom is missing '") + key + "'");
    const auto& f = v.at(key);
    if (f.is_string()) return parse_double(f.get<std::string>(), key);
    require(f.is_number(), std::string("atom field '") + key + "' must be a number or string");
    return f.get<double>();
  };
  std::vector<Atom> atoms;
  for (const auto& v : j) atoms.push_back({read(v, "radius"), read(v, "mass")});
  return RadiusMeasure(std::move(atoms));
}

}  // namespace cperc
