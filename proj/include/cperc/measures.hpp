#ifndef CPERC_MEASURES_HPP
#define CPERC_MEASURES_HPP

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cperc/log_real.hpp"

namespace cperc {

struct Atom {
  double radius;
  double mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite discrete measure on (0, inf): sum_i mass_i * delta_{radius_i}.
///
/// Atoms are kept sorted by radius. Radii are distinct, radii and masses are
/// strictly positive, and there is at least one atom.
class RadiusMeasure {
 public:
  explicit RadiusMeasure(std::vector<Atom> atoms);

  static RadiusMeasure dirac(double radius, double mass = 1.0) {
    return RadiusMeasure({{radius, mass}});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double max_radius() const { return atoms_.back().radius; }
  double min_radius() const { return atoms_.front().radius; }
  double total_mass() const;

  friend bool operator==(const RadiusMeasure&, const RadiusMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
};

struct ModelParams {
  int dimension;
  double intensity;
  RadiusMeasure measure;

  ModelParams(int d, double lambda, RadiusMeasure nu);
};

/// log of sum_i m_i r_i^d.
double log_moment(const RadiusMeasure& nu, int d);
double moment(const RadiusMeasure& nu, int d);

/// Stationary density of the union of balls: 1 - exp(-lambda * v_d * moment(nu, d)).
double covered_volume(const ModelParams& p);

/// lambda * v_d * 2^d * moment(nu, d), in log form.
LogReal normalized_intensity_log(const ModelParams& p);
double normalized_intensity(const ModelParams& p);

/// Covered volume expressed through the normalized intensity: 1 - exp(-tilde / 2^d).
double covered_volume_from_normalized(double normalized, int d);

/// Push-forward of nu under r -> a r.
RadiusMeasure scale_measure(const RadiusMeasure& nu, double a);

/// delta_1 + rho^{-d} delta_rho. Rejects rho <= 1.
RadiusMeasure make_mu_d(double rho, int d);

/// The Dirac-mixture results are proven for 1 < rho < 2; outside that range the
/// simulators still run but outputs carry this flag as false.
inline bool in_theorem_range(double rho) { return rho > 1.0 && rho < 2.0; }

struct TwoTypeIntensities {
  LogReal unit;    // lambda_1 = kappa^d / (v_d 2^d)
  LogReal large;   // lambda_rho = lambda_1 / rho^d
};

TwoTypeIntensities two_type_intensities(double kappa, double rho, int d);

/// Parses the measure mini-language: `dirac:R`, `mix:R1=M1,R2=M2,...`, `mud:RHO`
/// (the last expands at dimension d).
RadiusMeasure parse_measure_spec(const std::string& spec, int d);

/// JSON form: [{"radius": "1.5", "mass": "0.4444444444444444"}, ...] with
/// shortest round-trip decimal strings. Numbers are accepted on input too.
nlohmann::json to_json(const RadiusMeasure& nu);
RadiusMeasure measure_from_json(const nlohmann::json& j);

/// Shortest decimal string that round-trips to the same double.
std::string exact_decimal(double x);

}  // namespace cperc

#endif  // CPERC_MEASURES_HPP
