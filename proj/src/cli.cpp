#include "cperc/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cperc/branching.hpp"
#include "cperc/embedding.hpp"
#include "cperc/error.hpp"
#include "cperc/estimator.hpp"
#include "cperc/measures.hpp"
#include "cperc/oriented.hpp"
#include "cperc/parallel.hpp"
#include "cperc/percolation.hpp"
#include "cperc/sampling.hpp"

#ifndef CPERC_VERSION
#define CPERC_VERSION "0.0.0"
#endif

namespace cperc::cli {

const char* version() { return CPERC_VERSION; }

namespace {

using nlohmann::json;

// Thread count and output path are left out of the echoed config on purpose:
// neither changes the numbers, and echoing them would break byte identity.
struct Global {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
};

json header(const std::string& command, json config, const Global& g) {
  config["seed"] = g.seed;
  return {{"tool", "cperc"}, {"version", version()}, {"command", command}, {"config", std::move(config)}};
}

void emit(const Global& g, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
  if (g.out.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + g.out + "'");
  write(f);
  if (!f) throw std::runtime_error("failed writing output file '" + g.out + "'");
}

void emit_json(const Global& g, std::ostream& out, const json& doc) {
  emit(g, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

std::string csv_comment(const json& head) { return "# " + head.dump() + "\n"; }

json log_real(const LogReal& x) { return {{"log", x.log}, {"value", x.value()}}; }

json limits_json(const BranchLimits& b) {
  return {{"alpha1", b.alpha1}, {"alpha2", b.alpha2}, {"eta", b.eta}, {"interference", b.interference}};
}

// ---- sample / clusters ------------------------------------------------------

struct SampleArgs {
  int d = 2;
  std::string measure = "dirac:1";
  double lambda = 0.0;
  double L = 10.0;
  double padding = -1.0;
  bool torus = false;
  std::uint64_t replicate = 0;
  std::string format = "csv";
};

void add_sample_options(CLI::App* sub, SampleArgs& a) {
  sub->add_option("--d", a.d, "dimension")->required()->check(CLI::Range(2, 1000));
  sub->add_option("--measure", a.measure, "radius measure: dirac:R | mix:R=M,... | mud:RHO")
      ->capture_default_str();
  sub->add_option("--L", a.L, "window side in units of the largest radius")->capture_default_str();
  sub->add_option("--padding", a.padding, "padding (absolute); default: largest radius");
  sub->add_flag("--torus", a.torus, "periodic window instead of padding");
  sub->add_option("--replicate", a.replicate, "replicate index")->capture_default_str();
  sub->add_option("--format", a.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

struct Sampled {
  RadiusMeasure nu;
  BoxWindow window;
  json config;
};

Sampled prepare_sample(const SampleArgs& a) {
  RadiusMeasure nu = parse_measure_spec(a.measure, a.d);
  require(a.L > 0.0, "--L must be positive");
  const double r = nu.max_radius();
  const double padding = a.padding < 0.0 ? r : a.padding;
  BoxWindow w = BoxWindow::cube(a.d, a.L * r, padding, a.torus ? Boundary::torus : Boundary::padded);
  json cfg = {{"d", a.d},           {"measure", a.measure}, {"measure_resolved", to_json(nu)},
              {"L", a.L},           {"side", a.L * r},      {"padding", padding},
              {"torus", a.torus},   {"replicate", a.replicate}, {"format", a.format}};
  return {std::move(nu), std::move(w), std::move(cfg)};
}

int cmd_sample(const SampleArgs& a, const Global& g, std::ostream& out) {
  Sampled s = prepare_sample(a);
  s.config["lambda"] = a.lambda;
  const ModelParams params(a.d, a.lambda, s.nu);
  const BallConfiguration c = sample_boolean_model(params, s.window, g.seed, a.replicate);
  const json head = header("sample", s.config, g);
  if (a.format == "csv") {
    emit(g, out, [&](std::ostream& os) {
      os << csv_comment(head);
      write_csv(os, c);
    });
    return kExitOk;
  }
  json doc = head;
  json balls = json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    std::vector<double> x(c.centers.col(i).data(), c.centers.col(i).data() + c.dim());
    balls.push_back({{"center", x}, {"radius", c.radii(i)}});
  }
  doc["count"] = c.size();
  doc["balls"] = std::move(balls);
  emit_json(g, out, doc);
  return kExitOk;
}

struct ClusterArgs {
  SampleArgs sample;
  int axis = 0;
  std::string input;
};

int cmd_clusters(const ClusterArgs& a, const Global& g, std::ostream& out) {
  Sampled s = prepare_sample(a.sample);
  require(a.axis >= 0 && a.axis < a.sample.d, "--axis out of range");
  s.config["axis"] = a.axis;
  BallConfiguration c;
  if (!a.input.empty()) {
    std::ifstream in(a.input);
    if (!in) throw InvalidArgument("cannot open input file '" + a.input + "'");
    c = read_csv(in, s.window);
    s.config["input"] = a.input;
  } else {
    s.config["lambda"] = a.sample.lambda;
    const ModelParams params(a.sample.d, a.sample.lambda, s.nu);
    c = sample_boolean_model(params, s.window, g.seed, a.sample.replicate);
  }
  const std::vector<ClusterStat> stats = cluster_statistics(c, a.axis);
  const json head = header("clusters", s.config, g);
  if (a.sample.format == "csv") {
    emit(g, out, [&](std::ostream& os) {
      os << csv_comment(head);
      write_cluster_csv(os, stats);
    });
    return kExitOk;
  }
  json doc = head;
  bool crosses = false;
  std::size_t largest = 0;
  json rows = json::array();
  for (const ClusterStat& st : stats) {
    crosses = crosses || st.crossing;
    largest = std::max(largest, st.size);
    rows.push_back({{"cluster_id", st.id}, {"size", st.size}, {"crossing", st.crossing}});
  }
  doc["balls"] = c.size();
  doc["clusters"] = stats.size();
  doc["largest_cluster"] = largest;
  doc["crossing"] = crosses;
  doc["cluster_stats"] = std::move(rows);
  emit_json(g, out, doc);
  return kExitOk;
}

// ---- threshold / sweep ------------------------------------------------------

void add_threshold_options(CLI::App* sub, ThresholdOptions& o, double& L) {
  sub->add_option("--L", L, "window side in units of the largest radius")->capture_default_str();
  sub->add_option("--replicates", o.replicates, "replicates per evaluated intensity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--tolerance", o.tolerance, "relative bracket width")->capture_default_str();
  sub->add_option("--target", o.target, "target crossing frequency")->capture_default_str();
  sub->add_option("--local-points", o.local_points, "points of the local fitting grid")
      ->capture_default_str();
  sub->add_option("--local-span", o.local_span, "relative half-width of the local grid")
      ->capture_default_str();
}

json threshold_config(const ThresholdOptions& o, double L) {
  return {{"L", L},
          {"replicates", o.replicates},
          {"tolerance", o.tolerance},
          {"target", o.target},
          {"local_points", o.local_points},
          {"local_span", o.local_span}};
}

json estimate_json(const ThresholdEstimate& e) {
  json curve = json::array();
  for (std::size_t k = 0; k < e.curve.size(); ++k)
    curve.push_back({{"lambda", e.curve[k].lambda},
                     {"frequency", e.curve[k].frequency},
                     {"std_error", e.curve[k].std_error},
                     {"isotonic", e.isotonic[k]}});
  return {{"d", e.d},
          {"L", e.L},
          {"replicates", e.replicates},
          {"seed", e.seed},
          {"lambda_hat", e.lambda_hat},
          {"lambda_std_error", e.lambda_std_error},
          {"lambda_lo", e.lambda_lo},
          {"lambda_hi", e.lambda_hi},
          {"bracket_lo", e.bracket_lo},
          {"bracket_hi", e.bracket_hi},
          {"lambda_tilde", e.lambda_tilde},
          {"lambda_tilde_std_error", e.lambda_tilde_std_error},
          {"c_hat", e.c_hat},
          {"c_std_error", e.c_std_error},
          {"finite_size_warning", e.finite_size_warning},
          {"curve", std::move(curve)}};
}

struct ThresholdArgs {
  int d = 2;
  std::string measure = "dirac:1";
  double L = 30.0;
  ThresholdOptions opt;
  std::string format = "json";
};

int cmd_threshold(ThresholdArgs a, const Global& g, std::ostream& out) {
  const RadiusMeasure nu = parse_measure_spec(a.measure, a.d);
  a.opt.threads = g.threads;
  json cfg = threshold_config(a.opt, a.L);
  cfg["d"] = a.d;
  cfg["measure"] = a.measure;
  cfg["measure_resolved"] = to_json(nu);
  cfg["format"] = a.format;
  const json head = header("threshold", cfg, g);
  const ThresholdEstimate e = bisect_threshold(a.d, nu, a.L, g.seed, a.opt);
  if (a.format == "csv") {
    emit(g, out, [&](std::ostream& os) {
      os << csv_comment(head);
      os << "lambda,frequency,std_error,isotonic\n";
      for (std::size_t k = 0; k < e.curve.size(); ++k)
        os << exact_decimal(e.curve[k].lambda) << ',' << exact_decimal(e.curve[k].frequency) << ','
           << exact_decimal(e.curve[k].std_error) << ',' << exact_decimal(e.isotonic[k]) << '\n';
    });
    return kExitOk;
  }
  json doc = head;
  doc["estimate"] = estimate_json(e);
  emit_json(g, out, doc);
  return kExitOk;
}

struct SweepArgs {
  int d = 2;
  double rho = 2.0;
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  double L = 30.0;
  ThresholdOptions opt;
  std::string format = "csv";
};

int cmd_sweep(SweepArgs a, const Global& g, std::ostream& out) {
  require(!a.alphas.empty(), "--alpha needs at least one value");
  for (double alpha : a.alphas) (void)mixture_measure(alpha, a.rho, a.d);
  a.opt.threads = g.threads;
  json cfg = threshold_config(a.opt, a.L);
  cfg["d"] = a.d;
  cfg["rho"] = a.rho;
  cfg["alpha"] = a.alphas;
  cfg["format"] = a.format;
  const json head = header("sweep", cfg, g);
  const std::vector<SweepRow> rows = mixture_sweep(a.d, a.rho, a.alphas, a.L, g.seed, a.opt);
  if (a.format == "csv") {
    emit(g, out, [&](std::ostream& os) {
      os << csv_comment(head);
      write_sweep_csv(os, a.d, a.rho, rows);
    });
    return kExitOk;
  }
  json doc = head;
  json arr = json::array();
  for (const SweepRow& r : rows) {
    json e = estimate_json(r.estimate);
    e["alpha"] = r.alpha;
    e["rho"] = a.rho;
    arr.push_back(std::move(e));
  }
  doc["rows"] = std::move(arr);
  emit_json(g, out, doc);
  return kExitOk;
}

// ---- gw ---------------------------------------------------------------------

struct GwArgs {
  double rho = 1.5;
  double kappa = 0.9;
  int d_min = 1;
  int d_max = 0;
  std::string format = "json";
};

int cmd_gw(const GwArgs& a, const Global& g, std::ostream& out) {
  require(a.d_min >= 1 && a.d_max >= a.d_min, "need 1 <= --d-min <= --d-max");
  require(a.rho > 1.0, "--rho must exceed 1");
  require(a.kappa > 0.0, "--kappa must be positive");
  const json cfg = {{"rho", a.rho}, {"kappa", a.kappa}, {"d_min", a.d_min}, {"d_max", a.d_max},
                    {"format", a.format}};
  const json head = header("gw", cfg, g);
  json rows = json::array();
  for (int d = a.d_min; d <= a.d_max; ++d) {
    const LogReal r = perron_root(mean_matrix(a.kappa, a.rho, d));
    rows.push_back({{"kappa", a.kappa},
                    {"rho", a.rho},
                    {"d", d},
                    {"log_r_d", r.log},
                    {"class", to_string(classify(a.kappa, a.rho, d))}});
  }
  if (a.format == "csv") {
    emit(g, out, [&](std::ostream& os) {
      os << csv_comment(head);
      os << "kappa,rho,d,log_r_d,class\n";
      for (const json& row : rows)
        os << exact_decimal(a.kappa) << ',' << exact_decimal(a.rho) << ',' << row["d"].get<int>()
           << ',' << exact_decimal(row["log_r_d"].get<double>()) << ','
           << row["class"].get<std::string>() << '\n';
    });
    return kExitOk;
  }
  json doc = head;
  doc["kappa_critical"] = kappa_critical(a.rho);
  doc["rows"] = std::move(rows);
  emit_json(g, out, doc);
  return kExitOk;
}

// ---- embed ------------------------------------------------------------------

struct EmbedArgs {
  double rho = 1.5;
  double kappa = 0.99;
  std::vector<int> dims;
  std::size_t pairs = 100000;
};

json geometry_json(const EmbeddingGeometry& g) {
  return {{"d", g.d},
          {"rho", g.rho},
          {"kappa", g.kappa},
          {"scale", g.scale()},
          {"c1_inner", g.c1_inner()},
          {"c1_outer", g.c1_outer()},
          {"c2_inner", g.c2_inner()},
          {"c2_outer", g.c2_outer()},
          {"regions_disjoint", g.regions_disjoint()},
          {"theorem_range", g.theorem_range()}};
}

json volumes_json(const RegionVolumes& v) {
  return {{"c1_tail", log_real(v.c1_tail)}, {"c2_tail", log_real(v.c2_tail)},
          {"c1", log_real(v.c1)},           {"c2", log_real(v.c2)},
          {"d2_tail", log_real(v.d2_tail)}, {"d2", log_real(v.d2)},
          {"s_cone", log_real(v.s_cone)},   {"s_lower", log_real(v.s_lower)},
          {"s_upper", log_real(v.s_upper)}, {"sandwich_holds", v.sandwich_holds}};
}

std::vector<EmbeddingGeometry> embed_geometries(const EmbedArgs& a) {
  require(!a.dims.empty(), "--d needs at least one value");
  std::vector<EmbeddingGeometry> out;
  for (int d : a.dims) out.emplace_back(d, a.rho, a.kappa);
  return out;
}

int cmd_embed_volumes(const EmbedArgs& a, const Global& g, std::ostream& out) {
  const auto geoms = embed_geometries(a);
  const json cfg = {{"rho", a.rho}, {"kappa", a.kappa}, {"d", a.dims}};
  json doc = header("embed-volumes", cfg, g);
  json rows = json::array();
  for (const EmbeddingGeometry& geo : geoms)
    rows.push_back({{"geometry", geometry_json(geo)}, {"volumes", volumes_json(region_volumes(geo))}});
  doc["rows"] = std::move(rows);
  emit_json(g, out, doc);
  return kExitOk;
}

int cmd_embed_bounds(const EmbedArgs& a, const Global& g, std::ostream& out) {
  const auto geoms = embed_geometries(a);
  const json cfg = {{"rho", a.rho}, {"kappa", a.kappa}, {"d", a.dims}, {"pairs", a.pairs}};
  json doc = header("embed-bounds", cfg, g);
  json rows = json::array();
  std::vector<double> eta_logs, interference_logs;
  for (const EmbeddingGeometry& geo : geoms) {
    const InclusionCertificate cert = certify_inclusions(geo, a.pairs, g.seed);
    const BranchParameters bp = branch_parameters(geo);
    eta_logs.push_back(bp.eta.log);
    interference_logs.push_back(bp.interference.log);
    rows.push_back(
        {{"geometry", geometry_json(geo)},
         {"inclusions",
          {{"inclus1", cert.inclus1},
           {"inclus2", cert.inclus2},
           {"margin1", cert.margin1},
           {"margin2", cert.margin2},
           {"sampled_pairs", cert.sampled_pairs},
           {"violations1", cert.violations1},
           {"violations2", cert.violations2}}},
         {"alpha1", log_real(bp.alpha1)},
         {"alpha2", log_real(bp.alpha2)},
         {"eta", log_real(bp.eta)},
         {"interference", log_real(bp.interference)},
         {"failure_bound", bp.failure_bound()},
         {"normalized_logs", limits_json(bp.normalized_logs(geo.d))},
         {"log_slopes", limits_json(branch_log_slopes(geo.kappa, geo.rho, geo.d))},
         {"limits", limits_json(bp.limits)}});
  }
  bool eta_up = true, interference_down = true;
  for (std::size_t k = 1; k < eta_logs.size(); ++k) {
    eta_up = eta_up && eta_logs[k] > eta_logs[k - 1];
    interference_down = interference_down && interference_logs[k] < interference_logs[k - 1];
  }
  doc["rows"] = std::move(rows);
  doc["eta_increasing"] = eta_up;
  doc["interference_decreasing"] = interference_down;
  emit_json(g, out, doc);
  return kExitOk;
}

struct GPlusArgs {
  int d = 6;
  double rho = 1.5;
  double kappa = 0.9;
  std::size_t replicates = 1000;
  std::vector<double> x0;
};

int cmd_embed_gplus(const GPlusArgs& a, const Global& g, std::ostream& out) {
  const EmbeddingGeometry geo(a.d, a.rho, a.kappa);
  Point x0 = Point::Zero(a.d);
  if (a.x0.empty()) {
    x0(1) = -0.5 * geo.scale();
  } else {
    require(static_cast<int>(a.x0.size()) == a.d, "--x0 needs d coordinates");
    x0 = Eigen::Map<const Eigen::VectorXd>(a.x0.data(), a.d);
  }
  std::vector<double> x0v(x0.data(), x0.data() + a.d);
  const json cfg = {{"d", a.d}, {"rho", a.rho}, {"kappa", a.kappa}, {"replicates", a.replicates},
                    {"x0", x0v}};
  json doc = header("embed-gplus", cfg, g);
  const GPlusEstimate e = estimate_g_plus(geo, x0, a.replicates, g.seed, g.threads);
  doc["geometry"] = geometry_json(geo);
  doc["p_hat"] = e.p_hat;
  doc["std_error"] = e.std_error;
  doc["tail_radius"] = e.tail_radius;
  doc["expected_unit"] = e.expected_unit;
  doc["expected_large"] = e.expected_large;
  if (a.d >= 4) {
    const BranchParameters bp = branch_parameters(geo);
    const double bound = 1.0 - bp.failure_bound();
    doc["lower_bound"] = bound;
    doc["consistent_3se"] = e.p_hat >= bound - 3.0 * e.std_error;
  }
  emit_json(g, out, doc);
  return kExitOk;
}

// ---- oriented ---------------------------------------------------------------

struct OrientedArgs {
  std::string mode = "bernoulli";
  std::vector<double> p{0.55, 0.65, 0.70, 0.80, 0.90};
  int n_max = 200;
  std::size_t runs = 2000;
  int d = 6;
  double rho = 1.5;
  double kappa = 2.0;
};

int cmd_oriented(const OrientedArgs& a, const Global& g, std::ostream& out) {
  const OrientedMode mode = parse_oriented_mode(a.mode);
  require(!a.p.empty(), "--p needs at least one value");
  require(a.n_max >= 1, "--n-max must be positive");
  require(a.runs >= 1, "--runs must be positive");
  for (double p : a.p) require(p >= 0.0 && p <= 1.0, "--p values must lie in [0, 1]");
  json cfg = {{"mode", a.mode}, {"p", a.p}, {"n_max", a.n_max}, {"runs", a.runs}};
  std::optional<EmbeddingGeometry> geo;
  if (mode == OrientedMode::embedded) {
    geo.emplace(a.d, a.rho, a.kappa);
    cfg["d"] = a.d;
    cfg["rho"] = a.rho;
    cfg["kappa"] = a.kappa;
  }
  json doc = header("oriented", cfg, g);
  const EmbeddingGeometry placeholder(3, 1.5, 1.0);
  const EmbeddingGeometry& gg = geo ? *geo : placeholder;
  json rows = json::array();
  for (double p : a.p) {
    std::vector<OrientedResult> res(a.runs);
    parallel_for(a.runs, g.threads, [&](std::size_t r) {
      res[r] = simulate_oriented(gg, p, a.n_max, g.seed, mode, r);
    });
    std::size_t survived = 0, verified = 0, real = 0;
    double level = 0.0;
    for (const OrientedResult& r : res) {
      survived += r.survival;
      level += r.max_level;
      real += r.real_sites;
      if (mode == OrientedMode::embedded && verify_alternating_chain(r.chain, a.rho)) ++verified;
    }
    const double n = static_cast<double>(a.runs);
    const double f = survived / n;
    json row = {{"p", p},
                {"survival_frequency", f},
                {"std_error", std::sqrt(f * (1.0 - f) / n)},
                {"mean_max_level", level / n}};
    if (mode == OrientedMode::embedded) {
      row["chains_verified"] = verified;
      row["mean_real_sites"] = real / n;
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  emit_json(g, out, doc);
  return kExitOk;
}

void write_error(std::ostream& err, const std::string& category, const std::string& message) {
  const json e = {{"tool", "cperc"},
                  {"version", version()},
                  {"error", {{"category", category}, {"message", message}}}};
  err << e.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuum percolation experiments", "cperc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", version());
  app.set_config("--config", "", "TOML/INI file; command-line flags take precedence");

  Global g;
  g.threads = default_threads();
  app.add_option("--seed", g.seed, "base seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (default: standard output)");

  SampleArgs sample;
  auto* s_sample = app.add_subcommand("sample", "sample a Boolean model");
  add_sample_options(s_sample, sample);
  s_sample->add_option("--lambda", sample.lambda, "intensity")->required();

  ClusterArgs clusters;
  auto* s_clusters = app.add_subcommand("clusters", "cluster statistics and crossing flags");
  add_sample_options(s_clusters, clusters.sample);
  s_clusters->add_option("--lambda", clusters.sample.lambda, "intensity");
  s_clusters->add_option("--axis", clusters.axis, "crossing axis")->capture_default_str();
  s_clusters->add_option("--input", clusters.input, "read balls from a CSV file instead of sampling");

  ThresholdArgs threshold;
  auto* s_threshold = app.add_subcommand("threshold", "0.5-crossing threshold estimate");
  s_threshold->add_option("--d", threshold.d, "dimension")->required()->check(CLI::Range(2, 1000));
  s_threshold->add_option("--measure", threshold.measure, "radius measure")->capture_default_str();
  add_threshold_options(s_threshold, threshold.opt, threshold.L);
  s_threshold->add_option("--format", threshold.format, "json or csv")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  SweepArgs sweep;
  auto* s_sweep = app.add_subcommand("sweep", "threshold across the two-radius mixture family");
  s_sweep->add_option("--d", sweep.d, "dimension")->capture_default_str()->check(CLI::Range(2, 1000));
  s_sweep->add_option("--rho", sweep.rho, "second radius")->capture_default_str();
  s_sweep->add_option("--alpha", sweep.alphas, "mixture weights")->delimiter(',')->capture_default_str();
  add_threshold_options(s_sweep, sweep.opt, sweep.L);
  s_sweep->add_option("--format", sweep.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  GwArgs gw;
  auto* s_gw = app.add_subcommand("gw", "Perron root and criticality of the two-type process");
  s_gw->add_option("--rho", gw.rho)->capture_default_str();
  s_gw->add_option("--kappa", gw.kappa)->capture_default_str();
  s_gw->add_option("--d-min", gw.d_min)->capture_default_str();
  s_gw->add_option("--d-max", gw.d_max)->required();
  s_gw->add_option("--format", gw.format, "json or csv")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  EmbedArgs volumes;
  auto* s_volumes = app.add_subcommand("embed-volumes", "exact region volumes");
  s_volumes->add_option("--rho", volumes.rho)->capture_default_str();
  s_volumes->add_option("--kappa", volumes.kappa)->capture_default_str();
  s_volumes->add_option("--d", volumes.dims, "dimensions")->delimiter(',')->required();

  EmbedArgs bounds;
  auto* s_bounds = app.add_subcommand("embed-bounds", "inclusions, branch parameters and rates");
  s_bounds->add_option("--rho", bounds.rho)->capture_default_str();
  s_bounds->add_option("--kappa", bounds.kappa)->capture_default_str();
  s_bounds->add_option("--d", bounds.dims, "dimensions")->delimiter(',')->required();
  s_bounds->add_option("--pairs", bounds.pairs, "sampled pairs per inclusion")->capture_default_str();

  GPlusArgs gplus;
  auto* s_gplus = app.add_subcommand("embed-gplus", "Monte Carlo estimate of the one-step event");
  s_gplus->add_option("--d", gplus.d)->capture_default_str();
  s_gplus->add_option("--rho", gplus.rho)->capture_default_str();
  s_gplus->add_option("--kappa", gplus.kappa)->capture_default_str();
  s_gplus->add_option("--replicates", gplus.replicates)->capture_default_str()->check(CLI::PositiveNumber);
  s_gplus->add_option("--x0", gplus.x0, "starting point (d comma-separated coordinates)")->delimiter(',');

  OrientedArgs oriented;
  auto* s_oriented = app.add_subcommand("oriented", "oriented percolation survival");
  s_oriented->add_option("--mode", oriented.mode)
      ->check(CLI::IsMember({"bernoulli", "embedded"}))
      ->capture_default_str();
  s_oriented->add_option("--p", oriented.p, "edge (or floor) probabilities")
      ->delimiter(',')
      ->capture_default_str();
  s_oriented->add_option("--n-max", oriented.n_max)->capture_default_str();
  s_oriented->add_option("--runs", oriented.runs)->capture_default_str();
  s_oriented->add_option("--d", oriented.d)->capture_default_str();
  s_oriented->add_option("--rho", oriented.rho)->capture_default_str();
  s_oriented->add_option("--kappa", oriented.kappa)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "validation", e.what());
    return kExitValidation;
  }

  try {
    if (*s_sample) return cmd_sample(sample, g, out);
    if (*s_clusters) return cmd_clusters(clusters, g, out);
    if (*s_threshold) return cmd_threshold(threshold, g, out);
    if (*s_sweep) return cmd_sweep(sweep, g, out);
    if (*s_gw) return cmd_gw(gw, g, out);
    if (*s_volumes) return cmd_embed_volumes(volumes, g, out);
    if (*s_bounds) return cmd_embed_bounds(bounds, g, out);
    if (*s_gplus) return cmd_embed_gplus(gplus, g, out);
    if (*s_oriented) return cmd_oriented(oriented, g, out);
  } catch (const SizingError& e) {
    write_error(err, "sizing", e.what());
    return kExitSizing;
  } catch (const std::invalid_argument& e) {
    write_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    write_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    write_error(err, "runtime", e.what());
    return kExitRuntime;
  }
  write_error(err, "validation", "no subcommand given");
  return kExitValidation;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace cperc::cli
