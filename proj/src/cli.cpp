#include "hyperlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "hyperlab/empirical.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/limits.hpp"
#include "hyperlab/packing.hpp"

#ifndef HYPERLAB_GIT_REV
#define HYPERLAB_GIT_REV "unknown"
#endif

namespace hyperlab {

using json = nlohmann::json;

const char* git_revision() { return HYPERLAB_GIT_REV; }

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::logic_error&) {
      throw DomainError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw DomainError("not a number: '" + item + "'");
    v.push_back(x);
  }
  return v;
}

HPoint parse_point(const std::string& text, int n) {
  const std::vector<double> v = parse_list(text);
  if (static_cast<int>(v.size()) != n) throw DomainError("point '" + text + "' needs " + std::to_string(n) + " coordinates");
  if (!(v.back() > 0)) throw DomainError("point '" + text + "' must have positive height");
  return HPoint{std::vector<double>(v.begin(), v.end() - 1), v.back()};
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Everything shared by the subcommand bodies.
struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  GroupSpec spec;
  std::vector<std::string> group_warnings;
  HPoint w, z;
  double delta = 1, theta = 1;
  std::string delta_source = "default";
  EnumOptions enum_opt;

  explicit Context(const RunConfig& c, std::ostream& o) : cfg(c), out(o) {
    if (!cfg.group_file.empty()) {
      LoadedGroup g = load_group_spec(cfg.group_file);
      spec = std::move(g.spec);
      group_warnings = std::move(g.warnings);
    } else {
      spec = builtin_group(cfg.group);
    }
    w = parse_point(cfg.w, spec.n);
    z = cfg.z.empty() ? HPoint::base(spec.n) : parse_point(cfg.z, spec.n);
    if (cfg.delta) {
      delta = *cfg.delta;
      delta_source = "flag";
    } else if (spec.claimed_delta) {
      delta = *spec.claimed_delta;
      delta_source = "group";
    }
    if (!(delta > 0)) throw DomainError("delta must be positive");
    if (cfg.theta) theta = *cfg.theta;
    if (!(theta > 0)) throw DomainError("theta must be positive");
    enum_opt.threads = cfg.threads;
  }

  double s_ball() const { return cfg.s.value_or(0.0); }
  double s_horo() const { return cfg.s.value_or(INFINITY); }
  double s_patterson() const { return cfg.s_param.value_or(delta + 0.1); }

  std::vector<std::string> meta_lines() const {
    std::vector<std::string> m{
        "seed=" + std::to_string(cfg.seed),
        "delta_hat=" + num(delta) + " (" + delta_source + ")",
        "theta_hat=" + num(theta),
        "truncation l_cutoff=" + num(cfg.l_cutoff) + " y_max=" + num(cfg.y_max) + " margin=" + num(cfg.margin) +
            " t_truncate=" + num(cfg.t_truncate) + " r_max=" + std::to_string(cfg.r_max),
        "group=" + (cfg.group_file.empty() ? cfg.group : cfg.group_file) + " w=" + cfg.w +
            " z=" + (cfg.z.empty() ? std::string("base") : cfg.z),
        std::string("git_rev=") + git_revision()};
    for (const auto& gw : group_warnings) m.push_back("warning: " + gw);
    return m;
  }

  json meta_json() const {
    return {{"seed", cfg.seed},
            {"delta_hat", delta},
            {"delta_source", delta_source},
            {"theta_hat", theta},
            {"truncation",
             {{"l_cutoff", cfg.l_cutoff},
              {"y_max", cfg.y_max},
              {"margin", cfg.margin},
              {"t_truncate", cfg.t_truncate},
              {"r_max", cfg.r_max}}},
            {"group", cfg.group_file.empty() ? cfg.group : cfg.group_file},
            {"git_rev", git_revision()}};
  }

  // Writes an artifact to out_dir/name, or to the output stream.
  void emit(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    if (cfg.out_dir.empty()) {
      body(out);
      return;
    }
    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = (std::filesystem::path(cfg.out_dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path);
    body(f);
    out << json{{"artifact", path}}.dump() << "\n";
  }

  void emit_csv(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    emit(name, [&](std::ostream& os) {
      for (const auto& m : meta_lines()) os << "# " << m << "\n";
      body(os);
    });
  }

  void emit_json(const std::string& name, json j) const {
    j["meta"] = meta_json();
    emit(name, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  }

  void emit_curve(const std::string& name, const ScaledDistribution& d, std::vector<std::string> extra = {}) const {
    std::vector<std::string> meta = meta_lines();
    meta.insert(meta.end(), extra.begin(), extra.end());
    emit(name, [&](std::ostream& os) { write_curve_csv(os, d, meta); });
  }

  OrbitSlice ball() const { return enumerate_ball(spec, w, z, cfg.t, s_ball(), enum_opt); }
  OrbitSlice horoball() const { return enumerate_horoball(spec, w, cfg.t, s_horo(), enum_opt); }

  PointCloud cloud() const {
    if (cfg.observer == "interior") return PointCloud::from_directions(project_directions(ball(), z));
    return PointCloud::from_boundary(project_boundary(horoball(), spec.cusp));
  }
};

// ---- subcommand bodies ----

void cmd_orbit(const Context& c) {
  const OrbitSlice slice = c.cfg.mode == "ball" ? c.ball() : c.horoball();
  if (c.cfg.format == "bin") {
    c.emit("orbit.bin", [&](std::ostream& os) { write_orbit_binary(os, slice); });
  } else {
    c.emit_csv("orbit.csv", [&](std::ostream& os) { write_orbit_csv(os, slice); });
  }
}

void cmd_project(const Context& c) {
  if (c.cfg.mode == "ball") {
    const DirectionSet d = project_directions(c.ball(), c.z);
    c.emit_csv("project.csv", [&](std::ostream& os) { write_direction_csv(os, d); });
  } else {
    const BoundarySet b = project_boundary(c.horoball(), c.spec.cusp);
    c.emit_csv("project.csv", [&](std::ostream& os) { write_boundary_csv(os, b); });
  }
}

CountSamples count_samples(const Context& c) {
  CountingSetup setup;
  setup.n = c.spec.n;
  setup.t = c.cfg.t;
  setup.delta = c.delta;
  if (c.cfg.observer == "interior") {
    const DirectionSet d = project_directions(c.ball(), c.z);
    setup.observer = Observer::interior;
    setup.s = c.s_ball();
    setup.N = d.size();
    setup.sigma = {c.cfg.sigma};
    return sample_counts(d, setup, default_interior_sampler(c.spec.n), c.cfg.samples, c.cfg.seed, c.cfg.threads);
  }
  const BoundarySet b = project_boundary(c.horoball(), c.spec.cusp);
  setup.observer = Observer::boundary;
  setup.s = c.s_horo();
  setup.N = b.size();
  setup.box_lo = {c.cfg.box_lo};
  setup.box_hi = {c.cfg.box_hi};
  return sample_counts(b, setup, default_boundary_sampler(c.spec.n, b.lattice), c.cfg.samples, c.cfg.seed,
                       c.cfg.threads);
}

void cmd_stats(const Context& c, const std::string& which) {
  const std::vector<double> grid = parse_grid(c.cfg.grid);
  if (which == "gaps") {
    if (c.spec.n != 2) throw DomainError("gap statistics need n = 2");
    const DirectionSet d = project_directions(c.ball(), c.z);
    c.emit_curve("stats_gaps.csv", gap_cdf(gap_statistics(d), grid));
  } else if (which == "nn") {
    c.emit_curve("stats_nn.csv", nearest_neighbor_cdf(c.cloud(), grid, c.cfg.t));
  } else if (which == "pair") {
    const PointCloud cloud = c.cloud();
    if (cloud.size() == 0) throw DomainError("pair correlation needs a nonempty point set");
    const double c0 = c.cfg.c0.value_or(std::exp(c.delta * c.cfg.t) / cloud.size());
    c.emit_curve("stats_pair.csv", pair_correlation(cloud, grid, c.cfg.t, c.delta, c0), {"c0=" + num(c0)});
  } else if (which == "count") {
    c.emit_curve("stats_count.csv", counting_distribution(count_samples(c), 0, c.cfg.r_max));
  } else {  // moments
    const CountSamples cs = count_samples(c);
    ScaledDistribution d;
    d.kind = StatKind::moment;
    d.t = cs.t;
    d.s = cs.s;
    d.sample_count = cs.size();
    d.scale_applied = true;
    d.scale_factor = cs.scale_factor;
    for (double b : c.cfg.beta) {
      const Estimate e = moment_estimate(cs, {b});
      d.abscissae.push_back(b);
      d.values.push_back(e.value);
      d.stderr_.push_back(e.stderr_);
      d.warnings.insert(d.warnings.end(), e.warnings.begin(), e.warnings.end());
    }
    c.emit_curve("stats_moments.csv", d);
  }
}

FitReport fit_counts(const Context& c) {
  if (!(c.cfg.t_min < c.cfg.t_max) || !(c.cfg.step > 0)) throw DomainError("fit needs t_min < t_max and step > 0");
  const OrbitSlice s = enumerate_ball(c.spec, c.w, c.z, c.cfg.t_max + 1e-9, 0.0, c.enum_opt);
  std::vector<double> d;
  for (const auto& p : s.points) d.push_back(p.displacement);
  std::sort(d.begin(), d.end());
  std::vector<std::pair<double, double>> counts;
  const int steps = static_cast<int>(std::floor((c.cfg.t_max - c.cfg.t_min) / c.cfg.step + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double t = c.cfg.t_min + k * c.cfg.step;
    counts.emplace_back(t, static_cast<double>(std::lower_bound(d.begin(), d.end(), t) - d.begin()));
  }
  FitReport r = fit_delta(counts);
  if (!s.complete) throw DomainError("orbit enumeration hit its budget; the fit would be biased");
  return r;
}

json fit_json(const FitReport& r) {
  std::ostringstream os;
  write_fit_json(os, r);
  return json::parse(os.str());
}

void cmd_fit(Context& c, const std::string& which) {
  FitReport r = fit_counts(c);
  if (which == "delta") {
    c.delta = r.delta_hat;
    c.delta_source = "fit";
    c.emit_json("fit_delta.json", fit_json(r));
    return;
  }
  const AtomicMeasure nu = patterson_atoms(c.spec, c.w, c.cfg.s_param.value_or(r.delta_hat + 0.1), c.cfg.t_truncate,
                                           Observer::interior, r.delta_hat, c.enum_opt);
  r.theta_hat = fit_theta(r, nu, MeasureSet::full_set());
  c.delta = r.delta_hat;
  c.delta_source = "fit";
  c.theta = r.theta_hat;
  c.emit_json("fit_theta.json", fit_json(r));
}

void cmd_nu(const Context& c) {
  const Observer obs = c.cfg.observer == "interior" ? Observer::interior : Observer::boundary;
  const AtomicMeasure m = patterson_atoms(c.spec, c.w, c.s_patterson(), c.cfg.t_truncate, obs, c.delta, c.enum_opt);
  c.emit_csv("nu.csv", [&](std::ostream& os) { write_measure_csv(os, m); });
}

void cmd_limit(const Context& c, const std::string& which) {
  if (c.spec.n != 2) throw DomainError("limit curves are implemented for n = 2");
  const std::vector<double> grid = parse_grid(c.cfg.grid);
  LimitOptions opt;
  opt.delta_hat = c.delta;
  opt.theta_hat = c.theta;
  opt.y_max = c.cfg.y_max;
  opt.l_cutoff = c.cfg.l_cutoff;
  opt.margin = c.cfg.margin;
  opt.threads = c.cfg.threads;
  if (opt.y_max > opt.l_cutoff - opt.margin) throw DomainError("y_max must not exceed l_cutoff - margin");
  const std::vector<GammaDatum> data = gamma_data(c.spec, c.w, c.cfg.l_cutoff, c.enum_opt);
  ObserverNodes nu;
  if (c.cfg.nu_source == "lattice") {
    nu = lattice_observer(c.cfg.nodes);
  } else if (c.cfg.nu_source == "shell") {
    nu = observer_shell(c.spec, c.w, c.cfg.shell_inner, c.cfg.shell_outer, c.enum_opt);
  } else {
    nu = observer_from_measure(observer_measure(c.spec, c.w, c.s_patterson(), c.cfg.t_truncate, c.enum_opt));
  }
  LimitCurve curve;
  if (which == "gaps") curve = gap_limit_cdf(data, nu, grid, opt);
  else if (which == "gapdensity") curve = gap_limit_density_curve(data, nu, grid, opt);
  else if (which == "nn") curve = nearest_neighbor_limit(data, nu, grid, opt);
  else curve = pair_correlation_limit(data, nu, grid, opt, c.cfg.calibrate_xi, c.cfg.calibrate_value);
  ScaledDistribution d = curve.to_distribution();
  d.t = INFINITY;
  d.s = INFINITY;
  d.sample_count = nu.alpha.size();
  c.emit_curve("limit_" + which + ".csv", d,
               {"observer=" + c.cfg.nu_source + " data=" + std::to_string(data.size()),
                "prefactor=" + num(curve.prefactor) + " tail_fraction=" + num(curve.tail_fraction)});
}

void cmd_packing(Context& c, const std::string& which) {
  PackingStats st;
  const std::vector<Circle> circles = generate_apollonian(apollonian_root_circles(), c.cfg.bound, 1e-9, &st);
  if (which == "gen") {
    c.emit_csv("packing.csv", [&](std::ostream& os) { write_packing_csv(os, circles); });
    return;
  }
  const bool window = c.cfg.range.size() == 2;
  const FitReport f = window ? packing_count_fit(circles, c.cfg.range[0], c.cfg.range[1])
                             : packing_count_fit(circles);
  c.delta = f.delta_hat;
  c.delta_source = "fit";
  c.emit_json("packing_stats.json", {{"circles", circles.size()},
                                     {"curvature_bound", c.cfg.bound},
                                     {"duplicates", st.duplicates},
                                     {"worst_descartes", st.worst_descartes},
                                     {"worst_tangency", st.worst_tangency},
                                     {"fit", fit_json(f)}});
}

CurveTable read_curve_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read " + path);
  return read_curve_csv(f);
}

void cmd_compare(const Context& c) {
  const CurveTable a = read_curve_file(c.cfg.files.at(0)), b = read_curve_file(c.cfg.files.at(1));
  const double lo = c.cfg.range.size() == 2 ? c.cfg.range[0] : -INFINITY;
  const double hi = c.cfg.range.size() == 2 ? c.cfg.range[1] : INFINITY;
  const Comparison cmp = compare_curves(a, b, lo, hi);
  json pts = json::array();
  for (std::size_t i = 0; i < cmp.abscissae.size(); ++i)
    pts.push_back({{"abscissa", cmp.abscissae[i]}, {"a", cmp.a[i]}, {"b", cmp.b[i]}, {"delta", cmp.delta[i]}});
  json j = {{"sup_norm", cmp.sup_norm}, {"points", pts}, {"files", c.cfg.files}};
  if (c.cfg.range.size() == 2) j["range"] = c.cfg.range;
  c.emit_json("compare.json", j);
}

// ---- argument wiring ----

void add_common(CLI::App& app, RunConfig& cfg) {
  app.add_option("--group", cfg.group, "builtin group: psl2z, hecke<q>, schottky, apollonian")->capture_default_str();
  app.add_option("--group-file", cfg.group_file, "group spec file (JSON), overrides --group");
  app.add_option("--w", cfg.w, "orbit base point: x coordinates then height, comma separated")->capture_default_str();
  app.add_option("--z", cfg.z, "observer point (default: the base point)");
  app.add_option("--t", cfg.t, "counting horizon")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option_function<double>("--s", [&cfg](const double& v) { cfg.s = v; },
                                  "ball: inner radius (default 0); horoball: window width (default inf)");
  app.add_option_function<double>("--delta", [&cfg](const double& v) { cfg.delta = v; },
                                  "critical exponent estimate (default: the group's value, else 1)");
  app.add_option_function<double>("--theta", [&cfg](const double& v) { cfg.theta = v; }, "width constant (default 1)");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads, 0 for all cores")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", cfg.out_dir, "write artifacts here instead of standard output");
}

void add_grid(CLI::App* app, RunConfig& cfg) {
  app->add_option("--grid", cfg.grid, "abscissae: a:b:n or a comma list")->capture_default_str();
}

void add_truncation(CLI::App* app, RunConfig& cfg) {
  app->add_option("--l-cutoff", cfg.l_cutoff, "orbit data radius around w")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--y-max", cfg.y_max, "depth range of the typical point")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--margin", cfg.margin, "required gap l_cutoff - y_max")->capture_default_str()->check(CLI::NonNegativeNumber);
}

void add_patterson(CLI::App* app, RunConfig& cfg) {
  app->add_option_function<double>("--s-param", [&cfg](const double& v) { cfg.s_param = v; },
                                   "Poincare series exponent (default delta + 0.1)");
  app->add_option("--t-truncate", cfg.t_truncate, "orbit radius of the Patterson approximant")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_counting(CLI::App* app, RunConfig& cfg) {
  app->add_option("--observer", cfg.observer, "interior (directions from z) or boundary (horoball)")
      ->capture_default_str()
      ->check(CLI::IsMember({"interior", "boundary"}));
  app->add_option("--samples", cfg.samples, "Monte-Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--box-lo", cfg.box_lo, "boundary observer: lower corner of A")->delimiter(',')->capture_default_str();
  app->add_option("--box-hi", cfg.box_hi, "boundary observer: upper corner of A")->delimiter(',')->capture_default_str();
  app->add_option("--sigma", cfg.sigma, "interior observer: disk parameter")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--r-max", cfg.r_max, "largest count tabulated")->capture_default_str()->check(CLI::NonNegativeNumber);
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    std::vector<double> v = parse_list(text);
    if (v.empty()) throw DomainError("empty grid");
    return v;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw DomainError("grid '" + text + "' must be a:b:n");
  const double a = parse_list(text.substr(0, c1)).at(0), b = parse_list(text.substr(c1 + 1, c2 - c1 - 1)).at(0);
  const double nd = parse_list(text.substr(c2 + 1)).at(0);
  const int n = static_cast<int>(nd);
  if (n < 1 || n != nd) throw DomainError("grid point count must be a positive integer");
  if (n == 1) return {a};
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  return v;
}

CurveTable read_curve_csv(std::istream& is) {
  CurveTable t;
  std::string line;
  int ix = -1, iv = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (ix < 0) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (cells[k] == "abscissa") ix = static_cast<int>(k);
        if (cells[k] == "value") iv = static_cast<int>(k);
      }
      if (ix < 0 || iv < 0) throw DomainError("curve table needs abscissa and value columns");
      continue;
    }
    if (static_cast<int>(cells.size()) <= std::max(ix, iv)) throw DomainError("short row in curve table: " + line);
    t.abscissae.push_back(parse_list(cells[ix]).at(0));
    t.values.push_back(parse_list(cells[iv]).at(0));
  }
  if (ix < 0) throw DomainError("curve table has no header");
  return t;
}

Comparison compare_curves(const CurveTable& a, const CurveTable& b, double lo, double hi) {
  if (b.abscissae.empty()) throw DomainError("comparison against an empty curve");
  std::vector<std::size_t> order(b.abscissae.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return b.abscissae[i] < b.abscissae[j]; });
  std::vector<double> bx, bv;
  for (std::size_t k : order) {
    bx.push_back(b.abscissae[k]);
    bv.push_back(b.values[k]);
  }
  Comparison c;
  for (std::size_t i = 0; i < a.abscissae.size(); ++i) {
    const double x = a.abscissae[i];
    if (x < lo || x > hi || x < bx.front() || x > bx.back()) continue;
    const auto it = std::lower_bound(bx.begin(), bx.end(), x);
    const std::size_t k = it - bx.begin();
    double v;
    if (bx[k] == x) {
      v = bv[k];
    } else {
      const double u = (x - bx[k - 1]) / (bx[k] - bx[k - 1]);
      v = (1 - u) * bv[k - 1] + u * bv[k];
    }
    c.abscissae.push_back(x);
    c.a.push_back(a.values[i]);
    c.b.push_back(v);
    c.delta.push_back(a.values[i] - v);
    c.sup_norm = std::max(c.sup_norm, std::abs(a.values[i] - v));
  }
  if (c.abscissae.empty()) throw DomainError("the curves share no abscissae in the requested range");
  return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Orbit statistics of discrete hyperbolic groups: enumeration, empirical and limit curves."};
  app.name("hyperlab");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "read flags from a TOML file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  std::string save_config;
  app.add_option("--save-config", save_config, "write the effective flags to a TOML file")->configurable(false);
  add_common(app, cfg);

  auto* orbit = app.add_subcommand("orbit", "enumerate orbit points and dump them");
  orbit->add_option("--mode", cfg.mode, "ball or horoball")->capture_default_str()->check(CLI::IsMember({"ball", "horoball"}));
  orbit->add_option("--format", cfg.format, "csv or bin")->capture_default_str()->check(CLI::IsMember({"csv", "bin"}));

  auto* project = app.add_subcommand("project", "directions (ball) or boundary points (horoball) of the orbit");
  project->add_option("--mode", cfg.mode, "ball or horoball")->capture_default_str()->check(CLI::IsMember({"ball", "horoball"}));

  auto* stats = app.add_subcommand("stats", "empirical curves at finite t");
  stats->require_subcommand(1);
  std::map<std::string, CLI::App*> stat_cmds;
  stat_cmds["gaps"] = stats->add_subcommand("gaps", "F_t(L), fraction of scaled gaps >= L (n = 2, directions from z)");
  stat_cmds["nn"] = stats->add_subcommand("nn", "J_t(L), nearest-neighbour distribution");
  stat_cmds["pair"] = stats->add_subcommand("pair", "R2_t(xi), pair correlation");
  stat_cmds["count"] = stats->add_subcommand("count", "distribution of the number of points in a shrinking set");
  stat_cmds["moments"] = stats->add_subcommand("moments", "moments of that count, one per --beta");
  for (auto& [name, cmd] : stat_cmds) {
    if (name == "count" || name == "moments") {
      add_counting(cmd, cfg);
    } else {
      add_grid(cmd, cfg);
      if (name != "gaps")
        cmd->add_option("--observer", cfg.observer, "interior or boundary")
            ->capture_default_str()
            ->check(CLI::IsMember({"interior", "boundary"}));
    }
  }
  stat_cmds["pair"]->add_option_function<double>("--c0", [&cfg](const double& v) { cfg.c0 = v; },
                                                 "normalization (default e^{delta t} / N)");
  stat_cmds["moments"]->add_option("--beta", cfg.beta, "moment orders")->delimiter(',')->capture_default_str();

  auto* fit = app.add_subcommand("fit", "growth exponent and width constant");
  fit->require_subcommand(1);
  auto* fit_delta_cmd = fit->add_subcommand("delta", "least-squares slope of log #{d(gamma w, z) < t}");
  auto* fit_theta_cmd = fit->add_subcommand("theta", "counting constant over the Patterson mass");
  for (auto* cmd : {fit_delta_cmd, fit_theta_cmd}) {
    cmd->add_option("--t-min", cfg.t_min, "fit window start")->capture_default_str();
    cmd->add_option("--t-max", cfg.t_max, "fit window end")->capture_default_str();
    cmd->add_option("--step", cfg.step, "sample spacing in t")->capture_default_str()->check(CLI::PositiveNumber);
  }
  add_patterson(fit_theta_cmd, cfg);

  auto* nu = app.add_subcommand("nu", "Patterson approximant atoms");
  nu->add_option("--observer", cfg.observer, "interior or boundary")
      ->capture_default_str()
      ->check(CLI::IsMember({"interior", "boundary"}));
  add_patterson(nu, cfg);

  auto* limit = app.add_subcommand("limit", "limit curves from the orbit data around w (n = 2)");
  limit->require_subcommand(1);
  std::map<std::string, CLI::App*> limit_cmds;
  limit_cmds["gaps"] = limit->add_subcommand("gaps", "F(L)");
  limit_cmds["gapdensity"] = limit->add_subcommand("gapdensity", "P(L) = -F'(L)");
  limit_cmds["nn"] = limit->add_subcommand("nn", "J(L)");
  limit_cmds["pair"] = limit->add_subcommand("pair", "R2(xi)");
  for (auto& [name, cmd] : limit_cmds) {
    add_grid(cmd, cfg);
    add_truncation(cmd, cfg);
    add_patterson(cmd, cfg);
    cmd->add_option("--nu", cfg.nu_source, "observer distribution: lattice, shell or patterson")
        ->capture_default_str()
        ->check(CLI::IsMember({"lattice", "shell", "patterson"}));
    cmd->add_option("--nodes", cfg.nodes, "lattice: number of uniform directions")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--shell-inner", cfg.shell_inner, "shell: inner radius")->capture_default_str();
    cmd->add_option("--shell-outer", cfg.shell_outer, "shell: outer radius")->capture_default_str();
  }
  limit_cmds["pair"]->add_option("--calibrate-xi", cfg.calibrate_xi, "scale the curve to --calibrate-value here")->capture_default_str();
  limit_cmds["pair"]->add_option("--calibrate-value", cfg.calibrate_value, "calibration target")->capture_default_str();

  auto* packing = app.add_subcommand("packing", "Apollonian packing from the (-1, 2, 2, 3) root");
  packing->require_subcommand(1);
  auto* pgen = packing->add_subcommand("gen", "all circles up to a curvature bound");
  auto* pstats = packing->add_subcommand("stats", "invariant defects and the count exponent");
  for (auto* cmd : {pgen, pstats})
    cmd->add_option("--bound", cfg.bound, "curvature bound")->capture_default_str()->check(CLI::PositiveNumber);
  pstats->add_option("--range", cfg.range, "fit window t_lo,t_hi in log curvature")->delimiter(',')->expected(2);

  auto* compare = app.add_subcommand("compare", "sup-norm and pointwise deltas of two curve CSVs");
  compare->add_option("files", cfg.files, "empirical.csv limit.csv")->required()->expected(2)->check(CLI::ExistingFile);
  compare->add_option("--range", cfg.range, "restrict to lo,hi")->delimiter(',')->expected(2);

  // a config file may select the subcommands as well
  std::function<void(CLI::App*)> make_configurable = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands({})) {
      sub->configurable();
      make_configurable(sub);
    }
  };
  make_configurable(&app);

  const auto error_json = [&](const std::string& kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << "\n";
    return code;
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream sink;
    app.exit(e, out, sink);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream sink;
    app.exit(e, out, sink);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << git_revision() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    return error_json("usage", e.what(), 2);
  }

  // the chain of selected subcommands
  for (const CLI::App* a = &app; !a->get_subcommands().empty();) {
    a = a->get_subcommands().front();
    cfg.command.push_back(a->get_name());
  }

  try {
    if (!save_config.empty()) {
      std::ofstream f(save_config);
      if (!f) throw DomainError("cannot write " + save_config);
      f << app.config_to_str(false, false);
    }
    Context ctx(cfg, out);
    const std::string& top = cfg.command.at(0);
    const std::string sub = cfg.command.size() > 1 ? cfg.command[1] : "";
    if (top == "orbit") cmd_orbit(ctx);
    else if (top == "project") cmd_project(ctx);
    else if (top == "stats") cmd_stats(ctx, sub);
    else if (top == "fit") cmd_fit(ctx, sub);
    else if (top == "nu") cmd_nu(ctx);
    else if (top == "limit") cmd_limit(ctx, sub);
    else if (top == "packing") cmd_packing(ctx, sub);
    else cmd_compare(ctx);
  } catch (const DomainError& e) {
    return error_json("domain", e.what(), 1);
  } catch (const std::exception& e) {
    return error_json("domain", e.what(), 1);
  }
  return 0;
}

}  // namespace hyperlab
