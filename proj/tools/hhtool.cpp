// hhtool: classification, closed forms, phase-plane tracing and the
// verification catalog from the command line.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <filesystem>

#include "hh/closedform.hpp"
#include "hh/dynsys.hpp"
#include "hh/exponents.hpp"
#include "hh/io.hpp"
#include "hh/verify.hpp"

using namespace hh;

namespace {

constexpr int kOk = 0, kVerifyFail = 1, kBadInput = 2;

struct ParamFlags {
  std::optional<double> N, p, q;
  std::optional<double> Ncal, pcal, qcal, sigma;
  int eps = 1;
};

void add_params(CLI::App* app, ParamFlags& f) {
  auto* g = app->add_option_group("parameters", "system (N, p, q) xor scalar (Ncal, pcal, qcal, sigma, eps)");
  g->add_option("--N", f.N, "dimension N of the system (dimensionless)");
  g->add_option("--p", f.p, "system exponent p (the larger exponent after ordering)");
  g->add_option("--q", f.q, "system exponent q");
  g->add_option("--Ncal", f.Ncal, "scalar dimension parameter");
  g->add_option("--pcal", f.pcal, "scalar p-Laplacian exponent, > 1");
  g->add_option("--qcal", f.qcal, "scalar power of w, > 0");
  g->add_option("--sigma", f.sigma, "scalar weight exponent of r");
  g->add_option("--eps", f.eps, "sign of the reaction term: 1 source, -1 absorption")
      ->check(CLI::IsMember({-1, 1}))
      ->capture_default_str();
}

struct Resolved {
  std::optional<SystemParams> sys;
  std::optional<ScalarParams> sc;
  bool has_q = true;
};

// `need_q`: whether q (system) or qcal (scalar) must be present.
Resolved resolve(const ParamFlags& f, bool need_q) {
  const bool any_sys = f.N || f.p || f.q;
  const bool any_sc = f.Ncal || f.pcal || f.qcal || f.sigma;
  if (any_sys && any_sc) throw InvalidParams("system flags (--N --p --q) and scalar flags are mutually exclusive");
  if (!any_sys && !any_sc) throw InvalidParams("no parameters: give --N --p [--q] or --Ncal --pcal --sigma [--qcal]");
  Resolved r;
  if (any_sys) {
    if (!f.N || !f.p) throw InvalidParams("system parameters need both --N and --p");
    if (need_q && !f.q) throw InvalidParams("this subcommand needs --q");
    r.has_q = f.q.has_value();
    // Without q only the critical exponents are defined; ordering is moot.
    const double q = f.q.value_or(*f.p);
    r.sys = make_system(*f.N, *f.p, q);
    if (r.sys->low_dimension())
      std::cerr << "warning: N < 3; results outside the classified range N >= 3\n";
    if (r.sys->swapped) std::cerr << "note: p < q given; exchanged so that p >= q\n";
  } else {
    if (!f.Ncal || !f.pcal || !f.sigma) throw InvalidParams("scalar parameters need --Ncal, --pcal and --sigma");
    if (need_q && !f.qcal) throw InvalidParams("this subcommand needs --qcal");
    r.has_q = f.qcal.has_value();
    r.sc = make_scalar(*f.Ncal, *f.pcal, f.qcal.value_or(*f.pcal), *f.sigma, f.eps);
  }
  return r;
}

ScalarParams scalar_of(const Resolved& r, int eps) {
  return r.sc ? *r.sc : to_scalar(*r.sys, eps);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) std::cout << text;
  else write_text(path, text);
}

std::optional<FixedPointKind> parse_kind(const std::string& s) {
  for (auto k : {FixedPointKind::M0, FixedPointKind::N0, FixedPointKind::A0, FixedPointKind::O})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct TraceFlags {
  std::string from;
  std::string dir = "forward";
  int quad = 1;
  std::optional<double> s0, z0;
  double t0 = 0, span = 40, rtol = 1e-10, delta = 1e-6, dt = 0.02;
  std::string out, format = "csv";
};

void add_trace_flags(CLI::App* app, TraceFlags& f, bool profile) {
  app->add_option("--from", f.from, "leave this fixed point along an eigen-direction: M0, N0, A0, O");
  app->add_option("--dir", f.dir, "forward (unstable direction) or backward (stable direction)")
      ->check(CLI::IsMember({"forward", "backward"}))
      ->capture_default_str();
  app->add_option("--quad", f.quad, "quadrant entered by the seed")->check(CLI::Range(1, 4))->capture_default_str();
  app->add_option("--s0", f.s0, "explicit start s (instead of --from)");
  app->add_option("--z0", f.z0, "explicit start z (instead of --from)");
  app->add_option("--t0", f.t0, "start time t = ln r for an explicit start")->capture_default_str();
  app->add_option("--span", f.span, "length of the run in t = ln r")->capture_default_str();
  app->add_option("--rtol", f.rtol, "relative tolerance of the integrator")->capture_default_str();
  app->add_option("--delta", f.delta, "seed offset from the fixed point")->capture_default_str();
  if (profile) app->add_option("--dt", f.dt, "uniform resampling step in t")->capture_default_str();
  app->add_option("--out", f.out, "output file (default stdout)");
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

Trajectory run_trace(const ScalarParams& sp, const TraceFlags& f) {
  const int dir = f.dir == "forward" ? 1 : -1;
  IntegrateOptions o;
  o.rtol = f.rtol;
  o.atol = f.rtol * 1e-2;
  o.stop_on_convergence = false;
  o.max_step = 0.25;
  if (!f.from.empty()) {
    if (f.s0 || f.z0) throw InvalidParams("--from and --s0/--z0 are mutually exclusive");
    const auto kind = parse_kind(f.from);
    if (!kind) throw InvalidParams("unknown fixed point " + f.from);
    const FixedPointInfo fp = fixed_point(sp, *kind);
    for (int k = 0; k < 2; ++k) {
      const auto ev = fp.eigenvalues[k];
      if (std::abs(ev.imag()) > 1e-12 || dir * ev.real() <= 1e-12) continue;
      const PhasePoint x = eigen_seed(fp, k, f.delta, f.quad);
      if (quadrant(x) != f.quad) continue;
      const double t0 = std::log(f.delta) / ev.real();
      return integrate_trajectory(sp, x, t0, t0 + dir * f.span, o);
    }
    throw InvalidParams("no " + std::string(dir > 0 ? "unstable" : "stable") + " eigen-direction of " + f.from +
                        " enters quadrant " + std::to_string(f.quad));
  }
  if (!f.s0 || !f.z0) throw InvalidParams("give --from or both --s0 and --z0");
  return integrate_trajectory(sp, {*f.s0, *f.z0}, f.t0, f.t0 + dir * f.span, o);
}

std::vector<double> uniform(double a, double b, double dt) {
  std::vector<double> t;
  const std::size_t n = std::max<std::size_t>(2, std::size_t((b - a) / dt) + 1);
  for (std::size_t i = 0; i < n; ++i) t.push_back(a + (b - a) * double(i) / double(n - 1));
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial solutions of quasilinear elliptic systems and weighted scalar equations"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  ParamFlags pf;
  std::string format = "text", out;

  auto* ex = app.add_subcommand("exponents", "critical exponents");
  add_params(ex, pf);
  ex->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* cl = app.add_subcommand("classify", "parameter region labels");
  add_params(cl, pf);
  cl->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* fpc = app.add_subcommand("fixed-points", "fixed points of the phase plane with eigen-data (JSON)");
  add_params(fpc, pf);
  fpc->add_option("--out", out, "output file (default stdout)");

  TraceFlags tf;
  auto* tr = app.add_subcommand("trace", "integrate a phase-plane trajectory and export it");
  add_params(tr, pf);
  add_trace_flags(tr, tf, false);

  auto* rc = app.add_subcommand("reconstruct", "trace, then map the trajectory to a radial profile (CSV)");
  add_params(rc, pf);
  add_trace_flags(rc, tf, true);

  std::string family;
  double cval = 1, rmin = 0.01, rmax = 100;
  std::size_t npts = 200;
  std::string branch = "negative";
  auto* cf = app.add_subcommand("closed-form", "evaluate an explicit family on a geometric grid (CSV)");
  add_params(cf, pf);
  cf->add_option("--family", family, "particular, ground-state, absorption (scalar); particular, qstar (system)")
      ->required();
  cf->add_option("--c", cval, "free constant of the family");
  cf->add_option("--branch", branch, "sign of w' for the absorption family")
      ->check(CLI::IsMember({"negative", "positive"}));
  cf->add_option("--rmin", rmin, "smallest radius");
  cf->add_option("--rmax", rmax, "largest radius");
  cf->add_option("--n", npts, "number of grid points");
  cf->add_option("--out", out, "output file (default stdout)");

  VerifyConfig vc;
  std::string config_path;
  std::optional<std::string> filter;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<int> sweep;
  std::string vout = "verify_out";
  auto* vf = app.add_subcommand("verify", "run the scenario catalog; writes report.json and summary.txt");
  vf->add_option("--filter", filter, "glob on scenario ids, comma-separated alternatives (default *)");
  vf->add_option("--config", config_path, "JSON file with tolerances and run options");
  vf->add_option("--seed", seed, "seed of the sampled sweeps (default 20240601)");
  vf->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
  vf->add_option("--sweep-seeds", sweep, "seeds per quadrant in nonexistence sweeps (default 64)");
  vf->add_option("--out", vout, "output directory");
  bool list = false;
  vf->add_flag("--list", list, "print the matching scenario ids and exit");

  std::string report_path;
  auto* rp = app.add_subcommand("report", "summarize the report.json of an earlier verify run");
  rp->add_option("path", report_path, "report.json or the directory holding it")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (ex->parsed()) {
      const Resolved r = resolve(pf, false);
      nlohmann::json j;
      if (r.sys) {
        j = to_json(critical_exponents(*r.sys));
      } else {
        j = to_json(critical_exponents(*r.sc));
        if (!r.has_q) j.erase("gamma");
      }
      if (format == "json") {
        std::cout << j.dump(2) << "\n";
      } else {
        for (auto it = j.begin(); it != j.end(); ++it)
          std::cout << it.key() << " = " << (it->is_null() ? "undefined" : it->dump()) << "\n";
      }
      return kOk;
    }
    if (cl->parsed()) {
      const Resolved r = resolve(pf, false);
      nlohmann::json j;
      if (r.sys) {
        if (!r.has_q) throw InvalidParams("system classification needs --q");
        const SystemRegion reg = classify(*r.sys);
        j = {{"region", to_string(reg)},
             {"coarse", std::string(1, coarse(reg))},
             {"scalar_region", to_string(classify(to_scalar(*r.sys, 1)))}};
      } else {
        j = {{"region", to_string(classify(*r.sc))}};
      }
      if (format == "json") std::cout << j.dump(2) << "\n";
      else std::cout << j["region"].get<std::string>() << "\n";
      return kOk;
    }
    if (fpc->parsed()) {
      const Resolved r = resolve(pf, true);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& f : fixed_points(scalar_of(r, pf.eps))) j.push_back(to_json(f));
      emit(j.dump(2) + "\n", out);
      return kOk;
    }
    if (tr->parsed() || rc->parsed()) {
      const Resolved r = resolve(pf, true);
      const ScalarParams sp = scalar_of(r, pf.eps);
      const Trajectory t = run_trace(sp, tf);
      std::cerr << "stopped: " << to_string(t.reason) << " at t = " << format_double(t.direction > 0 ? t.t_max() : t.t_min())
                << "\n";
      if (tr->parsed()) {
        emit(tf.format == "json" ? trajectory_summary(t).dump(2) + "\n" : to_csv(t).str(), tf.out);
        return kOk;
      }
      const auto samples = t.resample(uniform(t.t_min(), t.t_max(), tf.dt));
      const CsvTable table = r.sys ? to_csv(reconstruct_uprime(*r.sys, samples)) : to_csv(reconstruct_w(sp, samples));
      emit(table.str(), tf.out);
      return kOk;
    }
    if (cf->parsed()) {
      const Resolved r = resolve(pf, family != "qstar");
      if (!(rmin > 0 && rmax > rmin) || npts < 2) throw InvalidParams("need 0 < rmin < rmax and n >= 2");
      const auto grid = log_grid(rmin, rmax, npts);
      const Branch b = branch == "positive" ? Branch::positive : Branch::negative;
      CsvTable table;
      if (r.sys) {
        if (family == "particular") {
          const auto s = system_particular(*r.sys);
          if (!s) throw InvalidParams("no particular solution for these parameters");
          table = to_csv(s->sample(grid));
        } else if (family == "qstar") {
          table = to_csv(system_exact_qstar(*r.sys, cval).sample(grid));
        } else {
          throw InvalidParams("system families: particular, qstar");
        }
      } else {
        if (family == "particular") {
          const auto s = hh_particular(*r.sc);
          if (!s) throw InvalidParams("no particular solution for these parameters");
          table = to_csv(s->sample(grid));
        } else if (family == "ground-state") {
          table = to_csv(hh_ground_state(*r.sc, cval).sample(grid));
        } else if (family == "absorption") {
          const ExplicitAbsorption e = hh_absorption_explicit(*r.sc, cval, b);
          std::vector<double> g;
          for (double x : grid)
            if (e.validity.contains(x)) g.push_back(x);
          if (g.empty()) throw InvalidParams("grid misses the validity interval of the family");
          table = to_csv(e.sample(g));
        } else {
          throw InvalidParams("scalar families: particular, ground-state, absorption");
        }
      }
      emit(table.str(), out);
      return kOk;
    }
    if (vf->parsed()) {
      if (!config_path.empty()) vc = load_config_file(config_path, vc);
      if (filter) vc.filter = *filter;
      if (seed) vc.seed = *seed;
      if (jobs) vc.jobs = *jobs;
      if (sweep) {
        if (*sweep < 1) throw InvalidParams("--sweep-seeds must be positive");
        vc.sweep_seeds = *sweep;
      }
      if (list) {
        for (const auto& s : scenario_catalog())
          if (glob_match(vc.filter, s.id)) std::cout << s.id << "  " << s.description << "\n";
        return kOk;
      }
      vc.output_dir = vout;
      const VerifyReport rep = run_all(vc);
      std::cout << summary_text(rep);
      if (rep.results.empty()) std::cerr << "no scenario matches " << vc.filter << "\n";
      return rep.exit_code() == 0 ? kOk : kVerifyFail;
    }
    if (rp->parsed()) {
      std::string path = report_path;
      if (std::filesystem::is_directory(path)) path += "/report.json";
      std::ifstream f(path);
      if (!f) throw InvalidParams("cannot read " + path);
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidParams(path + " is not valid JSON");
      }
      std::cout << summarize_report_json(j);
      const auto& s = j.value("summary", nlohmann::json::object());
      return s.value("fail", 0) > 0 ? kVerifyFail : kOk;
    }
  } catch (const InvalidParams& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}
