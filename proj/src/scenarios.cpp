#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>

#include "hh/closedform.hpp"
#include "hh/dynsys.hpp"
#include "hh/exponents.hpp"
#include "hh/radial.hpp"
#include "hh/ratefit.hpp"
#include "hh/residual.hpp"
#include "hh/verify.hpp"

namespace hh {

namespace {

using FK = FixedPointKind;
using BL = BehaviorLabel;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSeedDelta = 1e-10;
constexpr double kLogSpan = 1e5;  // |t| reached by runs along centre manifolds

double gamma_of(const ScalarParams& s) { return (s.p + s.sigma) / (s.q + 1 - s.p); }
double harmonic_rate(const ScalarParams& s) { return (s.N - s.p) / (s.p - 1); }
double origin_rate(const ScalarParams& s) { return (s.N - 1) / (s.p - 1); }
double sigma_rate(const ScalarParams& s) { return (s.sigma + 1) / (s.p - 1); }

std::string num(double x) { return format_double(x); }

// Derivatives may underflow to a signed zero far out; the sign bit survives.
int sign_of(double x) { return std::signbit(x) ? -1 : 1; }

// ---------------------------------------------------------------- guards

void guard_region(Context& c, const ScalarParams& s, ScalarRegion want) {
  const ScalarRegion got = classify(s);
  if (!c.expect_true("region is " + to_string(want), got == want, "classified " + to_string(got)))
    throw std::runtime_error("parameters left the intended region");
}

void guard_region(Context& c, const SystemParams& s, SystemRegion want) {
  const SystemRegion got = classify(s);
  if (!c.expect_true("region is " + to_string(want), got == want, "classified " + to_string(got)))
    throw std::runtime_error("parameters left the intended region");
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Consecutive gaps of the defining chain, e.g. N > p > -sigma.
void guard_margin(Context& c, std::initializer_list<double> chain) {
  double worst = kInf;
  for (auto it = chain.begin(); it + 1 != chain.end(); ++it) worst = std::min(worst, rel_gap(*it, *(it + 1)));
  c.expect_true("region margin >= 5%", worst >= 0.05, "smallest relative gap " + num(worst));
}

void guard_q_margin(Context& c, double q, std::initializer_list<std::optional<double>> curves) {
  double worst = kInf;
  for (const auto& x : curves)
    if (x) worst = std::min(worst, rel_gap(q, *x));
  c.expect_true("q margin >= 5%", worst >= 0.05, "smallest relative gap " + num(worst));
}

void guard_system_margin(Context& c, const SystemParams& s) {
  const SystemExponents e = critical_exponents(s);
  guard_q_margin(c, s.q, {e.q1, e.q2, e.q3, e.q4, e.qstar, e.n_ratio});
  c.expect_true("p margin >= 5%", rel_gap(s.p, e.n_ratio) >= 0.05);
}

// ------------------------------------------------------- phase-plane runs

IntegrateOptions leg_options(bool long_run) {
  IntegrateOptions o;
  o.stop_on_convergence = false;
  o.rtol = 1e-11;
  o.atol = 1e-13;
  o.max_step = long_run ? kInf : 0.25;
  return o;
}

int pick_eigen(const FixedPointInfo& fp, int dir) {
  int found = -1;
  for (int k = 0; k < 2; ++k) {
    const auto ev = fp.eigenvalues[k];
    if (std::abs(ev.imag()) > 1e-12 || dir * ev.real() <= 1e-12) continue;
    if (found >= 0) throw InvalidParams(to_string(fp.kind) + " is a node; seed direction ambiguous");
    found = k;
  }
  if (found < 0)
    throw InvalidParams(to_string(fp.kind) + " has no " + (dir > 0 ? "unstable" : "stable") +
                        " real direction");
  return found;
}

void keep_range(Trajectory& tr, std::size_t lo, std::size_t hi) {
  auto cut = [&](auto& v) { v = std::vector(v.begin() + lo, v.begin() + hi); };
  cut(tr.samples);
  cut(tr.y);
  cut(tr.dy);
}

// Drops the part of the run beyond the closest approach to `target`.
double truncate_at_closest(Trajectory& tr, PhasePoint target, int dir) {
  std::size_t best = 0;
  double d = kInf;
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const double di = std::hypot(tr.samples[i].s - target.s, tr.samples[i].z - target.z);
    if (di < d) {
      d = di;
      best = i;
    }
  }
  if (dir > 0) keep_range(tr, 0, best + 1);
  else keep_range(tr, best, tr.samples.size());
  return d;
}

struct LegSpec {
  FK from = FK::N0;
  int dir = 1;   // +1: leaves `from` forward in t; -1: leaves it backward
  int quad = 1;  // quadrant holding the orbit
  std::optional<FK> to;
  double t_end = 100;  // the run stops at t = dir * t_end
  bool long_run = false;
};

struct Leg {
  Trajectory tr;
  double dist = kNaN;  // closest approach to the target
};

Leg run_leg(Context& c, const ScalarParams& sp, const LegSpec& L) {
  const FixedPointInfo fp = fixed_point(sp, L.from);
  const int k = pick_eigen(fp, L.dir);
  const double lam = fp.eigenvalues[k].real();
  const double t0 = std::log(kSeedDelta) / lam;
  std::vector<PhasePoint> seeds;
  if (fp.quadrant == 0) {
    seeds.push_back(eigen_seed(fp, k, kSeedDelta, L.quad));
  } else {
    const double vs = fp.eigenvectors[k][0].real(), vz = fp.eigenvectors[k][1].real();
    seeds.push_back({fp.pos.s + kSeedDelta * vs, fp.pos.z + kSeedDelta * vz});
    seeds.push_back({fp.pos.s - kSeedDelta * vs, fp.pos.z - kSeedDelta * vz});
  }
  std::optional<Leg> best;
  for (const PhasePoint& x : seeds) {
    if (quadrant(x) != L.quad) continue;
    Leg leg;
    if (L.dir * (L.dir * L.t_end - t0) < 10) throw InvalidParams("seed time too close to the end of the run");
    leg.tr = integrate_trajectory(sp, x, t0, L.dir * L.t_end, leg_options(L.long_run));
    if (L.to) leg.dist = truncate_at_closest(leg.tr, fixed_point(sp, *L.to).pos, L.dir);
    if (!best || (L.to && leg.dist < best->dist)) best = std::move(leg);
  }
  if (!best) throw InvalidParams("no eigen-direction of " + to_string(L.from) + " enters Q" +
                                 std::to_string(L.quad));
  c.diag("leg from " + to_string(L.from) + (L.dir > 0 ? " forward" : " backward") + " in Q" +
         std::to_string(L.quad) + ", eigenvalue " + num(lam) + ", stop " +
         to_string(best->tr.reason));
  if (best->tr.samples.size() < 10) throw InvalidParams("leg holds too few samples");
  if (L.to) {
    c.expect_lt("distance to " + to_string(*L.to), best->dist, c.tol().fixed_point);
  }
  return *best;
}

Trajectory free_run(const ScalarParams& sp, PhasePoint start, int dir, double T, double t0 = 0) {
  return integrate_trajectory(sp, start, t0, dir * T, leg_options(true));
}

// Uniform in t near the origin of time, geometric in |t| beyond +-200.
std::vector<double> sample_times(const Trajectory& tr, double dt = 0.02) {
  const double a = tr.t_min(), b = tr.t_max();
  std::vector<double> t;
  const double lo = std::max(a, -200.0), hi = std::min(b, 200.0);
  if (a < lo) {
    for (double x : log_grid(-lo, -a, 3000))
      if (x > -lo) t.push_back(-x);
  }
  const std::size_t n = std::max<std::size_t>(2, std::size_t((hi - lo) / dt) + 1);
  for (std::size_t i = 0; i < n; ++i) t.push_back(lo + (hi - lo) * double(i) / double(n - 1));
  if (b > hi)
    for (double x : log_grid(hi, b, 3000))
      if (x > hi) t.push_back(x);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

ProfileSamples scalar_profile(const ScalarParams& sp, const Trajectory& tr) {
  return reconstruct_w(sp, tr.resample(sample_times(tr)));
}

SystemProfileSamples system_profile(const SystemParams& sy, const Trajectory& tr) {
  return reconstruct_uprime(sy, tr.resample(sample_times(tr)));
}

CsvTable thin(const CsvTable& t, std::size_t max_rows = 1500) {
  const std::size_t n = t.columns.empty() ? 0 : t.columns.front().size();
  if (n <= max_rows) return t;
  CsvTable out;
  out.header = t.header;
  out.columns.assign(t.columns.size(), {});
  const std::size_t step = (n + max_rows - 1) / max_rows;
  for (std::size_t i = 0; i < n; i += step)
    for (std::size_t j = 0; j < t.columns.size(); ++j) out.columns[j].push_back(t.columns[j][i]);
  return out;
}

// -------------------------------------------------------------- rate checks

FitWindow power_window() {
  FitWindow w;
  w.beta_gain = kInf;
  return w;
}

RateFit power_fit(const std::vector<double>& t, const std::vector<double>& y, Endpoint end) {
  return rate_fit_log(t, y, end, power_window());
}

const char* end_name(Endpoint e) { return e == Endpoint::zero ? "0" : "inf"; }

void check_rate(Context& c, const std::string& name, const RateFit& f, double expected) {
  c.expect_rel(name, f.alpha, expected, c.tol().exponent);
}

bool has_label(const BehaviorReport& b, BL want) {
  return b.label == want ||
         std::find(b.also_matches.begin(), b.also_matches.end(), want) != b.also_matches.end();
}

void check_scalar_end(Context& c, const ScalarParams& sp, const ProfileSamples& prof, Endpoint end,
                      BL want) {
  ClassifyOptions o;
  o.rel_tol = c.tol().exponent;
  o.window = power_window();
  const BehaviorReport b = classify_behavior(sp, prof, end, o);
  const std::string at = std::string("at ") + end_name(end) + ": ";
  c.expect_true(at + "label " + to_string(want), has_label(b, want), "classified " + to_string(b.label));
  switch (want) {
    case BL::particular_like: check_rate(c, at + "exponent of w", b.fit_w, -gamma_of(sp)); break;
    case BL::harmonic_decay: check_rate(c, at + "exponent of w", b.fit_w, -harmonic_rate(sp)); break;
    case BL::const_plus_sigma_power:
      check_rate(c, at + "exponent of w", b.fit_w, 0);
      check_rate(c, at + "exponent of w'", b.fit_wp, sigma_rate(sp));
      break;
    case BL::const_plus_harmonic_power:
      check_rate(c, at + "exponent of w", b.fit_w, 0);
      check_rate(c, at + "exponent of w'", b.fit_wp, -origin_rate(sp));
      break;
    default: break;
  }
}

RateFit log_fit(const std::vector<double>& t, const std::vector<double>& y, Endpoint end,
                double T = kLogSpan) {
  FitWindow w;
  if (end == Endpoint::infinity) {
    w.t_lo = T / 10;
    w.t_hi = T;
  } else {
    w.t_lo = -T;
    w.t_hi = -T / 10;
  }
  return rate_fit_log(t, y, end, w);
}

void check_log_law(Context& c, const std::string& name, const RateFit& f, double alpha,
                   double beta) {
  c.expect_true(name + ": log correction detected", f.beta_fitted && f.beta != 0,
                "rms power " + num(f.rms_power) + ", rms log " + num(f.rms));
  c.expect_rel(name + ": log exponent", f.beta_fitted ? f.beta : 0.0, beta, c.tol().log_exponent);
  c.expect_rel(name + ": power exponent", f.alpha, alpha, c.tol().exponent);
}

// Sup over [-H/2, H/2] against the sup over [-H, H], both clipped to the run,
// with H the largest |ln r| reached. Seeds are placed so that the crossover
// sits near t = 0. A bounded quantity gains nothing from the doubling.
void check_window_stable(Context& c, const std::string& name,
                         const std::function<double(double, double)>& sup, double ta, double tb) {
  if (ta > tb) std::swap(ta, tb);
  const double H = std::max(std::abs(ta), std::abs(tb));
  const double lo = std::max(ta, -H / 2), hi = std::min(tb, H / 2);
  const double a = lo < hi ? sup(lo, hi) : 0.0;
  const double b = sup(ta, tb);
  c.info(name + " window ln r", H, "half window [" + num(lo) + ", " + num(hi) + "]");
  c.expect_true(name + " finite", std::isfinite(a) && std::isfinite(b) && b > 0);
  c.expect_lt(name + " gain when the window doubles", std::abs(b - a) / b,
              c.tol().window_stability);
}

// ------------------------------------------------------------ nonexistence

struct SweepStats {
  int total = 0, escaped = 0;
};

// Random seeds log-uniform in |s|, |z| within [1e-3, 1e3].
SweepStats escape_sweep(Context& c, const ScalarParams& sp, int quad, int dir, double T,
                        const std::function<bool(const Trajectory&)>& allowed = {}) {
  std::uniform_real_distribution<double> U(-3, 3);
  const double ss = (quad == 1 || quad == 4) ? 1 : -1, sz = quad <= 2 ? 1 : -1;
  SweepStats st;
  IntegrateOptions o = leg_options(true);
  o.rtol = 1e-9;
  o.atol = 1e-11;
  for (int i = 0; i < c.sweep_seeds(); ++i) {
    const PhasePoint x{ss * std::pow(10.0, U(c.rng())), sz * std::pow(10.0, U(c.rng()))};
    const Trajectory tr = integrate_trajectory(sp, x, 0, dir * T, o);
    ++st.total;
    const bool esc = tr.reason == Termination::blow_up || tr.reason == Termination::step_underflow;
    if (esc || (allowed && allowed(tr))) ++st.escaped;
    else if (st.total - st.escaped <= 3)
      c.diag("seed (" + num(x.s) + ", " + num(x.z) + ") ended with " + to_string(tr.reason));
  }
  return st;
}

void nonexistence(Context& c, const ScalarParams& sp, std::initializer_list<int> quads,
                  std::initializer_list<int> dirs, double T = 100) {
  c.sampled_evidence();
  for (int dir : dirs)
    for (int q : quads) {
      const SweepStats st = escape_sweep(c, sp, q, dir, T);
      const std::string tag = "Q" + std::to_string(q) + (dir > 0 ? " forward" : " backward");
      c.info(tag + " seeds", st.total);
      c.expect_true(tag + ": every seed escapes in finite t", st.escaped == st.total,
                    std::to_string(st.total - st.escaped) + " seeds stayed bounded");
    }
}

// ------------------------------------------------ scalar connecting orbits

struct ScalarConnection {
  ScalarParams sp;
  ScalarRegion region;
  LegSpec leg;
  BL at_zero = BL::unclassified, at_inf = BL::unclassified;
  bool global = true;
};

struct ConnectionRun {
  Leg leg;
  ProfileSamples prof;
};

ConnectionRun run_connection(Context& c, const ScalarConnection& k) {
  c.params(to_json(k.sp));
  guard_region(c, k.sp, k.region);
  ConnectionRun run;
  run.leg = run_leg(c, k.sp, k.leg);
  run.prof = scalar_profile(k.sp, run.leg.tr);
  if (k.at_zero != BL::unclassified) check_scalar_end(c, k.sp, run.prof, Endpoint::zero, k.at_zero);
  if (k.at_inf != BL::unclassified) check_scalar_end(c, k.sp, run.prof, Endpoint::infinity, k.at_inf);
  if (k.global) {
    const ProfileSamples& pr = run.prof;
    check_window_stable(
        c, "sup r^gamma w", [&](double a, double b) { return osserman_sup(k.sp, pr, a, b); },
        pr.log_r.front(), pr.log_r.back());
  }
  c.artifact("trajectory", thin(to_csv(run.leg.tr)));
  c.artifact("profile", thin(to_csv(run.prof)));
  return run;
}

// ------------------------------------------------ system connecting orbits

struct SystemConnection {
  SystemParams sy;
  SystemRegion region;
  int eps = 1;  // sign of S Z along the orbit
  LegSpec leg;
  std::array<double, 2> zero_rates{kNaN, kNaN};  // exponents of |u1'|, |u2'|
  std::array<double, 2> inf_rates{kNaN, kNaN};
  std::array<int, 2> signs{0, 0};  // of u1', u2'
  bool global = true;
};

struct SystemRun {
  ScalarParams sp;
  Leg leg;
  SystemProfileSamples prof;
};

void check_signs(Context& c, const SystemProfileSamples& prof, std::array<int, 2> signs) {
  for (int j = 0; j < 2; ++j) {
    if (signs[j] == 0) continue;
    const auto& v = j == 0 ? prof.u1p : prof.u2p;
    bool ok = true;
    for (double x : v) ok = ok && sign_of(x) == signs[j];
    c.expect_true("sign of u" + std::to_string(j + 1) + "' is " + (signs[j] > 0 ? "+" : "-"), ok);
  }
}

void check_uprime_rates(Context& c, const SystemProfileSamples& prof, Endpoint end,
                        std::array<double, 2> rates) {
  for (int j = 0; j < 2; ++j) {
    if (std::isnan(rates[j])) continue;
    const RateFit f = power_fit(prof.log_r, j == 0 ? prof.log_abs_u1p : prof.log_abs_u2p, end);
    check_rate(c, std::string("at ") + end_name(end) + ": exponent of u" + std::to_string(j + 1) + "'",
               f, rates[j]);
  }
}

void check_gradient_bounds(Context& c, const SystemParams& sy, const SystemProfileSamples& prof) {
  const double ta = std::log(prof.r.front()), tb = std::log(prof.r.back());
  for (int j = 0; j < 2; ++j)
    check_window_stable(
        c, "sup r^lambda" + std::to_string(j + 1) + " |u" + std::to_string(j + 1) + "'|",
        [&](double a, double b) { return gradient_sup(sy, prof, a, b)[j]; }, ta, tb);
}

SystemRun run_system_connection(Context& c, const SystemConnection& k) {
  c.params(to_json(k.sy));
  guard_region(c, k.sy, k.region);
  guard_system_margin(c, k.sy);
  SystemRun run;
  run.sp = to_scalar(k.sy, k.eps);
  run.leg = run_leg(c, run.sp, k.leg);
  run.prof = system_profile(k.sy, run.leg.tr);
  check_signs(c, run.prof, k.signs);
  check_uprime_rates(c, run.prof, Endpoint::zero, k.zero_rates);
  check_uprime_rates(c, run.prof, Endpoint::infinity, k.inf_rates);
  if (k.global) check_gradient_bounds(c, k.sy, run.prof);
  c.artifact("trajectory", thin(to_csv(run.leg.tr)));
  return run;
}

// u_i = -int_r^inf u_i' (anchor at infinity) or int_0^r u_i' (anchor at 0); the
// tail beyond the last sample follows the local power law.
void attach_primitives(SystemProfileSamples& prof, Endpoint anchor) {
  const bool at_inf = anchor == Endpoint::infinity;
  const std::size_t i = at_inf ? prof.size() - 1 : 0;
  double u[2];
  for (int j = 0; j < 2; ++j) {
    const RateFit f = power_fit(prof.log_r, j == 0 ? prof.log_abs_u1p : prof.log_abs_u2p, anchor);
    const double k = -f.alpha;
    const double ru = prof.r[i] * (j == 0 ? prof.u1p[i] : prof.u2p[i]);
    if (at_inf) {
      if (k <= 1.02) throw InvalidParams("primitive diverges at infinity");
      u[j] = -ru / (k - 1);
    } else {
      if (k >= 0.98) throw InvalidParams("primitive diverges at 0");
      u[j] = ru / (1 - k);
    }
  }
  integrate_primitives(prof, i, u[0], u[1]);
}

// Where u = C r^a + c0 with |a| small the constant masks the power over any
// finite window, so the exponent is read off r u' instead.
void check_u_rates(Context& c, const SystemProfileSamples& prof, Endpoint end,
                   std::array<double, 2> rates) {
  for (int j = 0; j < 2; ++j) {
    if (std::abs(rates[j]) < 0.5) {
      std::vector<double> l;
      const auto& lp = j == 0 ? prof.log_abs_u1p : prof.log_abs_u2p;
      for (std::size_t i = 0; i < lp.size(); ++i) l.push_back(lp[i] + prof.log_r[i]);
      check_rate(c, std::string("at ") + end_name(end) + ": exponent of u" + std::to_string(j + 1) + " via r u'",
                 power_fit(prof.log_r, l, end), rates[j]);
      continue;
    }
    const auto& u = j == 0 ? prof.u1 : prof.u2;
    std::vector<double> t, l;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != 0) {
        t.push_back(prof.log_r[i]);
        l.push_back(std::log(std::abs(u[i])));
      }
    const RateFit f = power_fit(t, l, end);
    check_rate(c, std::string("at ") + end_name(end) + ": exponent of u" + std::to_string(j + 1), f,
               rates[j]);
  }
}

void check_u_sign(Context& c, const SystemProfileSamples& prof, int sign) {
  bool ok = true;
  for (std::size_t i = 0; i < prof.size(); ++i) ok = ok && prof.u1[i] * sign > 0 && prof.u2[i] * sign > 0;
  c.expect_true(std::string("u1, u2 ") + (sign > 0 ? "positive" : "negative"), ok);
}

double lambda1(const SystemParams& s) { return (s.p + 1) / (s.p * s.q - 1); }
double lambda2(const SystemParams& s) { return (s.q + 1) / (s.p * s.q - 1); }

// Direct radial integration from a reconstructed state against a fine phase-plane run.
void check_ivp_consistency(Context& c, const SystemParams& sy, const ScalarParams& sp,
                           const Trajectory& tr) {
  const double tm = 0.5 * (tr.t_min() + tr.t_max());
  const TrajectorySample x0 = tr.at(tm);
  const SystemProfileSamples s0 = reconstruct_uprime(sy, std::vector<TrajectorySample>{x0});
  const double r0 = std::exp(tm);
  const RadialSystemResult rad = integrate_radial_system(sy, r0, s0.u1p[0], s0.u2p[0], 10 * r0);
  IntegrateOptions o;
  o.stop_on_convergence = false;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  o.max_step = 0.02;
  const Trajectory fine =
      integrate_trajectory(sp, {x0.s, x0.z}, tm, std::log(rad.r_final), o);
  std::vector<double> t;
  for (double r : rad.prof.r) t.push_back(std::log(r));
  const SystemProfileSamples rec = reconstruct_uprime(sy, fine.resample(t));
  double worst = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    worst = std::max({worst, rel_gap(rec.u1p[i], rad.prof.u1p[i]), rel_gap(rec.u2p[i], rad.prof.u2p[i])});
  c.expect_lt("radial IVP vs phase plane, max relative gap", worst, 1e-7);
}

// ------------------------------------------------------------- fixed points

std::array<std::complex<double>, 2> eig2(const Mat2& J) {
  const double tr = J[0][0] + J[1][1], det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4 - det));
  return {tr / 2 + disc, tr / 2 - disc};
}

Mat2 fd_jacobian(const ScalarParams& sp, PhasePoint x, double h = 1e-6) {
  Mat2 J{};
  for (int j = 0; j < 2; ++j) {
    PhasePoint a = x, b = x;
    (j == 0 ? a.s : a.z) += h;
    (j == 0 ? b.s : b.z) -= h;
    const PhasePoint fa = vector_field(sp, a), fb = vector_field(sp, b);
    J[0][j] = (fa.s - fb.s) / (2 * h);
    J[1][j] = (fa.z - fb.z) / (2 * h);
  }
  return J;
}

}  // namespace

// Worst mismatch between closed-form eigenvalues and those of a
// finite-difference Jacobian over the four fixed points.
double eigen_fd_mismatch(const ScalarParams& sp) {
  double worst = 0;
  for (const FixedPointInfo& f : fixed_points(sp)) {
    auto fd = eig2(fd_jacobian(sp, f.pos));
    auto an = f.eigenvalues;
    auto key = [](std::complex<double> z) { return std::pair(z.real(), z.imag()); };
    std::sort(fd.begin(), fd.end(), [&](auto a, auto b) { return key(a) < key(b); });
    std::sort(an.begin(), an.end(), [&](auto a, auto b) { return key(a) < key(b); });
    for (int k = 0; k < 2; ++k)
      worst = std::max(worst, std::abs(fd[k] - an[k]) / std::max(1.0, std::abs(an[k])));
  }
  return worst;
}

namespace {

// ---------------------------------------------------------------- catalog

struct FigPreset {
  int n;
  ScalarParams sp;
  ScalarRegion region;
  std::string claim;  // ordering of q stated in the caption
  std::optional<double> claimed_qc, claimed_qS;
};

std::vector<FigPreset> figure_presets() {
  const double q85 = 85.0 / 90.0;
  return {
      {1, {2.2, 1.4, 0.7, -0.6, 1}, ScalarRegion::A, "q<qc", 0.75, std::nullopt},
      {2, {2.2, 1.4, 0.85, -0.6, 1}, ScalarRegion::A, "qc<q<qS", std::nullopt, q85},
      {3, {2.2, 1.4, 1.0, -0.6, 1}, ScalarRegion::A, "q>qS", std::nullopt, q85},
      {4, {2.2, 1.4, q85, -0.6, 1}, ScalarRegion::A, "q=qS", std::nullopt, q85},
      {5, {2.2, 1.4, 0.75, -0.6, 1}, ScalarRegion::A, "q=qc", 0.75, std::nullopt},
      {6, {11.0 / 7, 12.0 / 7, 1.3, -1.82 / 7, 1}, ScalarRegion::B, "", std::nullopt, std::nullopt},
      {7, {37.0 / 19, 29.0 / 19, 1.3, -29.4 / 19, 1}, ScalarRegion::C, "", std::nullopt, std::nullopt},
      {8, {2.2, 1.4, 1.1, -1.4, 1}, ScalarRegion::Boundary_sigmaP, "", std::nullopt, std::nullopt},
      {9, {37.0 / 19, 29.0 / 19, 1.5, -37.0 / 19, 1}, ScalarRegion::Boundary_sigmaN, "", std::nullopt,
       std::nullopt},
      {10, {5.0 / 3, 5.0 / 3, 1.3, -19.0 / 15, 1}, ScalarRegion::Boundary_pN, "", std::nullopt,
       std::nullopt},
      {11, {5.0 / 3, 5.0 / 3, 1.5, -5.0 / 3, 1}, ScalarRegion::Triple_pNsigma, "", std::nullopt,
       std::nullopt},
  };
}

void run_figure(Context& c, const FigPreset& f) {
  c.params(to_json(f.sp));
  guard_region(c, f.sp, f.region);
  c.expect_lt("eigenvalues vs finite-difference Jacobian", eigen_fd_mismatch(f.sp), 1e-6);
  const ScalarExponents e = critical_exponents(f.sp);
  if (e.qc) c.info("qc", *e.qc);
  if (e.qS) c.info("qS", *e.qS);
  if (e.gamma) c.info("gamma", *e.gamma);
  if (f.claimed_qc) c.info("caption qc", *f.claimed_qc, "differs from the formula value when qc != caption");
  if (f.claimed_qS) c.info("caption qS", *f.claimed_qS, "differs from the formula value when qS != caption");
  if (!f.claim.empty() && e.qc && e.qS) {
    const double q = f.sp.q;
    bool holds = false;
    if (f.claim == "q<qc") holds = q < *e.qc;
    if (f.claim == "qc<q<qS") holds = q > *e.qc && q < *e.qS;
    if (f.claim == "q>qS") holds = q > *e.qS;
    if (f.claim == "q=qS") holds = std::abs(q - *e.qS) < 1e-9;
    if (f.claim == "q=qc") holds = std::abs(q - *e.qc) < 1e-9;
    c.info("caption ordering " + f.claim + " holds with formula exponents", holds ? 1 : 0);
  }
  CsvTable t;
  t.header = {"kind", "s", "z", "re_l1", "im_l1", "re_l2", "im_l2", "quadrant"};
  t.columns.assign(8, {});
  for (const FixedPointInfo& fp : fixed_points(f.sp)) {
    const double row[8] = {double(int(fp.kind)), fp.pos.s, fp.pos.z,
                           fp.eigenvalues[0].real(), fp.eigenvalues[0].imag(),
                           fp.eigenvalues[1].real(), fp.eigenvalues[1].imag(), double(fp.quadrant)};
    for (int j = 0; j < 8; ++j) t.columns[j].push_back(row[j]);
  }
  c.artifact("fixed_points", t);
}

// Limit of a quantity at the end of a log run, given as its logarithm.
void check_limit(Context& c, const std::string& name, double log_value, double expected) {
  c.expect_rel(name, std::exp(log_value), expected, c.tol().limit);
}

PhasePoint near_point(PhasePoint p, double ds, double dz) { return {p.s + ds, p.z + dz}; }

std::vector<Scenario> build_catalog() {
  std::vector<Scenario> cat;
  auto add = [&](std::string id, std::string thm, std::string region, std::string desc,
                 std::function<void(Context&)> run) {
    cat.push_back({std::move(id), std::move(thm), std::move(region), std::move(desc), std::move(run)});
  };

  // ----------------------------------------------------------- figures
  for (const FigPreset& f : figure_presets())
    add("fig." + std::to_string(f.n), "figure", to_string(f.region),
        "figure parameter set, classification and fixed-point eigen-data",
        [f](Context& c) { run_figure(c, f); });

  // ------------------------------------------------------------ region A
  add("orange.gs", "orange", "A", "ground state at q = qS: N0 to A0, matches the explicit family",
      [](Context& c) {
        const ScalarParams sp{3, 2, 5, 0, 1};
        const ScalarConnection k{sp, ScalarRegion::A, {FK::N0, 1, 1, FK::A0},
                                 BL::const_plus_sigma_power, BL::harmonic_decay, true};
        const auto e = critical_exponents(sp);
        c.expect_abs("q - qS", sp.q - *e.qS, 0, 1e-12);
        ConnectionRun run = run_connection(c, k);
        c.info("closest approach to M0", run.leg.tr.closest[0], "M0 is a centre at q = qS");
        const double w0 = std::exp(run.prof.log_w.front());
        const GroundState g1 = hh_ground_state(sp, 1), g2 = hh_ground_state(sp, 2);
        const double L1 = std::log(g1.c * std::pow(g1.d, g1.b));
        const double L2 = std::log(g2.c * std::pow(g2.d, g2.b));
        const double cst = std::exp((std::log(w0) - L1) / ((L2 - L1) / std::log(2.0)));
        const GroundState g = hh_ground_state(sp, cst);
        c.info("aligned c", cst);
        double err = 0, top = 0;
        for (double r : log_grid(0.1, 10, 400)) {
          const auto x = reconstruct_w(sp, std::vector<TrajectorySample>{run.leg.tr.at(std::log(r))});
          err = std::max(err, std::abs(x.w[0] - g.w(r)));
          top = std::max(top, g.w(r));
        }
        c.expect_lt("sup-norm gap to the explicit ground state on [0.1,10]", err / top, c.tol().limit);
        const auto F = pohozaev_energy(sp, g.sample(log_grid(0.01, 100, 100)), (sp.N - sp.p) / sp.p);
        double fmax = 0;
        for (double v : F) fmax = std::max(fmax, std::abs(v));
        c.expect_lt("Pohozaev energy of the explicit ground state", fmax, 1e-10);
      });

  add("orange.regular", "orange", "A",
      "absorption, q > qc: the regular solution exists locally but is not global; no other local type at 0",
      [](Context& c) {
        const ScalarParams sp{3, 2, 4, 0, -1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::A);
        guard_q_margin(c, sp.q, {critical_exponents(sp).qc, critical_exponents(sp).qS});
        const Leg leg = run_leg(c, sp, {FK::N0, 1, 2, std::nullopt, 200});
        c.expect_true("regular solution escapes at finite r", leg.tr.reason == Termination::blow_up ||
                                                                  leg.tr.reason == Termination::step_underflow,
                      to_string(leg.tr.reason));
        const ProfileSamples prof = scalar_profile(sp, leg.tr);
        check_scalar_end(c, sp, prof, Endpoint::zero, BL::const_plus_sigma_power);
        c.sampled_evidence();
        const PhasePoint n0 = fixed_point(sp, FK::N0).pos;
        for (int q : {2, 4}) {
          const SweepStats st = escape_sweep(c, sp, q, -1, 100, [&](const Trajectory& tr) {
            const auto& x = tr.samples.front();
            return std::hypot(x.s - n0.s, x.z - n0.z) < 1e-3;
          });
          c.expect_true("Q" + std::to_string(q) + " backward: escape or regular", st.escaped == st.total);
        }
        c.artifact("profile", thin(to_csv(prof)));
      });

  add("orange.1.absorption", "orange", "A",
      "absorption, q < qc: harmonic singularity at 0, w ~ w* at infinity", [](Context& c) {
        const ScalarParams sp{3, 2, 2, 0, -1};
        guard_q_margin(c, sp.q, {critical_exponents(sp).qc});
        run_connection(c, {sp, ScalarRegion::A, {FK::M0, -1, 4, FK::A0}, BL::harmonic_decay,
                           BL::particular_like, true});
        const auto h = hh_particular(sp);
        c.expect_true("w* exists", h.has_value());
        if (h) c.expect_lt("w* residual", residual_scalar(sp, h->sample(log_grid(1e-2, 1e2, 200))).max_rel,
                           c.tol().residual);
      });

  add("orange.1.noexterior", "orange", "A", "source, q < qc: no positive solution near infinity",
      [](Context& c) {
        const ScalarParams sp{3, 2, 2, 0, 1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::A);
        nonexistence(c, sp, {1, 3}, {1});
      });

  add("orange.2.i", "orange", "A", "source, qc < q < qS: w ~ w* at 0, harmonic decay at infinity",
      [](Context& c) {
        const ScalarParams sp{3, 2, 4, 0, 1};
        guard_q_margin(c, sp.q, {critical_exponents(sp).qc, critical_exponents(sp).qS});
        run_connection(c, {sp, ScalarRegion::A, {FK::A0, -1, 1, FK::M0}, BL::particular_like,
                           BL::harmonic_decay, true});
      });

  add("orange.2.ii", "orange", "A", "source, q > qS: ground state from N0 to M0", [](Context& c) {
    const ScalarParams sp{3, 2, 6, 0, 1};
    guard_q_margin(c, sp.q, {critical_exponents(sp).qc, critical_exponents(sp).qS});
    run_connection(c, {sp, ScalarRegion::A, {FK::N0, 1, 1, FK::M0, 250}, BL::const_plus_sigma_power,
                       BL::particular_like, true});
  });

  // ------------------------------------------------------- q = qc (log)
  // Along the centre manifold of A0, z ~ 1/(kappa t). For eps = 1 the run goes
  // backward from near A0; for eps = -1 the manifold repels forward, so the run
  // starts at t = T on its tangent and goes backward.
  auto qccrit = [](Context& c, int eps) {
    ScalarParams sp{2.2, 1.4, 0, -0.6, eps};
    sp.q = *critical_exponents(sp).qc;
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::A);
    const PhasePoint a0 = fixed_point(sp, FK::A0).pos;
    const double kappa = (sp.q - sp.p + 1) / (sp.p - 1);
    Trajectory tr;
    std::size_t probe;  // sample where the limit is read, away from the start
    if (eps > 0) {
      tr = free_run(sp, near_point(a0, -1e-2 / (sp.p - 1), 1e-2), -1, kLogSpan);
      probe = 0;
    } else {
      const double z0 = -1 / (kappa * kLogSpan);
      tr = integrate_trajectory(sp, near_point(a0, -z0 / (sp.p - 1), z0), kLogSpan, 10, leg_options(true));
      probe = 1;
    }
    const Endpoint end = eps > 0 ? Endpoint::zero : Endpoint::infinity;
    c.diag("run stopped with " + to_string(tr.reason) + " at t = " + num(eps > 0 ? tr.t_min() : tr.t_min()));
    const ProfileSamples prof = scalar_profile(sp, tr);
    const double g = harmonic_rate(sp);
    check_log_law(c, "w", log_fit(prof.log_r, prof.log_w, end), -g, -g / (sp.p + sp.sigma));
    std::size_t i = 0;
    if (probe == 1)
      while (i + 1 < prof.size() && prof.log_r[i] < kLogSpan / 10) ++i;
    const double k = 1 / (sp.q + 1 - sp.p);
    const double lhs = g * prof.log_r[i] + k * std::log(std::abs(prof.log_r[i])) + prof.log_w[i];
    const double expect = std::pow(std::pow(g, sp.p - 1) * (sp.p - 1) / (sp.q - sp.p + 1), k);
    check_limit(c, "limit of r^{(N-p)/(p-1)} |ln r|^{1/(q+1-p)} w", lhs, expect);
    c.artifact("profile", thin(to_csv(prof)));
  };
  add("qccrit.zero", "qccrit", "A", "source, q = qc: log-corrected harmonic singularity at 0",
      [qccrit](Context& c) { qccrit(c, 1); });
  add("qccrit.infinity", "qccrit", "A", "absorption, q = qc: log-corrected harmonic decay at infinity",
      [qccrit](Context& c) { qccrit(c, -1); });

  // ------------------------------------------------------------ region F
  add("hypF.gs", "hypF", "F", "ground state of the r -> 1/r image: A0 at 0, N0 at infinity",
      [](Context& c) {
        const ScalarParams sp{1, 2, 5, -4, 1};
        guard_margin(c, {-sp.sigma, sp.p, sp.N});
        ConnectionRun run = run_connection(c, {sp, ScalarRegion::F, {FK::N0, -1, 3, FK::A0},
                                               BL::harmonic_decay, BL::const_plus_sigma_power, true});
        const double winf = std::exp(run.prof.log_w.back());
        const GroundState g1 = hh_ground_state(sp, 1), g2 = hh_ground_state(sp, 2);
        const double L1 = std::log(g1.c * std::pow(g1.d, g1.b));
        const double L2 = std::log(g2.c * std::pow(g2.d, g2.b));
        const GroundState g = hh_ground_state(sp, std::exp((std::log(winf) - L1) / ((L2 - L1) / std::log(2.0))));
        double err = 0, top = 0;
        for (double r : log_grid(0.1, 10, 400)) {
          const auto x = reconstruct_w(sp, std::vector<TrajectorySample>{run.leg.tr.at(std::log(r))});
          err = std::max(err, std::abs(x.w[0] - g.w(r)));
          top = std::max(top, g.w(r));
        }
        c.expect_lt("sup-norm gap to the explicit ground state on [0.1,10]", err / top, c.tol().limit);
      });

  // ------------------------------------------------------------ region B
  add("rose.global", "rose", "B", "absorption: w0 > 0 at 0 with w' ~ -c r^{-(N-1)/(p-1)}, w ~ w* at infinity",
      [](Context& c) {
        const ScalarParams sp{1.5, 2.5, 3, -1, -1};
        guard_margin(c, {sp.p, sp.N, -sp.sigma});
        run_connection(c, {sp, ScalarRegion::B, {FK::M0, -1, 4, FK::O}, BL::const_plus_harmonic_power,
                           BL::particular_like, true});
      });
  add("rose.nonglobal", "rose", "B", "source: no positive solution near infinity", [](Context& c) {
    const ScalarParams sp{1.5, 2.5, 3, -1, 1};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::B);
    nonexistence(c, sp, {1, 3}, {1});
  });

  // ------------------------------------------------------------ region D
  add("white.global", "white", "D", "absorption: w ~ w* at 0, w -> C > 0 at infinity", [](Context& c) {
    const ScalarParams sp{3.5, 2.5, 3, -4, -1};
    guard_margin(c, {-sp.sigma, sp.N, sp.p});
    run_connection(c, {sp, ScalarRegion::D, {FK::M0, 1, 2, FK::O}, BL::particular_like,
                       BL::const_plus_harmonic_power, true});
  });
  add("white.nolocal", "white", "D", "source: no positive solution near 0", [](Context& c) {
    const ScalarParams sp{3.5, 2.5, 3, -4, 1};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::D);
    nonexistence(c, sp, {1, 3}, {-1});
  });

  // ------------------------------------------------------------ region C
  add("yellow.global", "yellow", "C", "absorption: w ~ w* at 0, w -> C with w' ~ r^{(sigma+1)/(p-1)} at infinity",
      [](Context& c) {
        const ScalarParams sp{3, 1.5, 2, -2, -1};
        guard_margin(c, {sp.N, -sp.sigma, sp.p});
        run_connection(c, {sp, ScalarRegion::C, {FK::M0, 1, 2, FK::N0}, BL::particular_like,
                           BL::const_plus_sigma_power, true});
      });
  add("yellow.nolocal", "yellow", "C", "source: no positive solution near 0", [](Context& c) {
    const ScalarParams sp{3, 1.5, 2, -2, 1};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::C);
    nonexistence(c, sp, {1, 3}, {-1});
  });

  // ------------------------------------------------------------ region E
  add("hypE.global", "hypE", "E", "absorption: w0 > 0 at 0 with w' ~ r^{(sigma+1)/(p-1)}, w ~ w* at infinity",
      [](Context& c) {
        const ScalarParams sp{1.2, 2, 2, -1.5, -1};
        guard_margin(c, {sp.p, -sp.sigma, sp.N});
        run_connection(c, {sp, ScalarRegion::E, {FK::M0, -1, 4, FK::N0}, BL::const_plus_sigma_power,
                           BL::particular_like, true});
      });
  add("hypE.nolocal", "hypE", "E", "source: no positive solution near infinity", [](Context& c) {
    const ScalarParams sp{1.2, 2, 2, -1.5, 1};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::E);
    nonexistence(c, sp, {1, 3}, {1});
  });

  // ------------------------------------------------- explicit absorption
  add("expli.flo", "expli", "D", "explicit absorption family at sigma = -p(N-1)/(p-1)", [](Context& c) {
    const ScalarParams sp{3, 2, 3, -4, -1};
    c.params(to_json(sp));
    for (Branch b : {Branch::negative, Branch::positive}) {
      const ExplicitAbsorption e = hh_absorption_explicit(sp, 1, b);
      const std::string tag = b == Branch::positive ? "positive branch" : "negative branch";
      const double lo = std::max(1e-2, e.validity.lo * 2), hi = std::min(1e2, e.validity.hi / 2);
      if (!(hi > lo)) continue;
      c.expect_lt(tag + " residual", residual_scalar(sp, e.sample(log_grid(lo, hi, 400))).max_rel,
                  c.tol().residual_fd);
      const double r0 = std::sqrt(lo * hi), r1 = std::min(hi, 10 * r0);
      const RadialScalarResult rad = integrate_radial_scalar(sp, r0, e.w(r0), e.wprime(r0), r1);
      double worst = 0;
      for (std::size_t i = 0; i < rad.prof.size(); ++i)
        worst = std::max(worst, rel_gap(rad.prof.w[i], e.w(rad.prof.r[i])));
      c.expect_lt(tag + " radial integration vs formula", worst, c.tol().residual_fd);
    }
  });

  // ------------------------------------------------- sigma = -p (log)
  // On the centre manifold of N0, s ~ kappa/t. For eps = -1 the manifold
  // repels backward, so that run starts at t = -T on its tangent and goes forward.
  auto sigmap = [](Context& c, int eps) {
    const ScalarParams sp{2.2, 1.4, 1.1, -1.4, eps};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::Boundary_sigmaP);
    const double kappa = (sp.p - 1) / (sp.q - sp.p + 1);
    Trajectory tr;
    if (eps > 0) {
      tr = free_run(sp, {1e-2, sp.N + sp.sigma}, 1, kLogSpan);
    } else {
      const double s0 = -kappa / kLogSpan;
      tr = integrate_trajectory(sp, {s0, sp.N + sp.sigma - sp.q * s0}, -kLogSpan, -10, leg_options(true));
    }
    const Endpoint end = eps > 0 ? Endpoint::infinity : Endpoint::zero;
    const ProfileSamples prof = scalar_profile(sp, tr);
    check_log_law(c, "w", log_fit(prof.log_r, prof.log_w, end), 0, -kappa);
    std::size_t i = prof.size() - 1;
    if (eps < 0) {
      i = 0;
      while (i + 1 < prof.size() && prof.log_r[i] < -kLogSpan / 10) ++i;
    }
    // w |ln r|^kappa -> ((N-p) kappa^{p-1})^{1/(q-p+1)}, from s ~ kappa/t and z -> N-p.
    const double lhs = kappa * std::log(std::abs(prof.log_r[i])) + prof.log_w[i];
    check_limit(c, "limit of |ln r|^{(p-1)/(q-p+1)} w", lhs,
                std::pow((sp.N - sp.p) * std::pow(kappa, sp.p - 1), 1 / (sp.q - sp.p + 1)));
    c.info("same limit against ((p-1)/q)^{(p-1)/(q-p+1)}", std::pow((sp.p - 1) / sp.q, kappa),
           "drops z -> N-p and uses q for q-p+1 in the centre-manifold flow");
    c.artifact("profile", thin(to_csv(prof)));
  };
  add("sigmap.infinity", "sigmap", "sigma=-p", "source: w ~ ((p-1)/q ln r)^{-(p-1)/(q-p+1)} at infinity",
      [sigmap](Context& c) { sigmap(c, 1); });
  add("sigmap.zero", "sigmap", "sigma=-p", "absorption: same log law at 0",
      [sigmap](Context& c) { sigmap(c, -1); });

  // ------------------------------------------------- sigma = -N (log)
  auto sigman_check = [](Context& c, const ScalarParams& sp, const ProfileSamples& prof) {
    const RateFit fd = log_fit(prof.log_r, prof.log_abs_wprime, Endpoint::infinity);
    check_log_law(c, "w'", fd, -origin_rate(sp), 1 / (sp.p - 1));
    check_rate(c, "at inf: exponent of w", log_fit(prof.log_r, prof.log_w, Endpoint::infinity), 0);
    const std::size_t i = prof.size() - 1;
    const double t = prof.log_r[i];
    const double lhs = origin_rate(sp) * t - std::log(t) / (sp.p - 1) + prof.log_abs_wprime[i];
    check_limit(c, "limit of r^{(N-1)/(p-1)} (ln r)^{-1/(p-1)} |w'| against C^{q/(p-1)}", lhs,
                std::exp(sp.q / (sp.p - 1) * prof.log_w[i]));
    bool sign_ok = true;
    for (double v : prof.wprime) sign_ok = sign_ok && sign_of(v) == -sp.eps;
    c.expect_true("sign of w' is -eps", sign_ok);
  };
  add("sigman.infinity", "sigman", "sigma=-N", "source: w -> C with log-corrected w' at infinity",
      [sigman_check](Context& c) {
        const ScalarParams sp{37.0 / 19, 29.0 / 19, 1.5, -37.0 / 19, 1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::Boundary_sigmaN);
        const Trajectory tr = free_run(sp, {1e-3, 1e-1}, 1, kLogSpan);
        const ProfileSamples prof = scalar_profile(sp, tr);
        sigman_check(c, sp, prof);
        c.artifact("profile", thin(to_csv(prof)));
      });
  add("sigman.hoc", "sigman", "sigma=-N", "absorption: w ~ w* at 0, w -> C with log-corrected w' at infinity",
      [sigman_check](Context& c) {
        const ScalarParams sp{3, 2, 3, -3, -1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::Boundary_sigmaN);
        const Leg leg = run_leg(c, sp, {FK::M0, 1, 2, FK::O, kLogSpan, true});
        const ProfileSamples prof = scalar_profile(sp, leg.tr);
        check_scalar_end(c, sp, prof, Endpoint::zero, BL::particular_like);
        sigman_check(c, sp, prof);
        c.artifact("profile", thin(to_csv(prof)));
      });

  // ------------------------------------------------- p = N (log)
  add("pegaln.zero", "pegaln", "p=N", "source: w ~ C |ln r| and r w' -> -C at 0", [](Context& c) {
    const ScalarParams sp{5.0 / 3, 5.0 / 3, 1.3, -19.0 / 15, 1};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::Boundary_pN);
    const Trajectory tr = free_run(sp, {1e-2, 1e-2}, -1, kLogSpan);
    const ProfileSamples prof = scalar_profile(sp, tr);
    const RateFit f = log_fit(prof.log_r, prof.log_w, Endpoint::zero);
    check_log_law(c, "w", f, 0, 1);
    ClassifyOptions o;
    o.window.t_lo = -kLogSpan;
    o.window.t_hi = -kLogSpan / 10;
    c.expect_true("label log_linear", classify_behavior(sp, prof, Endpoint::zero, o).label == BL::log_linear);
    const double t = prof.log_r.front();
    // r w' / (w / |ln r|) -> -1
    check_limit(c, "limit of -r w' |ln r| / w", t + prof.log_abs_wprime.front() +
                                                    std::log(std::abs(t)) - prof.log_w.front(),
                1.0);
    c.expect_true("w' < 0", prof.wprime.front() < 0);
    c.artifact("profile", thin(to_csv(prof)));
  });
  add("pegaln.global", "pegaln", "p=N", "absorption: w ~ C |ln r| at 0, w ~ w* at infinity",
      [](Context& c) {
        const ScalarParams sp{5.0 / 3, 5.0 / 3, 1.3, -19.0 / 15, -1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::Boundary_pN);
        const Leg leg = run_leg(c, sp, {FK::M0, -1, 4, FK::O, kLogSpan, true});
        const ProfileSamples prof = scalar_profile(sp, leg.tr);
        check_log_law(c, "w", log_fit(prof.log_r, prof.log_w, Endpoint::zero), 0, 1);
        check_scalar_end(c, sp, prof, Endpoint::infinity, BL::particular_like);
        check_window_stable(
            c, "sup r^gamma w", [&](double a, double b) { return osserman_sup(sp, prof, a, b); },
            prof.log_r.front(), prof.log_r.back());
        c.artifact("profile", thin(to_csv(prof)));
      });

  // ------------------------------------------------- p = N = -sigma
  add("pnsigma.flai", "pnsigma", "p=N=-sigma", "absorption: explicit (C + d ln r)^{-N/(q-N+1)} family",
      [](Context& c) {
        const ScalarParams sp{5.0 / 3, 5.0 / 3, 1.5, -5.0 / 3, -1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::Triple_pNsigma);
        const ExplicitAbsorption e = hh_absorption_explicit(sp, 1, Branch::positive);
        c.expect_lt("explicit family residual", residual_scalar(sp, e.sample(log_grid(1, 1e2, 400))).max_rel,
                    c.tol().residual);
        const double r0 = std::exp(1.0);
        const Trajectory tr = free_run(sp, phase_point(sp, r0, e.w(r0), e.wprime(r0)), 1, 1e4, 1.0);
        const ProfileSamples prof = scalar_profile(sp, tr);
        double worst = 0;
        for (std::size_t i = 0; i < prof.size() && prof.log_r[i] < 50; ++i)
          worst = std::max(worst, rel_gap(prof.w[i], e.w(prof.r[i])));
        c.expect_lt("phase-plane run vs explicit family on [e, e^50]", worst, c.tol().residual_fd);
        const RateFit f = log_fit(prof.log_r, prof.log_w, Endpoint::infinity, 1e4);
        check_log_law(c, "w", f, 0, e.expo);
        c.artifact("profile", thin(to_csv(prof)));
      });
  add("pnsigma.nolocal", "pnsigma", "p=N=-sigma", "source: no local solution near 0 nor infinity",
      [](Context& c) {
        const ScalarParams sp{5.0 / 3, 5.0 / 3, 1.5, -5.0 / 3, 1};
        c.params(to_json(sp));
        guard_region(c, sp, ScalarRegion::Triple_pNsigma);
        // The degenerate origin releases nearby seeds only algebraically slowly.
        nonexistence(c, sp, {1, 3}, {1, -1}, kLogSpan);
      });

  // ------------------------------------------------- behaviour dictionary
  add("link.i", "link", "A", "orbit ending at M0: w ~ a* r^{-gamma}", [](Context& c) {
    const ScalarParams sp{4, 1.5, 2, 0.5, 1};
    guard_margin(c, {sp.N, sp.p, -sp.sigma});
    guard_q_margin(c, sp.q, {critical_exponents(sp).qc, critical_exponents(sp).qS});
    ConnectionRun run = run_connection(c, {sp, ScalarRegion::A, {FK::N0, 1, 1, FK::M0}, BL::unclassified,
                                           BL::particular_like, true});
    c.info("predicted exponent", -gamma_of(sp));
  });
  add("link.ii", "link", "A", "orbit leaving N0: w -> w0, w' ~ r^{(sigma+1)/(p-1)}", [](Context& c) {
    const ScalarParams sp{3, 1.8, 3, 0.4, -1};
    c.params(to_json(sp));
    guard_region(c, sp, ScalarRegion::A);
    guard_margin(c, {sp.N, sp.p, -sp.sigma});
    const Leg leg = run_leg(c, sp, {FK::N0, 1, 2, std::nullopt, 20});
    const ProfileSamples prof = scalar_profile(sp, leg.tr);
    check_scalar_end(c, sp, prof, Endpoint::zero, BL::const_plus_sigma_power);
    bool sign_ok = true;
    for (std::size_t i = 0; i < 50 && i < prof.size(); ++i) sign_ok = sign_ok && prof.wprime[i] * sp.eps < 0;
    c.expect_true("sign of w' is -eps near 0", sign_ok);
  });
  add("link.iii", "link", "B", "orbit leaving O: w -> w0, w' ~ r^{-(N-1)/(p-1)}", [](Context& c) {
    const ScalarParams sp{2, 3, 2.5, -0.5, -1};
    guard_margin(c, {sp.p, sp.N, -sp.sigma});
    run_connection(c, {sp, ScalarRegion::B, {FK::M0, -1, 4, FK::O}, BL::const_plus_harmonic_power,
                       BL::unclassified, true});
  });
  add("link.iv", "link", "A", "orbit ending at A0: w ~ k r^{-(N-p)/(p-1)}", [](Context& c) {
    const ScalarParams sp{3.5, 1.5, 1.5, 0.5, 1};
    guard_margin(c, {sp.N, sp.p, -sp.sigma});
    guard_q_margin(c, sp.q, {critical_exponents(sp).qc, critical_exponents(sp).qS});
    run_connection(c, {sp, ScalarRegion::A, {FK::A0, -1, 1, FK::M0}, BL::unclassified,
                       BL::harmonic_decay, true});
  });

  // ------------------------------------------------- p = q first integral
  add("caspq.first_integral", "caspq", "p=q", "first integral is conserved; C != 0 is not global",
      [](Context& c) {
        const SystemParams sy = make_system(3, 2, 2);
        c.params(to_json(sy));
        const RadialSystemResult fw = integrate_radial_system(sy, 1, 1, -1, 5);
        const RadialSystemResult bw = integrate_radial_system(sy, 1, 1, -1, 0.5);
        double drift = 0, C0 = 2;
        for (const auto* r : {&fw, &bw})
          for (double v : first_integral_pq(2, 3, r->prof)) drift = std::max(drift, std::abs(v - C0) / C0);
        c.expect_lt("relative drift of C on [0.5,5]", drift, 1e-8);
        const RadialSystemResult far = integrate_radial_system(sy, 1, 1, -1, 1e-6);
        c.expect_true("C != 0 solution ends at finite r > 0", far.stop == RadialStop::blow_up && far.r_final > 1e-6,
                      to_string(far.stop) + " at r = " + num(far.r_final));
        c.info("radius of the singularity", far.r_final);
        c.artifact("profile", to_csv(fw.prof));
      });

  // ------------------------------------------------------- system, exact
  add("regA.qstar", "regA", "Lstar", "exact mixed solution at q = q*", [](Context& c) {
    const SystemParams sy = make_system(3, 2, *critical_exponents(3, 2).qstar);
    c.params(to_json(sy));
    guard_region(c, sy, SystemRegion::Lstar);
    const SystemExactQstar e = system_exact_qstar(sy, 1);
    c.expect_rel("d", e.d, 1.4, 1e-12);
    c.expect_lt("closed-form residual on [0.3,3]", residual_system(sy, e.sample(log_grid(0.3, 3, 200))).max_rel(),
                c.tol().residual);
    c.expect_lt("closed-form residual on [0.01,100]",
                residual_system(sy, e.sample(log_grid(1e-2, 1e2, 400))).max_rel(), c.tol().residual_fd);
    const RadialSystemResult up = integrate_radial_system(sy, 1, e.u1p(1), e.u2p(1), 10);
    const RadialSystemResult dn = integrate_radial_system(sy, 1, e.u1p(1), e.u2p(1), 0.1);
    double worst = 0;
    for (const auto* r : {&up, &dn})
      for (std::size_t i = 0; i < r->prof.size(); ++i)
        worst = std::max({worst, rel_gap(r->prof.u1p[i], e.u1p(r->prof.r[i])),
                          rel_gap(r->prof.u2p[i], e.u2p(r->prof.r[i]))});
    c.expect_lt("radial integration vs closed form on [0.1,10]", worst, c.tol().residual);
    const SystemProfileSamples prof = e.sample(log_grid(1e-6, 1e6, 2000));
    check_gradient_bounds(c, sy, prof);
    check_signs(c, prof, {1, -1});
  });

  add("regA.signs", "regA", "all", "particular solutions: sign pattern and residual per region",
      [](Context& c) {
        struct Want {
          SystemRegion r;
          int s1, s2;
        };
        const Want wants[] = {{SystemRegion::A1, 1, 1},  {SystemRegion::A2, 1, -1}, {SystemRegion::A3, 1, -1},
                              {SystemRegion::B, 1, 1},   {SystemRegion::C1, -1, -1}, {SystemRegion::C2, -1, -1},
                              {SystemRegion::C3, -1, -1}, {SystemRegion::D1, -1, -1}, {SystemRegion::D2, -1, -1},
                              {SystemRegion::D3, -1, -1}};
        std::uniform_real_distribution<double> U(0, 1);
        c.sampled_evidence();
        for (const Want& w : wants) {
          int found = 0, good = 0;
          double worst = 0;
          for (int tries = 0; tries < 200000 && found < 10; ++tries) {
            const double N = 3 + 5 * U(c.rng()), p = 1.05 + 9 * U(c.rng());
            const double q = p * U(c.rng());
            if (p * q <= 1.05) continue;
            const SystemParams s = make_system(N, p, q);
            if (classify(s, 0.05) != w.r) continue;
            const auto sp = system_particular(s);
            if (!sp) continue;
            ++found;
            worst = std::max(worst, residual_system(s, sp->sample(log_grid(1e-2, 1e2, 200))).max_rel());
            good += (sp->a1 > 0 ? 1 : -1) == w.s1 && (sp->a2 > 0 ? 1 : -1) == w.s2;
          }
          const std::string tag = to_string(w.r);
          c.expect_true(tag + ": 10 parameter sets found", found == 10, std::to_string(found));
          c.expect_true(tag + ": sign pattern", good == found);
          c.expect_lt(tag + ": worst residual", worst, c.tol().residual);
        }
      });

  // ------------------------------------------------------- system orbits
  add("regA.A1", "regA", "A1", "q < q1: u' > 0, (N-1)p-1 and N-1 rates at 0, particular rates at infinity",
      [](Context& c) {
        const SystemParams sy = make_system(3, 2, 0.8);
        const double N = sy.N, p = sy.p;
        SystemRun run = run_system_connection(
            c, {sy, SystemRegion::A1, -1, {FK::M0, -1, 4, FK::A0, 40}, {-((N - 1) * p - 1), -(N - 1)},
                {-lambda1(sy), -lambda2(sy)}, {1, 1}, true});
        check_ivp_consistency(c, sy, run.sp, run.leg.tr);
      });

  add("thmix.A2", "thmix", "A2", "mixed: u1' > 0 > u2', particular at 0, r^{(N-1)p-2} u1 and r^{N-2} u2 limits at infinity",
      [](Context& c) {
        const SystemParams sy = make_system(3, 2, 1.07);
        const double N = sy.N, p = sy.p;
        SystemRun run = run_system_connection(
            c, {sy, SystemRegion::A2, 1, {FK::A0, -1, 1, FK::M0, 80}, {-lambda1(sy), -lambda2(sy)},
                {-((N - 1) * p - 1), -(N - 1)}, {1, -1}, true});
        check_ivp_consistency(c, sy, run.sp, run.leg.tr);
        attach_primitives(run.prof, Endpoint::infinity);
        check_u_rates(c, run.prof, Endpoint::infinity, {-((N - 1) * p - 2), -(N - 2)});
        check_u_rates(c, run.prof, Endpoint::zero, {1 - lambda1(sy), 1 - lambda2(sy)});
        c.artifact("profile", thin(to_csv(run.prof)));
      });

  add("thsou.C1", "thsou", "C1", "source: u singular at 0 like the particular solution, r^{N-2} u1 and r^{(N-1)q-2} u2 limits at infinity",
      [](Context& c) {
        const SystemParams sy = make_system(3, 2, 1.35);
        const double N = sy.N, q = sy.q;
        SystemRun run = run_system_connection(
            c, {sy, SystemRegion::C1, -1, {FK::M0, 1, 2, FK::N0, 40}, {-lambda1(sy), -lambda2(sy)},
                {-(N - 1), -((N - 1) * q - 1)}, {-1, -1}, true});
        attach_primitives(run.prof, Endpoint::infinity);
        check_u_sign(c, run.prof, 1);
        check_u_rates(c, run.prof, Endpoint::infinity, {-(N - 2), -((N - 1) * q - 2)});
        check_u_rates(c, run.prof, Endpoint::zero, {1 - lambda1(sy), 1 - lambda2(sy)});
        c.expect_true("both components unbounded at 0", 1 - lambda1(sy) < 0 && 1 - lambda2(sy) < 0);
        c.artifact("profile", thin(to_csv(run.prof)));
      });

  add("thsou.D1", "thsou", "D1", "source: u singular at 0 like the particular solution, r^{N-2} u_i limits at infinity",
      [](Context& c) {
        const SystemParams sy = make_system(3, 2, 1.8);
        const double N = sy.N;
        SystemRun run = run_system_connection(
            c, {sy, SystemRegion::D1, -1, {FK::M0, 1, 2, FK::O, 40}, {-lambda1(sy), -lambda2(sy)},
                {-(N - 1), -(N - 1)}, {-1, -1}, true});
        attach_primitives(run.prof, Endpoint::infinity);
        check_u_sign(c, run.prof, 1);
        check_u_rates(c, run.prof, Endpoint::infinity, {-(N - 2), -(N - 2)});
        check_u_rates(c, run.prof, Endpoint::zero, {1 - lambda1(sy), 1 - lambda2(sy)});
        c.artifact("profile", thin(to_csv(run.prof)));
      });

  add("thabs.B", "thabs", "B", "absorption: r^{N-2} u_i limits at 0, particular decay at infinity",
      [](Context& c) {
        const SystemParams sy = make_system(3, 1.3, 1.0);
        const double N = sy.N;
        SystemRun run = run_system_connection(
            c, {sy, SystemRegion::B, -1, {FK::M0, -1, 4, FK::O, 40}, {-(N - 1), -(N - 1)},
                {-lambda1(sy), -lambda2(sy)}, {1, 1}, true});
        attach_primitives(run.prof, Endpoint::infinity);
        // u = -int_r^inf u' < 0; the absorption solution is -u.
        check_u_sign(c, run.prof, -1);
        check_u_rates(c, run.prof, Endpoint::zero, {-(N - 2), -(N - 2)});
        check_u_rates(c, run.prof, Endpoint::infinity, {1 - lambda1(sy), 1 - lambda2(sy)});
        c.artifact("profile", thin(to_csv(run.prof)));
      });

  add("thall.bounded", "thall", "D3", "absorption: bounded increasing u with a cusp at 0 and finite limits",
      [](Context& c) {
        const SystemParams sy = make_system(3, 3, 2.5);
        const double N = sy.N;
        SystemRun run = run_system_connection(
            c, {sy, SystemRegion::D3, -1, {FK::M0, 1, 2, FK::O, 40}, {-lambda1(sy), -lambda2(sy)},
                {-(N - 1), -(N - 1)}, {-1, -1}, true});
        attach_primitives(run.prof, Endpoint::zero);
        // u = int_0^r u' < 0; the absorption solution is -u.
        check_u_sign(c, run.prof, -1);
        c.expect_true("cusp: |u'| unbounded at 0", lambda1(sy) > 0 && lambda2(sy) > 0);
        const std::size_t n = run.prof.size();
        std::size_t j = n - 1;
        while (j > 0 && run.prof.log_r[j] > run.prof.log_r.back() - std::log(10.0)) --j;
        for (int k = 0; k < 2; ++k) {
          const auto& u = k == 0 ? run.prof.u1 : run.prof.u2;
          c.expect_lt("u" + std::to_string(k + 1) + " settles: change over the last decade", rel_gap(u[n - 1], u[j]),
                      c.tol().limit);
          c.info("limit of u" + std::to_string(k + 1), u[n - 1]);
        }
        c.artifact("profile", thin(to_csv(run.prof)));
      });

  add("Dirac.B", "Dirac", "B", "source: r^{N-2} u_i -> c_i at 0", [](Context& c) {
    const SystemParams sy = make_system(3, 1.4, 0.9);
    c.params(to_json(sy));
    guard_region(c, sy, SystemRegion::B);
    guard_system_margin(c, sy);
    const ScalarParams sp = to_scalar(sy, -1);
    const Trajectory tr = integrate_trajectory(sp, {-1e-2, 1e-2}, 0, -40, leg_options(false));
    c.expect_lt("distance to O", std::hypot(tr.samples.front().s, tr.samples.front().z), c.tol().fixed_point);
    SystemProfileSamples prof = system_profile(sy, tr);
    check_signs(c, prof, {-1, -1});
    check_uprime_rates(c, prof, Endpoint::zero, {-(sy.N - 1), -(sy.N - 1)});
    integrate_primitives(prof, prof.size() - 1, 0, 0);
    prof.r.pop_back();  // u vanishes at the anchor
    prof.log_r.pop_back();
    prof.u1.pop_back();
    prof.u2.pop_back();
    check_u_sign(c, prof, 1);
    check_u_rates(c, prof, Endpoint::zero, {-(sy.N - 2), -(sy.N - 2)});
  });

  add("exterior.D1", "exterior", "D1", "source: r^{N-2} u_i -> c_i at infinity", [](Context& c) {
    const SystemParams sy = make_system(3, 2, 1.8);
    c.params(to_json(sy));
    guard_region(c, sy, SystemRegion::D1);
    guard_system_margin(c, sy);
    const ScalarParams sp = to_scalar(sy, -1);
    const Trajectory tr = integrate_trajectory(sp, {-1e-2, 1e-2}, 0, 40, leg_options(false));
    c.expect_lt("distance to O", std::hypot(tr.samples.back().s, tr.samples.back().z), c.tol().fixed_point);
    SystemProfileSamples prof = system_profile(sy, tr);
    check_signs(c, prof, {-1, -1});
    check_uprime_rates(c, prof, Endpoint::infinity, {-(sy.N - 1), -(sy.N - 1)});
    attach_primitives(prof, Endpoint::infinity);
    check_u_sign(c, prof, 1);
    check_u_rates(c, prof, Endpoint::infinity, {-(sy.N - 2), -(sy.N - 2)});
  });

  add("locsol.A2", "locsol", "A2", "local solutions near 0 from N0: u2' < 0, u1' of either sign",
      [](Context& c) {
        const SystemParams sy = make_system(3, 2, 1.07);
        const double N = sy.N, q = sy.q;
        for (int quad : {1, 2}) {
          const int eps = quad == 1 ? 1 : -1;
          SystemConnection k{sy, SystemRegion::A2, eps, {FK::N0, 1, quad, std::nullopt, 20},
                             {-(N - 1), -((N - 1) * q - 1)}, {kNaN, kNaN}, {eps, -1}, false};
          run_system_connection(c, k);
        }
      });

  add("limcas.q1", "limcas", "L1", "q = q1: log-corrected rates of u1', u2' at 0", [](Context& c) {
    const SystemParams sy = make_system(3, 2, 1);
    c.params(to_json(sy));
    guard_region(c, sy, SystemRegion::L1);
    const ScalarParams sp = to_scalar(sy, 1);
    c.expect_abs("q - qc of the scalar image", sp.q - *critical_exponents(sp).qc, 0, 1e-12);
    const PhasePoint a0 = fixed_point(sp, FK::A0).pos;
    const Trajectory tr = free_run(sp, near_point(a0, -1e-2 / (sp.p - 1), 1e-2), -1, kLogSpan);
    const SystemProfileSamples prof = system_profile(sy, tr);
    const double N = sy.N, p = sy.p, q = sy.q, m = p * q - 1;
    check_log_law(c, "u1'", log_fit(prof.log_r, prof.log_abs_u1p, Endpoint::zero), -((N - 1) * p - 1), -p / m);
    check_log_law(c, "u2'", log_fit(prof.log_r, prof.log_abs_u2p, Endpoint::zero), -(N - 1), -1 / m);
    check_signs(c, prof, {1, -1});
  });

  return cat;
}

}  // namespace

const std::vector<Scenario>& scenario_catalog() {
  static const std::vector<Scenario> cat = build_catalog();
  return cat;
}

}  // namespace hh
