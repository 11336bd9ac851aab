// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here
// and independent of the verify defaults. Exit status 1 if any line fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hh/closedform.hpp"
#include "hh/dynsys.hpp"
#include "hh/exponents.hpp"
#include "hh/radial.hpp"
#include "hh/residual.hpp"
#include "hh/verify.hpp"

using namespace hh;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void line(int n, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s  C%-2d %s: %s\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  failures += !ok;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const ScenarioResult* find(const VerifyReport& rep, const std::string& id) {
  for (const auto& r : rep.results)
    if (r.id == id) return &r;
  return nullptr;
}

const Metric* metric(const ScenarioResult* r, const std::string& name) {
  if (!r) return nullptr;
  for (const auto& m : r->metrics)
    if (m.name == name) return &m;
  return nullptr;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ------------------------------------------------------------------ 1
void c1() {
  const auto t0 = Clock::now();
  const ScalarParams s{3, 2, 5, 0, 1};
  const auto r = log_grid(1e-2, 1e2, 200);
  double worst = 0, d1 = 0;
  bool d_ok = true;
  for (double c : {0.5, 1.0, 2.0}) {
    const GroundState g = hh_ground_state(s, c);
    d_ok = d_ok && rel(g.d, std::pow(c, 4) / 3) < 1e-14;
    if (c == 1.0) d1 = g.d;
    worst = std::max(worst, residual_scalar(s, g.sample(r)).max_rel);
  }
  const double dt = seconds_since(t0);
  const bool ok = worst < 1e-6 && d_ok && std::abs(d1 - 1.0 / 3) < 1e-15 && dt < 1;
  line(1, ok, "ground-state residual",
       "max rel " + fmt("%.2e", worst) + " (< 1e-6), d(c=1) = " + fmt("%.17g", d1) + ", " +
           fmt("%.3f", dt) + " s (< 1 s)");
}

// ------------------------------------------------------------------ 2
void c2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0, 1);
  constexpr int per_region = 10;
  std::map<std::string, int> scalar_n, system_n;
  double worst = 0;
  for (int it = 0; it < 200000; ++it) {
    ScalarParams s{1.2 + 5 * U(rng), 1.1 + 4 * U(rng), 0, -8 + 9 * U(rng), U(rng) < 0.5 ? 1 : -1};
    s.q = s.p - 1 + 0.1 + 5 * U(rng);
    const ScalarRegion reg = classify(s);
    if (is_boundary(reg) || scalar_n[to_string(reg)] >= per_region) continue;
    const auto h = hh_particular(s);
    if (!h) continue;
    ++scalar_n[to_string(reg)];
    worst = std::max(worst, residual_scalar(s, h->sample(log_grid(1e-2, 1e2, 200))).max_rel);
  }
  for (int it = 0; it < 200000; ++it) {
    const double N = 2.2 + 4 * U(rng), p = 0.2 + 6 * U(rng), q = 0.2 + 6 * U(rng);
    if (p * q <= 1.05) continue;
    SystemParams sy;
    try {
      sy = make_system(N, p, q);
    } catch (const InvalidParams&) {
      continue;
    }
    const SystemRegion reg = classify(sy);
    if (is_boundary(reg) || system_n[to_string(reg)] >= per_region) continue;
    const auto sp = system_particular(sy, 0.3, -0.7);
    if (!sp) continue;
    ++system_n[to_string(reg)];
    worst = std::max(worst,
                     residual_system(sy, sp->sample(log_grid(1e-2, 1e2, 200))).max_rel());
  }
  const double dt = seconds_since(t0);
  bool full = scalar_n.size() == 6 && system_n.size() == 10;
  std::string counts;
  for (const auto* m : {&scalar_n, &system_n})
    for (const auto& [k, v] : *m) {
      full = full && v == per_region;
      counts += " " + k + ":" + std::to_string(v);
    }
  line(2, full && worst < 1e-8 && dt < 5, "particular-solution residuals",
       "max rel " + fmt("%.2e", worst) + " (< 1e-8), " + fmt("%.2f", dt) + " s (< 5 s), sets" +
           counts);
}

// ------------------------------------------------------------------ 3
void c3() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    ScalarParams s{1.2 + 4 * U(rng), 1.1 + 3 * U(rng), 0, -5 + 6 * U(rng), U(rng) < 0.5 ? 1 : -1};
    s.q = s.p - 1 + 0.2 + 4 * U(rng);
    worst = std::max(worst, eigen_fd_mismatch(s));
  }
  line(3, worst < 1e-6, "eigenvalues vs finite-difference Jacobian",
       "100 sets, worst gap " + fmt("%.2e", worst) + " (< 1e-6)");
}

// ------------------------------------------------------------------ 4
void c4(const VerifyReport& rep) {
  const ScenarioResult* r = find(rep, "orange.gs");
  const Metric* m0 = metric(r, "closest approach to M0");
  const Metric* a0 = metric(r, "distance to A0");
  const Metric* gap = metric(r, "sup-norm gap to the explicit ground state on [0.1,10]");
  if (!m0 || !a0 || !gap) {
    line(4, false, "ground-state connection", "orange.gs metrics missing");
    return;
  }
  const bool reaches_m0 = m0->value < 1e-3;
  const bool profile = gap->value < 0.01;
  line(4, reaches_m0 && profile, "ground-state connection",
       "closest approach to M0 " + fmt("%.4f", m0->value) + " (< 1e-3), profile sup-norm gap " +
           fmt("%.2e", gap->value) + " (< 1%); the orbit ends at A0 (distance " +
           fmt("%.1e", a0->value) + "), M0 is a centre at q = qS");
}

// ------------------------------------------------------------------ 5
void c5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  bool regions = true;
  for (int i = 0; i < 5; ++i) {
    ScalarParams s{3 + U(rng), 1.5 + U(rng), 0, -0.5 * U(rng), 1};
    const ScalarExponents e = critical_exponents(s);
    s.q = *e.qc + (*e.qS - *e.qc) * (0.3 + 0.4 * U(rng));
    const RegionTransform T = region_transform(s, -1);
    regions = regions && classify(s) == ScalarRegion::A && classify(T.image) == ScalarRegion::F;
    // w_hat(1/r) = C w(r), so w_hat'(1/r) = -C r^2 w'(r).
    const double w0 = 1, wp0 = -0.2 - 0.3 * U(rng);
    for (double r1 : {1.5, 2.0, 3.0, 4.0}) {
      const RadialScalarResult a = integrate_radial_scalar(s, 1, w0, wp0, r1);
      const RadialScalarResult b = integrate_radial_scalar(T.image, 1, T.C * w0, -T.C * wp0, 1 / r1);
      if (a.stop != RadialStop::r_end || b.stop != RadialStop::r_end) {
        worst = INFINITY;
        continue;
      }
      const double wa = a.prof.w.back(), wb = b.prof.w.front();
      worst = std::max(worst, rel(wb, T.C * wa));
    }
  }
  line(5, regions && worst < 1e-8, "region transform equivariance",
       "A vs F under lambda = -1, 5 sets, worst pointwise gap " + fmt("%.2e", worst) + " (< 1e-8)");
}

// ------------------------------------------------------------------ 6
void c6(const VerifyReport& rep) {
  const ScenarioResult* r = find(rep, "caspq.first_integral");
  const Metric* drift = metric(r, "relative drift of C on [0.5,5]");
  const Metric* finite = metric(r, "C != 0 solution ends at finite r > 0");
  const bool ok = drift && finite && drift->value < 1e-8 && finite->ok;
  line(6, ok, "first integral for p = q",
       drift ? "drift " + fmt("%.2e", drift->value) + " (< 1e-8), finite-r end " +
                   (finite && finite->ok ? "yes" : "no")
             : "caspq metrics missing");
}

// ------------------------------------------------------------------ 7
void c7(const VerifyReport& rep) {
  struct Case {
    const char* id;
    const char* metric;
    std::function<double(const ScalarParams&)> predicted;
  };
  const Case cases[] = {
      {"link.i", "at inf: exponent of w",
       [](const ScalarParams& s) { return -(s.p + s.sigma) / (s.q + 1 - s.p); }},
      {"link.ii", "at 0: exponent of w'",
       [](const ScalarParams& s) { return (s.sigma + 1) / (s.p - 1); }},
      {"link.iii", "at 0: exponent of w'",
       [](const ScalarParams& s) { return -(s.N - 1) / (s.p - 1); }},
      {"link.iv", "at inf: exponent of w",
       [](const ScalarParams& s) { return -(s.N - s.p) / (s.p - 1); }},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const ScenarioResult* r = find(rep, c.id);
    const Metric* m = metric(r, c.metric);
    if (!m) {
      ok = false;
      detail += std::string(" ") + c.id + ": missing";
      continue;
    }
    const auto& p = r->params;
    const ScalarParams s{p.at("N"), p.at("p"), p.at("q"), p.at("sigma"), p.at("eps")};
    const double want = c.predicted(s), gap = rel(m->value, want);
    ok = ok && gap < 0.02;
    detail += std::string(" ") + c.id + " " + fmt("%.4f", m->value) + " vs " + fmt("%.4f", want);
  }
  line(7, ok, "behaviour dictionary exponents (2%)", detail.substr(1));
}

// ------------------------------------------------------------------ 8
void c8(const VerifyReport& rep) {
  const std::vector<std::pair<const char*, const char*>> cases = {
      {"qccrit.zero", "w"},       {"qccrit.infinity", "w"}, {"sigmap.infinity", "w"},
      {"sigmap.zero", "w"},       {"sigman.infinity", "w'"}, {"sigman.hoc", "w'"},
      {"pegaln.zero", "w"},       {"pegaln.global", "w"},   {"pnsigma.flai", "w"}};
  bool ok = true;
  double worst = 0;
  for (const auto& [id, what] : cases) {
    const ScenarioResult* r = find(rep, id);
    const Metric* det = metric(r, std::string(what) + ": log correction detected");
    const Metric* beta = metric(r, std::string(what) + ": log exponent");
    if (!det || !beta || !det->ok) {
      ok = false;
      continue;
    }
    worst = std::max(worst, rel(beta->value, beta->expected));
  }
  // Two exponents pinned here from the parameters alone: -1/(q-p+1) for the
  // critical q at 0 and -(p-1)/(q-p+1) for sigma = -p at infinity.
  bool pinned = true;
  for (const auto& [id, f] :
       std::vector<std::pair<const char*, double (*)(double, double)>>{
           {"qccrit.zero", [](double p, double q) { return -1 / (q - p + 1); }},
           {"sigmap.infinity", [](double p, double q) { return -(p - 1) / (q - p + 1); }}}) {
    const ScenarioResult* r = find(rep, id);
    const Metric* b = metric(r, "w: log exponent");
    if (!b) {
      pinned = false;
      continue;
    }
    const ScalarParams s{r->params.at("N"), r->params.at("p"), r->params.at("q"),
                         r->params.at("sigma"), r->params.at("eps")};
    pinned = pinned && rel(b->value, f(s.p, s.q)) < 0.05;
  }
  const Metric* flai = metric(find(rep, "pnsigma.flai"), "explicit family residual");
  const bool flai_ok = flai && flai->value < 1e-8;
  line(8, ok && pinned && flai_ok && worst < 0.05, "logarithmic limit cases",
       std::to_string(cases.size()) + " scenarios detect beta != 0, worst log-exponent gap " +
           fmt("%.2e", worst) + " (< 5%), explicit family residual " +
           fmt("%.2e", flai ? flai->value : NAN) + " (< 1e-8)");
}

// ------------------------------------------------------------------ 9
void c9(const VerifyReport& rep) {
  int checked = 0, solutions = 0;
  double worst = 0;
  bool ok = true;
  for (const auto& r : rep.results) {
    bool any = false;
    for (const auto& m : r.metrics) {
      const bool gain = m.name.find("gain when the window doubles") != std::string::npos;
      const bool fin = m.name.size() > 7 && m.name.compare(m.name.size() - 7, 7, " finite") == 0;
      if (fin) ok = ok && m.ok;
      if (!gain) continue;
      any = true;
      ++checked;
      worst = std::max(worst, m.value);
      ok = ok && std::isfinite(m.value) && m.value < 0.05;
    }
    solutions += any;
  }
  line(9, ok && checked > 0, "Osserman and gradient bounds",
       std::to_string(solutions) + " global solutions, " + std::to_string(checked) +
           " sups, worst gain on doubling " + fmt("%.2e", worst) + " (< 5%)");
}

// ------------------------------------------------------------------ 10
void c10(const VerifyReport& rep) {
  const bool ok = rep.results.size() >= 24 && rep.failed == 0 && rep.runtime_s < 120;
  std::string bad;
  for (const auto& r : rep.results)
    if (r.status == Status::fail) bad += " " + r.id;
  line(10, ok, "full verify run",
       std::to_string(rep.results.size()) + " scenarios (>= 24), " + std::to_string(rep.passed) +
           " pass, " + std::to_string(rep.failed) + " fail, " + std::to_string(rep.inconclusive) +
           " inconclusive, " + fmt("%.2f", rep.runtime_s) + " s (< 120 s)" +
           (bad.empty() ? "" : ";" + bad));
}

void guarded(int n, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    line(n, false, "exception", e.what());
  }
}

}  // namespace

int main() {
  VerifyConfig cfg;
  const VerifyReport rep = run_all(cfg);
  guarded(1, c1);
  guarded(2, c2);
  guarded(3, c3);
  guarded(4, [&] { c4(rep); });
  guarded(5, c5);
  guarded(6, [&] { c6(rep); });
  guarded(7, [&] { c7(rep); });
  guarded(8, [&] { c8(rep); });
  guarded(9, [&] { c9(rep); });
  guarded(10, [&] { c10(rep); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
