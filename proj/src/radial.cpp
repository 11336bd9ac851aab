#include "hh/radial.hpp"

#include <algorithm>
#include <cmath>

#include "hh/closedform.hpp"
#include "hh/ode.hpp"

namespace hh {

namespace {

double sgn(double x) { return (x > 0) - (x < 0); }

RadialStop from_status(OdeStatus st) {
  switch (st) {
    case OdeStatus::step_underflow: return RadialStop::step_underflow;
    case OdeStatus::max_steps: return RadialStop::max_steps;
    default: return RadialStop::r_end;
  }
}

}  // namespace

std::string to_string(RadialStop s) {
  switch (s) {
    case RadialStop::r_end: return "r_end";
    case RadialStop::vanished: return "vanished";
    case RadialStop::blow_up: return "blow_up";
    case RadialStop::step_underflow: return "step_underflow";
    case RadialStop::max_steps: return "max_steps";
  }
  return "?";
}

std::string to_string(BehaviorLabel b) {
  switch (b) {
    case BehaviorLabel::particular_like: return "particular_like";
    case BehaviorLabel::const_plus_sigma_power: return "const_plus_sigma_power";
    case BehaviorLabel::const_plus_harmonic_power: return "const_plus_harmonic_power";
    case BehaviorLabel::harmonic_decay: return "harmonic_decay";
    case BehaviorLabel::log_power: return "log_power";
    case BehaviorLabel::log_linear: return "log_linear";
    case BehaviorLabel::vanishing_zero: return "vanishing_zero";
    case BehaviorLabel::blow_up_finite_r: return "blow_up_finite_r";
    case BehaviorLabel::unclassified: return "unclassified";
  }
  return "?";
}

RadialScalarResult integrate_radial_scalar(const ScalarParams& sp, double r0, double w0,
                                           double wp0, double r1, const RadialOptions& opts) {
  if (!(r0 > 0) || !(r1 > 0) || !(w0 > 0)) throw InvalidParams("radial IVP needs r0, r1, w0 > 0");
  const double N = sp.N, p = sp.p, q = sp.q, sg = sp.sigma, eps = sp.eps;
  const double t0 = std::log(r0), t1 = std::log(r1);
  const double dir = t1 >= t0 ? 1 : -1;
  const double G0 = std::pow(r0, N - 1) * std::pow(std::abs(wp0), p - 1) * sgn(wp0);
  // State (ln w, G / Gs).
  const double Gs = G0 != 0 ? std::abs(G0) : std::pow(r0, N + sg) * std::pow(w0, q);

  auto wprime = [&](double t, double g) {
    if (g == 0) return 0.0;
    return sgn(g) * std::exp((std::log(std::abs(g) * Gs) + (1 - N) * t) / (p - 1));
  };
  auto field = [&](double tau, const Vec<2>& y) -> Vec<2> {
    const double t = dir * tau;
    const double wp = wprime(t, y[1]);
    const double dlw = std::exp(t - y[0]) * wp;
    const double dG = -eps * std::exp((N + sg) * t + q * y[0]) / Gs;
    return {dir * dlw, dir * dG};
  };

  RadialScalarResult res;
  std::vector<Vec<2>> ys;
  std::vector<double> ts;
  auto obs = [&](double tau, const Vec<2>& y, const Vec<2>& dyt) {
    ts.push_back(dir * tau);
    ys.push_back(y);
    if (y[0] < -700 || std::abs(dyt[0]) > 1e8) {
      res.stop = RadialStop::vanished;
      return false;
    }
    if (y[0] > std::log(opts.blowup)) {
      res.stop = RadialStop::blow_up;
      return false;
    }
    return true;
  };
  OdeOptions o;
  o.rtol = opts.rtol;
  o.atol = opts.atol;
  o.max_steps = opts.max_steps;
  const OdeStatus st = dopri5<2>(field, dir * t0, Vec<2>{std::log(w0), G0 / Gs}, dir * t1, o, obs);
  if (st != OdeStatus::stopped) res.stop = from_status(st);
  // A step collapse after w has grown by 1e3 is a finite-radius singularity.
  if (res.stop == RadialStop::step_underflow && ys.back()[0] - std::log(w0) > std::log(1e3))
    res.stop = RadialStop::blow_up;

  if (dir < 0) {
    std::reverse(ts.begin(), ts.end());
    std::reverse(ys.begin(), ys.end());
  }
  auto& pr = res.prof;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const double wp = wprime(t, ys[i][1]);
    pr.log_r.push_back(t);
    pr.log_w.push_back(ys[i][0]);
    pr.log_abs_wprime.push_back(wp == 0 ? -std::numeric_limits<double>::infinity()
                                        : std::log(std::abs(wp)));
    pr.r.push_back(std::exp(t));
    pr.w.push_back(std::exp(ys[i][0]));
    pr.wprime.push_back(wp);
  }
  res.r_final = std::exp(dir > 0 ? ts.back() : ts.front());
  return res;
}

RadialSystemResult integrate_radial_system(const SystemParams& s, double r0, double u1p0,
                                           double u2p0, double r1, const RadialOptions& opts) {
  if (!(r0 > 0) || !(r1 > 0)) throw InvalidParams("radial IVP needs r0, r1 > 0");
  const double N = s.N, p = s.p, q = s.q;
  const double t0 = std::log(r0), t1 = std::log(r1);
  const double dir = t1 >= t0 ? 1 : -1;
  const double rn = std::pow(r0, N - 1);
  const double W = std::max({std::abs(u1p0), std::abs(u2p0), 1e-300}) * rn;
  // State (w1/W, w2/W, u1, u2) in t = ln r.
  auto field = [&](double tau, const Vec<4>& y) -> Vec<4> {
    const double t = dir * tau;
    const double r = std::exp(t);
    const double f1 = std::exp(t * (1 + (N - 1) * (1 - p))) * std::pow(W, p - 1) *
                      std::pow(std::abs(y[1]), p);
    const double f2 = std::exp(t * (1 + (N - 1) * (1 - q))) * std::pow(W, q - 1) *
                      std::pow(std::abs(y[0]), q);
    const double g = std::pow(r, 2 - N) * W;
    return {dir * f1, dir * f2, -dir * g * y[0], -dir * g * y[1]};
  };

  RadialSystemResult res;
  std::vector<Vec<4>> ys;
  std::vector<double> ts;
  auto obs = [&](double tau, const Vec<4>& y, const Vec<4>&) {
    if (!ys.empty()) {
      if (sgn(y[0]) != sgn(ys.back()[0])) ++res.sign_changes_u1p;
      if (sgn(y[1]) != sgn(ys.back()[1])) ++res.sign_changes_u2p;
    }
    ts.push_back(dir * tau);
    ys.push_back(y);
    if (std::max(std::abs(y[0]), std::abs(y[1])) > opts.blowup) {
      res.stop = RadialStop::blow_up;
      return false;
    }
    return true;
  };
  OdeOptions o;
  o.rtol = opts.rtol;
  o.atol = opts.atol;
  o.max_steps = opts.max_steps;
  const Vec<4> y0{-rn * u1p0 / W, -rn * u2p0 / W, 0, 0};
  const OdeStatus st = dopri5<4>(field, dir * t0, y0, dir * t1, o, obs);
  if (st != OdeStatus::stopped) res.stop = from_status(st);
  if (res.stop == RadialStop::step_underflow &&
      std::max(std::abs(ys.back()[0]), std::abs(ys.back()[1])) > 1e3)
    res.stop = RadialStop::blow_up;

  if (dir < 0) {
    std::reverse(ts.begin(), ts.end());
    std::reverse(ys.begin(), ys.end());
  }
  auto& pr = res.prof;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = std::exp(ts[i]);
    const double k = -std::pow(r, 1 - N) * W;
    pr.r.push_back(r);
    pr.u1p.push_back(k * ys[i][0]);
    pr.u2p.push_back(k * ys[i][1]);
    pr.u1.push_back(ys[i][2]);
    pr.u2.push_back(ys[i][3]);
  }
  res.r_final = std::exp(dir > 0 ? ts.back() : ts.front());
  return res;
}

RadialSeed seed_from_asymptotics(const ScalarParams& sp, BehaviorLabel label, double r, double c,
                                 double k) {
  const double N = sp.N, p = sp.p, q = sp.q, sg = sp.sigma;
  RadialSeed sd;
  switch (label) {
    case BehaviorLabel::particular_like: {
      const auto ws = hh_particular(sp);
      if (!ws) throw InvalidParams("particular solution undefined for these parameters");
      sd.w = ws->w(r);
      sd.wp = ws->wprime(r);
      return sd;
    }
    case BehaviorLabel::const_plus_sigma_power: {
      if (std::abs(N + sg) < kDenTol || std::abs(p + sg) < kDenTol)
        throw InvalidParams("const_plus_sigma_power needs N + sigma != 0 and p + sigma != 0");
      const double G = -sp.eps * std::pow(c, q) * std::pow(r, N + sg) / (N + sg);
      sd.wp = sgn(G) * std::pow(std::abs(G) * std::pow(r, 1 - N), 1 / (p - 1));
      sd.w = c + sd.wp * r * (p - 1) / (p + sg);
      return sd;
    }
    case BehaviorLabel::const_plus_harmonic_power: {
      if (std::abs(p - N) < kDenTol) throw InvalidParams("const_plus_harmonic_power needs p != N");
      sd.wp = k * std::pow(r, -(N - 1) / (p - 1));
      sd.w = c + sd.wp * r * (p - 1) / (p - N);
      return sd;
    }
    case BehaviorLabel::harmonic_decay: {
      const double a = (N - p) / (p - 1);
      sd.w = k * std::pow(r, -a);
      sd.wp = -a * sd.w / r;
      return sd;
    }
    default:
      throw InvalidParams("no radial seed for behaviour " + to_string(label));
  }
}

BehaviorReport classify_behavior(const ScalarParams& sp, const ProfileSamples& prof, Endpoint end,
                                 const ClassifyOptions& opts) {
  const double N = sp.N, p = sp.p, sg = sp.sigma;
  const double gamma = (p + sg) / (sp.q + 1 - p);
  const double tol = opts.rel_tol;
  BehaviorReport rep;
  rep.fit_w = rate_fit(prof, end, opts.window);
  rep.fit_wp = rate_fit_derivative(prof, end, opts.window);

  std::vector<BehaviorLabel> hits;
  const RateFit& fw = rep.fit_w;
  if (fw.beta_fitted) {
    if (std::abs(fw.alpha) <= tol && std::abs(fw.beta - 1) <= tol) hits.push_back(BehaviorLabel::log_linear);
    else hits.push_back(BehaviorLabel::log_power);
  } else if (std::abs(fw.alpha) <= tol) {
    const RateFit& fd = rep.fit_wp;
    if (fd.beta_fitted) hits.push_back(BehaviorLabel::log_power);
    if (rate_matches(fd.alpha, (sg + 1) / (p - 1), tol))
      hits.push_back(BehaviorLabel::const_plus_sigma_power);
    if (rate_matches(fd.alpha, -(N - 1) / (p - 1), tol))
      hits.push_back(BehaviorLabel::const_plus_harmonic_power);
  }
  if (!fw.beta_fitted) {
    if (rate_matches(fw.alpha, -gamma, tol) && std::abs(gamma) > tol)
      hits.push_back(BehaviorLabel::particular_like);
    if (rate_matches(fw.alpha, -(N - p) / (p - 1), tol) && std::abs(N - p) > tol * (p - 1))
      hits.push_back(BehaviorLabel::harmonic_decay);
  }
  if (!hits.empty()) {
    rep.label = hits.front();
    rep.also_matches.assign(hits.begin() + 1, hits.end());
  }
  return rep;
}

double osserman_sup(const ScalarParams& sp, const ProfileSamples& prof, double t_lo, double t_hi) {
  const double gamma = (sp.p + sp.sigma) / (sp.q + 1 - sp.p);
  double best = 0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double t = prof.has_logs() ? prof.log_r[i] : std::log(prof.r[i]);
    if (t < t_lo || t > t_hi) continue;
    const double lw = prof.has_logs() ? prof.log_w[i] : std::log(prof.w[i]);
    best = std::max(best, std::exp(gamma * t + lw));
  }
  return best;
}

std::array<double, 2> gradient_sup(const SystemParams& s, const SystemProfileSamples& prof,
                                   double t_lo, double t_hi) {
  const double m = s.p * s.q - 1;
  const double l1 = (s.p + 1) / m, l2 = (s.q + 1) / m;
  std::array<double, 2> best{0, 0};
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double t = prof.has_logs() ? prof.log_r[i] : std::log(prof.r[i]);
    if (t < t_lo || t > t_hi) continue;
    const double a = prof.has_logs() ? prof.log_abs_u1p[i] : std::log(std::abs(prof.u1p[i]));
    const double b = prof.has_logs() ? prof.log_abs_u2p[i] : std::log(std::abs(prof.u2p[i]));
    best[0] = std::max(best[0], std::exp(l1 * t + a));
    best[1] = std::max(best[1], std::exp(l2 * t + b));
  }
  return best;
}

std::vector<double> pohozaev_energy(const ScalarParams& sp, const ProfileSamples& prof,
                                    double theta) {
  const double N = sp.N, p = sp.p, q = sp.q;
  std::vector<double> F(prof.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = prof.r[i], w = prof.w[i], wp = prof.wprime[i];
    const double a = std::pow(std::abs(wp), p);
    F[i] = std::pow(r, N) * ((p - 1) / p * a +
                             sp.eps * std::pow(r, sp.sigma) * std::pow(w, q + 1) / (q + 1) +
                             theta * w * std::pow(std::abs(wp), p - 2) * wp / r);
  }
  return F;
}

void integrate_primitives(SystemProfileSamples& prof, std::size_t anchor, double u1a, double u2a) {
  const std::size_t n = prof.size();
  if (anchor >= n) throw InvalidParams("anchor index out of range");
  prof.u1.assign(n, 0.0);
  prof.u2.assign(n, 0.0);
  prof.u1[anchor] = u1a;
  prof.u2[anchor] = u2a;
  auto step = [&](std::size_t i, std::size_t j) {
    // Trapezoid from i to j in t = ln r on du/dt = r u'.
    const double dt = std::log(prof.r[j]) - std::log(prof.r[i]);
    prof.u1[j] = prof.u1[i] + 0.5 * dt * (prof.r[i] * prof.u1p[i] + prof.r[j] * prof.u1p[j]);
    prof.u2[j] = prof.u2[i] + 0.5 * dt * (prof.r[i] * prof.u2p[i] + prof.r[j] * prof.u2p[j]);
  };
  for (std::size_t j = anchor + 1; j < n; ++j) step(j - 1, j);
  for (std::size_t j = anchor; j-- > 0;) step(j + 1, j);
}

}  // namespace hh
