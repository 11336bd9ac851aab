#include "hh/dynsys.hpp"

#include <algorithm>
#include <cmath>

#include "hh/ode.hpp"

namespace hh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sgn(double x) { return (x > 0) - (x < 0); }

// Keeps the sign when |x| underflows in logarithmic coordinates.
double signed_exp(double sign, double l) {
  return sign * std::max(std::exp(l), std::numeric_limits<double>::denorm_min());
}

using C2 = std::array<std::complex<double>, 2>;

// Null vector of J - lambda I, unit norm.
C2 null_vector(const Mat2& J, std::complex<double> lam) {
  const C2 a{J[0][1], lam - J[0][0]};
  const C2 b{lam - J[1][1], J[1][0]};
  const double na = std::norm(a[0]) + std::norm(a[1]);
  const double nb = std::norm(b[0]) + std::norm(b[1]);
  C2 v = na >= nb ? a : b;
  double n = std::sqrt(std::max(na, nb));
  if (n == 0) {
    // J = lambda I: every direction is an eigenvector.
    return {1.0, 0.0};
  }
  return {v[0] / n, v[1] / n};
}

Stability classify_stability(const C2& ev, double tol) {
  const double scale = std::max({1.0, std::abs(ev[0]), std::abs(ev[1])});
  const double r0 = ev[0].real(), r1 = ev[1].real();
  const bool complex_pair = std::abs(ev[0].imag()) > tol * scale;
  if (complex_pair) {
    if (std::abs(r0) <= tol * scale) return Stability::degenerate;
    return r0 > 0 ? Stability::spiral_source : Stability::spiral_sink;
  }
  if (std::abs(r0) <= tol * scale || std::abs(r1) <= tol * scale) return Stability::degenerate;
  if (r0 > 0 && r1 > 0) return Stability::source;
  if (r0 < 0 && r1 < 0) return Stability::sink;
  return Stability::saddle;
}

struct Coeffs {
  double a, b, pm1, q;  // a = (p-N)/(p-1), b = N + sigma
};

Coeffs coeffs(const ScalarParams& sp) {
  return {(sp.p - sp.N) / (sp.p - 1), sp.N + sp.sigma, sp.p - 1, sp.q};
}

}  // namespace

PhasePoint vector_field(const ScalarParams& sp, PhasePoint x) {
  const Coeffs c = coeffs(sp);
  return {x.s * (c.a + x.s + x.z / c.pm1), x.z * (c.b - c.q * x.s - x.z)};
}

PhasePoint vector_field(const SystemParams& sp, PhasePoint x) {
  const double N = sp.N, p = sp.p, q = sp.q;
  return {x.s * (N - (N - 1) * p + x.s + p * x.z), x.z * (N - (N - 1) * q - q * x.s - x.z)};
}

Mat2 jacobian(const ScalarParams& sp, PhasePoint x) {
  const Coeffs c = coeffs(sp);
  Mat2 J;
  J[0][0] = c.a + 2 * x.s + x.z / c.pm1;
  J[0][1] = x.s / c.pm1;
  J[1][0] = -c.q * x.z;
  J[1][1] = c.b - c.q * x.s - 2 * x.z;
  return J;
}

int quadrant(PhasePoint x) {
  if (x.s > 0 && x.z > 0) return 1;
  if (x.s < 0 && x.z > 0) return 2;
  if (x.s < 0 && x.z < 0) return 3;
  if (x.s > 0 && x.z < 0) return 4;
  return 0;
}

std::vector<FixedPointInfo> fixed_points(const ScalarParams& sp, double tol) {
  const double N = sp.N, p = sp.p, q = sp.q, sg = sp.sigma;
  const double gamma = (p + sg) / (q + 1 - p);
  std::vector<FixedPointInfo> out(4);

  out[0].kind = FixedPointKind::M0;
  out[0].pos = {gamma, N - p - (p - 1) * gamma};
  {
    const double s0 = out[0].pos.s, z0 = out[0].pos.z;
    const double T = s0 - z0;
    const double D = (q - p + 1) / (p - 1) * s0 * z0;
    const std::complex<double> disc = std::sqrt(std::complex<double>(T * T - 4 * D));
    out[0].eigenvalues = {(T + disc) / 2.0, (T - disc) / 2.0};
  }

  out[1].kind = FixedPointKind::N0;
  out[1].pos = {0, N + sg};
  out[1].eigenvalues = {(p + sg) / (p - 1), -(N + sg)};

  out[2].kind = FixedPointKind::A0;
  out[2].pos = {(N - p) / (p - 1), 0};
  out[2].eigenvalues = {(N - p) / (p - 1), N + sg - q * (N - p) / (p - 1)};

  out[3].kind = FixedPointKind::O;
  out[3].pos = {0, 0};
  out[3].eigenvalues = {(p - N) / (p - 1), N + sg};

  for (auto& f : out) {
    const Mat2 J = jacobian(sp, f.pos);
    for (int k = 0; k < 2; ++k) f.eigenvectors[k] = null_vector(J, f.eigenvalues[k]);
    const auto& v = f.eigenvectors;
    const double det = std::abs(v[0][0] * v[1][1] - v[0][1] * v[1][0]);
    f.defective = det < 1e-8;
    if (f.defective && std::abs(J[0][1]) + std::abs(J[1][0]) == 0) {
      f.eigenvectors[0] = {1.0, 0.0};
      f.eigenvectors[1] = {0.0, 1.0};
      f.defective = false;
    }
    f.stability = classify_stability(f.eigenvalues, tol);
    f.quadrant = quadrant(f.pos);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (i == j) continue;
      const double d = std::hypot(out[i].pos.s - out[j].pos.s, out[i].pos.z - out[j].pos.z);
      const double sc = std::max({1.0, std::abs(out[i].pos.s), std::abs(out[i].pos.z)});
      if (d <= tol * sc) out[i].coincident_with.push_back(out[j].kind);
    }
  return out;
}

FixedPointInfo fixed_point(const ScalarParams& sp, FixedPointKind kind, double tol) {
  return fixed_points(sp, tol)[static_cast<int>(kind)];
}

std::string to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::M0: return "M0";
    case FixedPointKind::N0: return "N0";
    case FixedPointKind::A0: return "A0";
    case FixedPointKind::O: return "O";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::source: return "source";
    case Stability::sink: return "sink";
    case Stability::saddle: return "saddle";
    case Stability::spiral_source: return "spiral_source";
    case Stability::spiral_sink: return "spiral_sink";
    case Stability::degenerate: return "center_manifold_degenerate";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::t_end: return "t_end";
    case Termination::fixed_point_converged: return "fixed_point_converged";
    case Termination::quadrant_exit: return "quadrant_exit";
    case Termination::blow_up: return "blow_up";
    case Termination::step_underflow: return "step_underflow";
    case Termination::max_steps: return "max_steps";
  }
  return "?";
}

TrajectorySample Trajectory::at(double t) const {
  if (samples.empty()) return {};
  if (t <= samples.front().t) return samples.front();
  if (t >= samples.back().t) return samples.back();
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const TrajectorySample& s) { return v < s.t; });
  const std::size_t i1 = std::size_t(it - samples.begin()), i0 = i1 - 1;
  const double t0 = samples[i0].t, t1 = samples[i1].t;
  double yy[2];
  for (int k = 0; k < 2; ++k) yy[k] = hermite(t0, y[i0][k], dy[i0][k], t1, y[i1][k], dy[i1][k], t);
  TrajectorySample out;
  out.t = t;
  if (log_coords) {
    out.log_abs_s = yy[0];
    out.log_abs_z = yy[1];
    out.s = signed_exp(sign_s, yy[0]);
    out.z = signed_exp(sign_z, yy[1]);
  } else {
    out.s = yy[0];
    out.z = yy[1];
    out.log_abs_s = out.s == 0 ? kNegInf : std::log(std::abs(out.s));
    out.log_abs_z = out.z == 0 ? kNegInf : std::log(std::abs(out.z));
  }
  return out;
}

std::vector<TrajectorySample> Trajectory::resample(const std::vector<double>& t) const {
  std::vector<TrajectorySample> out;
  out.reserve(t.size());
  for (double x : t) out.push_back(at(x));
  return out;
}

Trajectory integrate_trajectory(const ScalarParams& sp, PhasePoint start, double t0, double t1,
                                const IntegrateOptions& opts) {
  const bool on_axis = start.s == 0 || start.z == 0;
  if (opts.coords == Coordinates::logarithmic && on_axis)
    throw InvalidParams("logarithmic coordinates need a start off the axes");
  Trajectory tr;
  tr.log_coords = opts.coords == Coordinates::logarithmic ||
                  (opts.coords == Coordinates::automatic && !on_axis);
  tr.direction = t1 >= t0 ? 1 : -1;
  tr.sign_s = int(sgn(start.s));
  tr.sign_z = int(sgn(start.z));
  tr.closest.fill(std::numeric_limits<double>::infinity());

  const Coeffs c = coeffs(sp);
  const double dir = tr.direction;
  const double ss = tr.sign_s, sz = tr.sign_z;
  const bool logc = tr.log_coords;

  auto decode = [&](const Vec<2>& y) -> PhasePoint {
    if (logc) return {signed_exp(ss, y[0]), signed_exp(sz, y[1])};
    return {y[0], y[1]};
  };
  auto field = [&](double, const Vec<2>& y) -> Vec<2> {
    const PhasePoint x = decode(y);
    if (logc) return {dir * (c.a + x.s + x.z / c.pm1), dir * (c.b - c.q * x.s - x.z)};
    const PhasePoint f = vector_field(sp, x);
    return {dir * f.s, dir * f.z};
  };

  const std::vector<FixedPointInfo> fps = fixed_points(sp);
  std::array<double, 4> entered;
  entered.fill(std::numeric_limits<double>::quiet_NaN());
  const double log_blowup = std::log(opts.blowup);
  const int q0 = quadrant(start);

  auto obs = [&](double tau, const Vec<2>& y, const Vec<2>& dyt) {
    const double t = dir * tau;
    const PhasePoint x = decode(y);
    TrajectorySample smp;
    smp.t = t;
    smp.s = x.s;
    smp.z = x.z;
    if (logc) {
      smp.log_abs_s = y[0];
      smp.log_abs_z = y[1];
    } else {
      smp.log_abs_s = x.s == 0 ? kNegInf : std::log(std::abs(x.s));
      smp.log_abs_z = x.z == 0 ? kNegInf : std::log(std::abs(x.z));
    }
    tr.samples.push_back(smp);
    tr.y.push_back({y[0], y[1]});
    tr.dy.push_back({dir * dyt[0], dir * dyt[1]});

    const bool blown = logc ? std::max(y[0], y[1]) > log_blowup
                            : std::max(std::abs(x.s), std::abs(x.z)) > opts.blowup;
    if (blown) {
      tr.reason = Termination::blow_up;
      return false;
    }
    if (!logc && q0 != 0 && quadrant(x) != q0) {
      tr.reason = Termination::quadrant_exit;
      return false;
    }
    for (std::size_t k = 0; k < fps.size(); ++k) {
      const double d = std::hypot(x.s - fps[k].pos.s, x.z - fps[k].pos.z);
      tr.closest[k] = std::min(tr.closest[k], d);
      if (d < opts.fp_tol) {
        if (std::isnan(entered[k])) entered[k] = tau;
        if (opts.stop_on_convergence && tau - entered[k] >= opts.dwell) {
          tr.reason = Termination::fixed_point_converged;
          tr.converged_to = fps[k].kind;
          return false;
        }
      } else {
        entered[k] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    return true;
  };

  Vec<2> y0;
  if (logc) y0 = {std::log(std::abs(start.s)), std::log(std::abs(start.z))};
  else y0 = {start.s, start.z};

  OdeOptions o;
  o.rtol = opts.rtol;
  o.atol = opts.atol;
  o.hmax = opts.max_step;
  o.max_steps = opts.max_steps;
  const OdeStatus st = dopri5<2>(field, dir * t0, y0, dir * t1, o, obs);
  if (st == OdeStatus::finished) tr.reason = Termination::t_end;
  else if (st == OdeStatus::step_underflow) tr.reason = Termination::step_underflow;
  else if (st == OdeStatus::max_steps) tr.reason = Termination::max_steps;

  if (tr.direction < 0) {
    std::reverse(tr.samples.begin(), tr.samples.end());
    std::reverse(tr.y.begin(), tr.y.end());
    std::reverse(tr.dy.begin(), tr.dy.end());
  }
  return tr;
}

PhasePoint eigen_seed(const FixedPointInfo& fp, int which, double delta, int quad) {
  const auto& v = fp.eigenvectors[which];
  const double vs = v[0].real(), vz = v[1].real();
  const PhasePoint plus{fp.pos.s + delta * vs, fp.pos.z + delta * vz};
  const PhasePoint minus{fp.pos.s - delta * vs, fp.pos.z - delta * vz};
  if (quadrant(plus) == quad) return plus;
  if (quadrant(minus) == quad) return minus;
  return plus;
}

ProfileSamples reconstruct_w(const ScalarParams& sp, const std::vector<TrajectorySample>& tr) {
  const double p = sp.p, q = sp.q;
  const double gamma = (p + sp.sigma) / (q + 1 - p);
  const double k = 1 / (q + 1 - p);
  ProfileSamples out;
  for (const auto& x : tr) {
    if (!std::isfinite(x.log_abs_s) || !std::isfinite(x.log_abs_z)) continue;
    if (sgn(x.s) * sgn(x.z) != sp.eps) throw InvalidParams("trajectory quadrant inconsistent with eps");
    const double lw = -gamma * x.t + k * ((p - 1) * x.log_abs_s + x.log_abs_z);
    const double lwp = -(gamma + 1) * x.t + k * (x.log_abs_z + q * x.log_abs_s);
    if (!out.log_r.empty() && x.t <= out.log_r.back()) continue;
    out.log_r.push_back(x.t);
    out.log_w.push_back(lw);
    out.log_abs_wprime.push_back(lwp);
    out.r.push_back(std::exp(x.t));
    out.w.push_back(std::exp(lw));
    out.wprime.push_back(-sgn(x.s) * std::exp(lwp));
  }
  return out;
}

SystemProfileSamples reconstruct_uprime(const SystemParams& s,
                                        const std::vector<TrajectorySample>& tr) {
  const double p = s.p, q = s.q, m = p * q - 1;
  SystemProfileSamples out;
  for (const auto& x : tr) {
    if (!std::isfinite(x.log_abs_s) || !std::isfinite(x.log_abs_z)) continue;
    if (!out.log_r.empty() && x.t <= out.log_r.back()) continue;
    const double l1 = (-(p + 1) * x.t + x.log_abs_s + p * x.log_abs_z) / m;
    const double l2 = (-(q + 1) * x.t + q * x.log_abs_s + x.log_abs_z) / m;
    out.log_r.push_back(x.t);
    out.log_abs_u1p.push_back(l1);
    out.log_abs_u2p.push_back(l2);
    out.r.push_back(std::exp(x.t));
    out.u1p.push_back(sgn(x.s) * std::exp(l1));
    out.u2p.push_back(-sgn(x.z) * std::exp(l2));
  }
  return out;
}

PhasePoint phase_point(const ScalarParams& sp, double r, double w, double wp) {
  PhasePoint x;
  x.s = -r * wp / w;
  x.z = wp == 0 ? 0
                : -sp.eps * std::pow(r, 1 + sp.sigma) * std::pow(w, sp.q) *
                      std::pow(std::abs(wp), -sp.p) * wp;
  return x;
}

PhasePoint phase_point(const SystemParams& s, double r, double u1p, double u2p) {
  return {r * std::pow(std::abs(u2p), s.p) / u1p, -r * std::pow(std::abs(u1p), s.q) / u2p};
}

std::vector<double> first_integral_pq(double q, double N, const SystemProfileSamples& prof) {
  std::vector<double> C(prof.r.size());
  for (std::size_t i = 0; i < C.size(); ++i) {
    const double a = prof.u1p[i], b = prof.u2p[i];
    C[i] = std::pow(prof.r[i], (N - 1) * (q + 1)) *
           (std::pow(std::abs(a), q) * a - std::pow(std::abs(b), q) * b);
  }
  return C;
}

}  // namespace hh
