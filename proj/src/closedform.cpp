#include "hh/closedform.hpp"

#include <cmath>
#include <limits>

namespace hh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return (x > 0) - (x < 0); }

// Set where a + b g(r) > 0 on (0, inf), g(r) = r^m (m != 0) or ln r.
Interval positive_set(double a, double b, double m, bool log_case) {
  if (b == 0) return a > 0 ? Interval{0, kInf} : Interval{0, 0};
  const double x = -a / b;  // g(r0)
  const bool increasing = log_case ? b > 0 : b * m > 0;
  if (log_case) {
    const double r0 = std::exp(x);
    return increasing ? Interval{r0, kInf} : Interval{0, r0};
  }
  if (x <= 0) return a + b > 0 || (a == 0 && b > 0) ? Interval{0, kInf} : Interval{0, 0};
  const double r0 = std::pow(x, 1 / m);
  return increasing ? Interval{r0, kInf} : Interval{0, r0};
}

template <class F>
ProfileSamples sample_scalar(const F& f, const std::vector<double>& r) {
  ProfileSamples out;
  out.r = r;
  out.w.reserve(r.size());
  out.wprime.reserve(r.size());
  for (double x : r) {
    out.w.push_back(f.w(x));
    out.wprime.push_back(f.wprime(x));
  }
  return out;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw InvalidParams("log_grid needs 0 < lo < hi, n >= 2");
  std::vector<double> r(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
  r.front() = lo;
  r.back() = hi;
  return r;
}

double HJParticular::u(double r) const { return A * std::pow(r, alpha) + c; }
double HJParticular::uprime(double r) const { return A * alpha * std::pow(r, alpha - 1); }

HJParticular scalar_hj_particular(double q, double N, double c) {
  if (!(q > 1)) throw InvalidParams("scalar HJ particular solution needs q > 1");
  if (std::abs(q - 2) < kDenTol || std::abs((N - 1) * q - N) < kDenTol)
    throw InvalidParams("scalar HJ particular solution undefined for q = 2 or q = N/(N-1)");
  const double K0 = (2 - q) * ((N - 1) * q - N);
  const double mag =
      std::abs(K0) * std::pow(std::abs(2 - q), -q) * std::pow(std::abs(q - 1), q - 2);
  HJParticular h;
  h.alpha = (q - 2) / (q - 1);
  h.A = sgn(K0) * std::pow(mag, 1 / (q - 1));
  h.c = c;
  return h;
}

double HJQuadrature::uprime(double r) const {
  const double e = -1 / (q - 1);
  const double sgn_b = branch == Branch::negative ? 1.0 : -1.0;
  double f;
  if (log_case) {
    f = C - sgn_b * (q - 1) * std::log(r);
  } else {
    const double b = (q - 1) / ((N - 1) * q - N);
    f = C + sgn_b * b * std::pow(r, N - (N - 1) * q);
  }
  const double mag = std::pow(r, 1 - N) * std::pow(f, e);
  return branch == Branch::negative ? -mag : mag;
}

HJQuadrature scalar_hj_quadrature(double q, double N, double C, Branch branch) {
  if (!(q > 1)) throw InvalidParams("scalar HJ quadrature needs q > 1");
  HJQuadrature h;
  h.q = q;
  h.N = N;
  h.C = C;
  h.branch = branch;
  const double k = N - (N - 1) * q;
  const double s = branch == Branch::negative ? 1.0 : -1.0;
  h.log_case = std::abs(k) < kDenTol;
  if (h.log_case) {
    h.validity = positive_set(C, -s * (q - 1), 0, true);
  } else {
    const double b = (q - 1) / ((N - 1) * q - N);
    h.validity = positive_set(C, s * b, k, false);
  }
  return h;
}

double SystemParticular::u1p(double r) const { return a1 * std::pow(r, -lambda1); }
double SystemParticular::u2p(double r) const { return a2 * std::pow(r, -lambda2); }
double SystemParticular::u1(double r) const { return A1 * std::pow(r, e1) + c1; }
double SystemParticular::u2(double r) const { return A2 * std::pow(r, e2) + c2; }

SystemProfileSamples SystemParticular::sample(const std::vector<double>& r) const {
  SystemProfileSamples out;
  out.r = r;
  for (double x : r) {
    out.u1.push_back(u1(x));
    out.u2.push_back(u2(x));
    out.u1p.push_back(u1p(x));
    out.u2p.push_back(u2p(x));
  }
  return out;
}

std::optional<SystemParticular> system_particular(const SystemParams& s, double c1, double c2) {
  const double N = s.N, p = s.p, q = s.q, m = p * q - 1;
  const double beta1 = (N + p - (N - 1) * p * q) / m;
  const double beta2 = (N + q - (N - 1) * p * q) / m;
  if (std::abs(beta1) < kDenTol || std::abs(beta2) < kDenTol) return std::nullopt;
  SystemParticular sp;
  sp.lambda1 = (p + 1) / m;
  sp.lambda2 = (q + 1) / m;
  sp.a1 = sgn(beta1) * std::pow(std::abs(beta1) * std::pow(std::abs(beta2), p), 1 / m);
  sp.a2 = sgn(beta2) * std::pow(std::abs(beta2) * std::pow(std::abs(beta1), q), 1 / m);
  sp.e1 = 1 - sp.lambda1;
  sp.e2 = 1 - sp.lambda2;
  if (std::abs(sp.e1) < kDenTol || std::abs(sp.e2) < kDenTol) return std::nullopt;
  sp.A1 = sp.a1 / sp.e1;
  sp.A2 = sp.a2 / sp.e2;
  sp.c1 = c1;
  sp.c2 = c2;
  return sp;
}

double HHParticular::w(double r) const { return a * std::pow(r, -gamma); }
double HHParticular::wprime(double r) const { return -a * gamma * std::pow(r, -gamma - 1); }
ProfileSamples HHParticular::sample(const std::vector<double>& r) const {
  return sample_scalar(*this, r);
}

std::optional<HHParticular> hh_particular(const ScalarParams& s) {
  const double N = s.N, p = s.p, q = s.q;
  const double gamma = (p + s.sigma) / (q + 1 - p);
  const double rhs =
      s.eps * std::pow(std::abs(gamma), p - 2) * gamma * (N - p - (p - 1) * gamma);
  if (!(rhs > kDenTol) || !std::isfinite(rhs)) return std::nullopt;
  return HHParticular{std::pow(rhs, 1 / (q - p + 1)), gamma};
}

double GroundState::w(double r) const { return c * std::pow(d + std::pow(r, a), b); }
double GroundState::wprime(double r) const {
  return c * b * a * std::pow(d + std::pow(r, a), b - 1) * std::pow(r, a - 1);
}
ProfileSamples GroundState::sample(const std::vector<double>& r) const {
  return sample_scalar(*this, r);
}

GroundState hh_ground_state(const ScalarParams& s, double c) {
  const ScalarRegion reg = classify(s);
  if (reg != ScalarRegion::A && reg != ScalarRegion::F)
    throw InvalidParams("ground state family exists only in regions A and F");
  if (s.eps != 1) throw InvalidParams("ground state family requires eps = +1");
  if (!(c > 0)) throw InvalidParams("ground state scale c must be positive");
  const double qS = *critical_exponents(s).qS;
  if (std::abs(s.q - qS) > kRegionTol * std::max(1.0, std::abs(qS)))
    throw InvalidParams("ground state family requires q = qS");
  const double N = s.N, p = s.p, sg = s.sigma;
  GroundState g;
  g.c = c;
  g.a = (p + sg) / (p - 1);
  g.b = (p - N) / (p + sg);
  g.d = std::pow(c, s.q - p + 1) / std::abs(N + sg) *
        std::pow(std::abs((N - p) / (p - 1)), 1 - p);
  return g;
}

double ExplicitAbsorption::w(double r) const {
  const double g = log_case ? std::log(r) : std::pow(r, m);
  return std::pow(c + k * d * g, expo);
}

double ExplicitAbsorption::wprime(double r) const {
  const double g = log_case ? std::log(r) : std::pow(r, m);
  const double dg = log_case ? 1 / r : m * std::pow(r, m - 1);
  return expo * std::pow(c + k * d * g, expo - 1) * k * d * dg;
}

ProfileSamples ExplicitAbsorption::sample(const std::vector<double>& r) const {
  return sample_scalar(*this, r);
}

ExplicitAbsorption hh_absorption_explicit(const ScalarParams& s, double c, Branch branch) {
  const double N = s.N, p = s.p, q = s.q;
  if (s.eps != -1) throw InvalidParams("explicit absorption family requires eps = -1");
  const double sigma_req = -p * (N - 1) / (p - 1);
  if (std::abs(s.sigma - sigma_req) > kRegionTol * std::max(1.0, std::abs(sigma_req)))
    throw InvalidParams("explicit absorption family requires sigma = -p(N-1)/(p-1)");
  ExplicitAbsorption e;
  e.c = c;
  e.k = branch == Branch::positive ? 1.0 : -1.0;
  e.log_case = std::abs(p - N) <= kRegionTol * std::max(1.0, std::abs(N));
  if (e.log_case) {
    e.d = (q - N + 1) / N * std::pow(N / ((N - 1) * (q + 1)), 1 / N);
    e.expo = -N / (q - N + 1);
    e.m = 0;
  } else {
    e.d = (p - 1) * (q - p + 1) / (p * (p - N)) * std::pow(p / ((p - 1) * (q + 1)), 1 / p);
    e.expo = -p / (q - p + 1);
    e.m = (p - N) / (p - 1);
  }
  e.validity = positive_set(c, e.k * e.d, e.m, e.log_case);
  return e;
}

double SystemExactQstar::u1p(double r) const {
  return c * std::pow(r, 1 - N) * std::pow(d + std::pow(r, m), k1);
}

double SystemExactQstar::u2p(double r) const {
  return -b * std::pow(r, 1 - (N - 1) * q) * std::pow(d + std::pow(r, m), k2);
}

SystemProfileSamples SystemExactQstar::sample(const std::vector<double>& r) const {
  SystemProfileSamples out;
  out.r = r;
  for (double x : r) {
    out.u1p.push_back(u1p(x));
    out.u2p.push_back(u2p(x));
  }
  return out;
}

SystemExactQstar system_exact_qstar(const SystemParams& s, double c) {
  const SystemExponents e = critical_exponents(s);
  const double N = s.N, p = s.p;
  if (!(p > e.n_ratio) || !e.q2 || !(s.q < *e.q2))
    throw InvalidParams("exact q* solution requires (p, q) in region A");
  const double qs = *e.qstar;
  if (std::abs(s.q - qs) > kRegionTol * std::max(1.0, qs))
    throw InvalidParams("exact q* solution requires q = q*");
  if (!(c > 0)) throw InvalidParams("exact q* solution needs c > 0");
  SystemExactQstar x;
  x.N = N;
  x.p = p;
  x.q = qs;
  x.c = c;
  const double K = (N - 1) * p - N;
  x.d = std::pow(std::pow(c, p * qs - 1) / K, 1 / p) / (N - (N - 1) * qs);
  x.b = std::pow(c * K, 1 / p);
  x.m = (p - qs) / 2;
  x.k1 = 2 * (N - (N - 1) * p) / (p - qs);
  x.k2 = 2 * ((N - 1) * qs - N) / (p - qs);
  return x;
}

}  // namespace hh
