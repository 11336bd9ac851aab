#include "hh/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hh {

namespace {

std::optional<double> ratio(double num, double den) {
  if (std::abs(den) < kDenTol) return std::nullopt;
  return num / den;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

SystemParams make_system(double N, double p, double q) {
  if (!finite_all({N, p, q})) throw InvalidParams("parameters must be finite");
  if (N < 2) throw InvalidParams("N must be >= 2");
  if (p <= 0 || q <= 0) throw InvalidParams("p and q must be positive");
  if (p * q <= 1) throw InvalidParams("pq must exceed 1");
  SystemParams s{N, p, q, false};
  if (s.q > s.p) {
    std::swap(s.p, s.q);
    s.swapped = true;
  }
  return s;
}

ScalarParams make_scalar(double N, double p, double q, double sigma, int eps) {
  if (!finite_all({N, p, q, sigma})) throw InvalidParams("parameters must be finite");
  if (p <= 1) throw InvalidParams("p must exceed 1");
  if (q <= p - 1) throw InvalidParams("q must exceed p - 1");
  if (eps != 1 && eps != -1) throw InvalidParams("eps must be +1 or -1");
  return ScalarParams{N, p, q, sigma, eps};
}

SystemExponents critical_exponents(double N, double p) {
  SystemExponents e;
  const double m = (N - 1) * p;
  e.q1 = ratio(N, m - 1);
  e.q2 = ratio(N + p, m);
  e.q3 = ratio(2, p - 1);
  e.q4 = ratio(p + 2, p);
  e.qstar = ratio(2 * N + p, 2 * m - 1);
  e.n_ratio = N / (N - 1);
  return e;
}

ScalarExponents critical_exponents(const ScalarParams& s) {
  const double N = s.N, p = s.p, q = s.q, sg = s.sigma;
  ScalarExponents e;
  e.qc = ratio((N + sg) * (p - 1), N - p);
  e.qS = ratio(N * (p - 1) + p + p * sg, N - p);
  e.gamma = ratio(p + sg, q + 1 - p);
  return e;
}

ScalarParams to_scalar(const SystemParams& s, int eps) {
  const double N = s.N, p = s.p, q = s.q;
  ScalarParams r;
  r.p = 1 + 1 / p;
  r.q = q;
  r.sigma = (N - 1) * (1 - p * q) / p;
  r.N = 1 + (N - 1) * (p - 1) / p;
  r.eps = eps;
  return r;
}

SystemParams from_scalar(const ScalarParams& s) {
  if (s.p >= 2) throw InvalidParams("scalar p must be below 2 to come from a system");
  const double p = 1 / (s.p - 1);
  const double N = (s.N + 1 - s.p) / (2 - s.p);
  SystemParams out = make_system(N, p, s.q);
  if (out.swapped) throw InvalidParams("scalar parameters map to q > p");
  const double sigma = (N - 1) * (1 - p * s.q) / p;
  if (!close(sigma, s.sigma, 1e-9)) throw InvalidParams("sigma inconsistent with (N, p, q)");
  return out;
}

ScalarRegion classify(const ScalarParams& s, double tol) {
  const double N = s.N, p = s.p, ms = -s.sigma;
  const bool pN = close(p, N, tol);
  const bool sP = close(ms, p, tol);
  const bool sN = close(ms, N, tol);
  const int hits = int(pN) + int(sP) + int(sN);
  if (hits >= 2) return ScalarRegion::Triple_pNsigma;
  if (pN) return ScalarRegion::Boundary_pN;
  if (sP) return ScalarRegion::Boundary_sigmaP;
  if (sN) return ScalarRegion::Boundary_sigmaN;
  if (N > p && p > ms) return ScalarRegion::A;
  if (p > N && N > ms) return ScalarRegion::B;
  if (N > ms && ms > p) return ScalarRegion::C;
  if (ms > N && N > p) return ScalarRegion::D;
  if (p > ms && ms > N) return ScalarRegion::E;
  return ScalarRegion::F;
}

SystemRegion classify(const SystemParams& s, double tol) {
  const SystemExponents e = critical_exponents(s);
  const double q = s.q, nr = e.n_ratio;
  auto on = [&](const std::optional<double>& c) { return c && close(q, *c, tol); };
  if (close(s.p, nr, tol)) return SystemRegion::P_eq_NNm1;
  if (close(q, nr, tol)) return SystemRegion::Q_eq_NNm1;
  if (on(e.q1)) return SystemRegion::L1;
  if (on(e.q2)) return SystemRegion::L2;
  if (on(e.q3)) return SystemRegion::L3;
  if (on(e.q4)) return SystemRegion::L4;
  if (on(e.qstar)) return SystemRegion::Lstar;

  // p > 1 here, so every exponent is defined.
  const double q1 = *e.q1, q2 = *e.q2, q3 = *e.q3, q4 = *e.q4;
  if (s.p < nr) return SystemRegion::B;
  if (q > nr) {
    if (q < q3) return SystemRegion::D1;
    if (q < q4) return SystemRegion::D2;
    return SystemRegion::D3;
  }
  if (q > q2) {
    if (q < q3) return SystemRegion::C1;
    if (q < q4) return SystemRegion::C2;
    return SystemRegion::C3;
  }
  if (q < q1) return SystemRegion::A1;
  if (q < q3) return SystemRegion::A2;
  return SystemRegion::A3;
}

bool is_boundary(ScalarRegion r) {
  switch (r) {
    case ScalarRegion::Boundary_pN:
    case ScalarRegion::Boundary_sigmaP:
    case ScalarRegion::Boundary_sigmaN:
    case ScalarRegion::Triple_pNsigma:
      return true;
    default:
      return false;
  }
}

bool is_boundary(SystemRegion r) { return r >= SystemRegion::L1; }

std::string to_string(ScalarRegion r) {
  switch (r) {
    case ScalarRegion::A: return "A";
    case ScalarRegion::B: return "B";
    case ScalarRegion::C: return "C";
    case ScalarRegion::D: return "D";
    case ScalarRegion::E: return "E";
    case ScalarRegion::F: return "F";
    case ScalarRegion::Boundary_pN: return "Boundary_pN";
    case ScalarRegion::Boundary_sigmaP: return "Boundary_sigmaP";
    case ScalarRegion::Boundary_sigmaN: return "Boundary_sigmaN";
    case ScalarRegion::Triple_pNsigma: return "Triple_pNsigma";
  }
  return "?";
}

std::string to_string(SystemRegion r) {
  switch (r) {
    case SystemRegion::A1: return "A1";
    case SystemRegion::A2: return "A2";
    case SystemRegion::A3: return "A3";
    case SystemRegion::B: return "B";
    case SystemRegion::C1: return "C1";
    case SystemRegion::C2: return "C2";
    case SystemRegion::C3: return "C3";
    case SystemRegion::D1: return "D1";
    case SystemRegion::D2: return "D2";
    case SystemRegion::D3: return "D3";
    case SystemRegion::L1: return "L1";
    case SystemRegion::L2: return "L2";
    case SystemRegion::L3: return "L3";
    case SystemRegion::L4: return "L4";
    case SystemRegion::Lstar: return "Lstar";
    case SystemRegion::P_eq_NNm1: return "p_eq_N_over_Nm1";
    case SystemRegion::Q_eq_NNm1: return "q_eq_N_over_Nm1";
  }
  return "?";
}

char coarse(SystemRegion r) {
  switch (r) {
    case SystemRegion::A1:
    case SystemRegion::A2:
    case SystemRegion::A3: return 'A';
    case SystemRegion::B: return 'B';
    case SystemRegion::C1:
    case SystemRegion::C2:
    case SystemRegion::C3: return 'C';
    case SystemRegion::D1:
    case SystemRegion::D2:
    case SystemRegion::D3: return 'D';
    default: return '-';
  }
}

RegionTransform region_transform(const ScalarParams& s, double lambda) {
  if (!std::isfinite(lambda) || lambda == 0) throw InvalidParams("lambda must be finite and nonzero");
  RegionTransform t;
  t.lambda = lambda;
  t.image = s;
  t.image.N = s.p + lambda * (s.N - s.p);
  t.image.sigma = -s.p + lambda * (s.p + s.sigma);
  t.C = std::pow(std::abs(lambda), s.p / (s.q + 1 - s.p));
  return t;
}

}  // namespace hh
