#include "hh/residual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace hh {

void fd5_weights(const double* x, std::size_t i, double out[5]) {
  // Fornberg's recursion for the first derivative (order 1, 5 nodes).
  const double x0 = x[i];
  double c[5][2] = {};
  double c1 = 1;
  double c4 = x[i - 2] - x0;
  c[0][0] = 1;
  for (int k = 1; k < 5; ++k) {
    const int mn = std::min(k, 1);
    double c2 = 1;
    const double c5 = c4;
    c4 = x[i - 2 + k] - x0;
    for (int j = 0; j < k; ++j) {
      const double c3 = x[i - 2 + k] - x[i - 2 + j];
      c2 *= c3;
      if (j == k - 1) {
        for (int m = mn; m >= 1; --m) c[k][m] = c1 * (m * c[k - 1][m - 1] - c5 * c[k - 1][m]) / c2;
        c[k][0] = -c1 * c5 * c[k - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  for (int k = 0; k < 5; ++k) out[k] = c[k][1];
}

namespace {

// d G / d r at interior points from samples of G on t = ln r.
// Returns false when G vanishes or changes sign inside the stencil,
// except that an identically zero stencil gives derivative 0.
bool flux_derivative(const std::vector<double>& t, const std::vector<double>& G,
                     const std::vector<double>& r, std::size_t i, double& dG) {
  int pos = 0, neg = 0, zero = 0;
  for (std::size_t j = i - 2; j <= i + 2; ++j) {
    if (G[j] > 0) ++pos;
    else if (G[j] < 0) ++neg;
    else ++zero;
  }
  if (zero == 5) {
    dG = 0;
    return true;
  }
  if (zero > 0 || (pos > 0 && neg > 0)) return false;
  double wts[5];
  fd5_weights(t.data(), i, wts);
  double d = 0;
  for (int k = 0; k < 5; ++k) d += wts[k] * std::log(std::abs(G[i - 2 + k]));
  dG = G[i] * d / r[i];
  return true;
}

std::vector<double> log_of(const std::vector<double>& r) {
  std::vector<double> t(r.size());
  std::transform(r.begin(), r.end(), t.begin(), [](double x) { return std::log(x); });
  return t;
}

// Residual of -r^{1-N} G' = src.
ResidualReport assemble(const std::vector<double>& r, const std::vector<double>& t,
                        const std::vector<double>& G, const std::vector<double>& src, double N,
                        double floor, std::size_t lo = 2, std::size_t hi = SIZE_MAX) {
  ResidualReport rep;
  const std::size_t n = r.size();
  if (n < 5) return rep;
  hi = std::min(hi, n - 2);
  double max_abs = 0, scale = 0;
  for (std::size_t i = std::max<std::size_t>(lo, 2); i < hi; ++i) {
    double dG;
    if (!flux_derivative(t, G, r, i, dG)) {
      rep.excluded.push_back(i);
      continue;
    }
    const double res = -std::pow(r[i], 1 - N) * dG - src[i];
    max_abs = std::max(max_abs, std::abs(res));
    scale = std::max(scale, std::abs(src[i]));
    ++rep.checked;
  }
  rep.max_abs = max_abs;
  rep.scale = scale;
  rep.max_rel = max_abs / std::max(scale, floor);
  return rep;
}

}  // namespace

ResidualReport residual_scalar(const ScalarParams& s, const ProfileSamples& prof, double floor) {
  const std::size_t n = prof.r.size();
  const std::vector<double> t = log_of(prof.r);
  std::vector<double> wp = prof.wprime;
  std::size_t lo = 2, hi = n >= 2 ? n - 2 : 0;  // residual rows [lo, hi)
  if (wp.size() != n) {
    wp.assign(n, 0.0);
    std::vector<double> lw = log_of(prof.w);
    for (std::size_t i = 2; i + 2 < n; ++i) {
      double wts[5];
      fd5_weights(t.data(), i, wts);
      double d = 0;
      for (int k = 0; k < 5; ++k) d += wts[k] * lw[i - 2 + k];
      wp[i] = prof.w[i] * d / prof.r[i];
    }
    lo = 4;
    hi = n >= 4 ? n - 4 : 0;
  }
  std::vector<double> G(n), src(n);
  for (std::size_t i = 0; i < n; ++i) {
    G[i] = std::pow(prof.r[i], s.N - 1) * std::pow(std::abs(wp[i]), s.p - 2) * wp[i];
    if (wp[i] == 0) G[i] = 0;
    src[i] = s.eps * std::pow(prof.r[i], s.sigma) * std::pow(prof.w[i], s.q);
  }
  return assemble(prof.r, t, G, src, s.N, floor, lo, hi);
}

SystemResidualReport residual_system(const SystemParams& s, const SystemProfileSamples& prof,
                                     double floor) {
  const std::size_t n = prof.r.size();
  const std::vector<double> t = log_of(prof.r);
  std::vector<double> G1(n), G2(n), src1(n), src2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rn = std::pow(prof.r[i], s.N - 1);
    G1[i] = rn * prof.u1p[i];
    G2[i] = rn * prof.u2p[i];
    src1[i] = std::pow(std::abs(prof.u2p[i]), s.p);
    src2[i] = std::pow(std::abs(prof.u1p[i]), s.q);
  }
  SystemResidualReport rep;
  rep.eq1 = assemble(prof.r, t, G1, src1, s.N, floor);
  rep.eq2 = assemble(prof.r, t, G2, src2, s.N, floor);
  return rep;
}

ResidualReport residual_hj(double q, double N, const std::vector<double>& r,
                           const std::vector<double>& uprime, double floor) {
  const std::size_t n = r.size();
  const std::vector<double> t = log_of(r);
  std::vector<double> G(n), src(n);
  for (std::size_t i = 0; i < n; ++i) {
    G[i] = std::pow(r[i], N - 1) * uprime[i];
    src[i] = std::pow(std::abs(uprime[i]), q);
  }
  return assemble(r, t, G, src, N, floor);
}

}  // namespace hh
