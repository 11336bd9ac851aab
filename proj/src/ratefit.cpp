#include "hh/ratefit.hpp"

#include <algorithm>
#include <cmath>

#include "hh/exponents.hpp"

namespace hh {

namespace {

// Least squares min |A x - y| by Householder QR; A is m x k column-major.
// Returns false when A is numerically rank deficient.
bool lstsq(std::vector<std::vector<double>> A, std::vector<double> y, std::vector<double>& x) {
  const std::size_t k = A.size(), m = y.size();
  if (m < k) return false;
  std::vector<double> scale(k, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    double n = 0;
    for (double v : A[j]) n = std::max(n, std::abs(v));
    if (n == 0) return false;
    scale[j] = n;
    for (double& v : A[j]) v /= n;
  }
  std::vector<double> diag(k);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0;
    for (std::size_t i = j; i < m; ++i) norm += A[j][i] * A[j][i];
    norm = std::sqrt(norm);
    if (norm < 1e-13) return false;
    const double alpha = A[j][j] > 0 ? -norm : norm;
    std::vector<double> v(m, 0.0);
    for (std::size_t i = j; i < m; ++i) v[i] = A[j][i];
    v[j] -= alpha;
    double vv = 0;
    for (std::size_t i = j; i < m; ++i) vv += v[i] * v[i];
    if (vv == 0) return false;
    auto reflect = [&](std::vector<double>& col) {
      double d = 0;
      for (std::size_t i = j; i < m; ++i) d += v[i] * col[i];
      d = 2 * d / vv;
      for (std::size_t i = j; i < m; ++i) col[i] -= d * v[i];
    };
    for (std::size_t c = j; c < k; ++c) reflect(A[c]);
    reflect(y);
    diag[j] = A[j][j];
    if (std::abs(diag[j]) < 1e-10) return false;
  }
  x.assign(k, 0.0);
  for (std::size_t jj = k; jj-- > 0;) {
    double s = y[jj];
    for (std::size_t c = jj + 1; c < k; ++c) s -= A[c][jj] * x[c];
    x[jj] = s / A[jj][jj];
  }
  for (std::size_t j = 0; j < k; ++j) x[j] /= scale[j];
  return true;
}

double rms_of(const std::vector<std::vector<double>>& A, const std::vector<double>& y,
              const std::vector<double>& x) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double f = 0;
    for (std::size_t j = 0; j < x.size(); ++j) f += A[j][i] * x[j];
    s += (y[i] - f) * (y[i] - f);
  }
  return std::sqrt(s / double(y.size()));
}

}  // namespace

RateFit rate_fit_log(const std::vector<double>& t, const std::vector<double>& y, Endpoint end,
                     const FitWindow& win) {
  RateFit fit;
  if (t.size() < 3 || t.size() != y.size()) throw InvalidParams("rate fit needs >= 3 samples");
  const double ta = t.front(), tb = t.back();
  const double L = win.decades * std::log(10.0);
  const double trim = win.event_end ? win.exclude_frac * (tb - ta) : 0.0;
  double lo, hi;
  if (end == Endpoint::infinity) {
    hi = tb - trim;
    lo = std::max(ta, hi - L);
  } else {
    lo = ta + trim;
    hi = std::min(tb, lo + L);
  }
  if (win.t_lo) lo = *win.t_lo;
  if (win.t_hi) hi = *win.t_hi;
  fit.t_lo = lo;
  fit.t_hi = hi;

  std::vector<double> tt, yy;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= lo && t[i] <= hi && std::isfinite(y[i])) {
      tt.push_back(t[i]);
      yy.push_back(y[i]);
    }
  fit.n = tt.size();
  if (tt.size() < 3) throw InvalidParams("rate fit window holds fewer than 3 samples");

  std::vector<std::vector<double>> A{std::vector<double>(tt.size(), 1.0), tt};
  std::vector<double> x;
  if (!lstsq(A, yy, x)) throw InvalidParams("rate fit is rank deficient");
  fit.lnC = x[0];
  fit.alpha = x[1];
  fit.rms_power = fit.rms = rms_of(A, yy, x);

  const bool one_sign = (tt.front() > 0 && tt.back() > 0) || (tt.front() < 0 && tt.back() < 0);
  if (one_sign && fit.rms_power > win.rms_floor) {
    std::vector<double> lt(tt.size());
    for (std::size_t i = 0; i < tt.size(); ++i) lt[i] = std::log(std::abs(tt[i]));
    A.push_back(lt);
    std::vector<double> x3;
    if (lstsq(A, yy, x3)) {
      const double r3 = rms_of(A, yy, x3);
      if (r3 * win.beta_gain <= fit.rms_power) {
        fit.lnC = x3[0];
        fit.alpha = x3[1];
        fit.beta = x3[2];
        fit.beta_fitted = true;
        fit.rms = r3;
      }
    }
  }
  return fit;
}

namespace {

std::vector<double> logs_or(const std::vector<double>& logs, const std::vector<double>& vals) {
  if (!logs.empty()) return logs;
  std::vector<double> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out[i] = std::log(std::abs(vals[i]));
  return out;
}

}  // namespace

RateFit rate_fit(const ProfileSamples& prof, Endpoint end, const FitWindow& win) {
  return rate_fit_log(logs_or(prof.log_r, prof.r), logs_or(prof.log_w, prof.w), end, win);
}

RateFit rate_fit_derivative(const ProfileSamples& prof, Endpoint end, const FitWindow& win) {
  return rate_fit_log(logs_or(prof.log_r, prof.r), logs_or(prof.log_abs_wprime, prof.wprime),
                      end, win);
}

bool rate_matches(double a, double b, double tol, double floor) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), floor);
}

}  // namespace hh
