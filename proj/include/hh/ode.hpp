// Adaptive Dormand-Prince 5(4) integrator for small autonomous systems.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace hh {

template <std::size_t D>
using Vec = std::array<double, D>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 0;  // 0 selects an initial step automatically
  double hmax = std::numeric_limits<double>::infinity();
  double hmin_rel = 1e-14;  // underflow when |h| < hmin_rel * max(1, |t|)
  std::size_t max_steps = 2'000'000;
};

enum class OdeStatus { finished, stopped, step_underflow, max_steps };

// Integrates y' = f(t, y) from t0 to t1 > t0. obs(t, y, dy) is called on the
// initial point and after every accepted step; returning false stops.
template <std::size_t D, class F, class Obs>
OdeStatus dopri5(F&& f, double t0, Vec<D> y, double t1, const OdeOptions& o, Obs&& obs) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto finite = [](const Vec<D>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };

  double t = t0;
  Vec<D> k1 = f(t, y);
  if (!obs(t, y, k1)) return OdeStatus::stopped;

  double h = o.h0;
  if (h <= 0) {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sc = o.atol + o.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  h = std::min({h, o.hmax, t1 - t0});

  Vec<D> yt, k2, k3, k4, k5, k6, k7, yn;
  for (std::size_t step = 0; step < o.max_steps; ++step) {
    if (t >= t1) return OdeStatus::finished;
    if (h < o.hmin_rel * std::max(1.0, std::abs(t))) return OdeStatus::step_underflow;
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * a21 * k1[i];
    k2 = f(t + c2 * h, yt);
    for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, yt);
    for (std::size_t i = 0; i < D; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, yt);
    for (std::size_t i = 0; i < D; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, yt);
    for (std::size_t i = 0; i < D; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + h, yt);
    for (std::size_t i = 0; i < D; ++i)
      yn[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + h, yn);

    double err = 0;
    bool ok = finite(yn) && finite(k7);
    if (ok) {
      for (std::size_t i = 0; i < D; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
        const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
        err = std::max(err, std::abs(ei) / sc);
      }
      ok = std::isfinite(err);
    }
    if (!ok) {
      h *= 0.25;
      continue;
    }
    if (err <= 1) {
      t = last ? t1 : t + h;
      y = yn;
      k1 = k7;
      if (!obs(t, y, k1)) return OdeStatus::stopped;
      if (last) return OdeStatus::finished;
      const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h * fac, o.hmax);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
    }
  }
  return OdeStatus::max_steps;
}

// Cubic Hermite interpolation on [t0, t1].
inline double hermite(double t0, double y0, double d0, double t1, double y1, double d1,
                      double t) {
  const double h = t1 - t0;
  if (h == 0) return y0;
  const double u = (t - t0) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

}  // namespace hh
