// Least-squares asymptotic rate fits  ln f ~ ln C + alpha ln r + beta ln|ln r|.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hh/profile.hpp"

namespace hh {

enum class Endpoint { zero, infinity };

struct FitWindow {
  double decades = 2;         // window length in powers of ten of r
  double exclude_frac = 0.1;  // trimmed off the endpoint side when `event_end`
  bool event_end = false;
  std::optional<double> t_lo, t_hi;  // explicit window in t = ln r
  double beta_gain = 10;      // RMS improvement required to keep beta
  double rms_floor = 1e-9;    // below this the power fit is already exact
};

struct RateFit {
  double lnC = 0;
  double alpha = 0;
  double beta = 0;
  bool beta_fitted = false;
  double rms = 0;        // of the accepted model
  double rms_power = 0;  // with beta = 0
  double t_lo = 0, t_hi = 0;
  std::size_t n = 0;
};

// Fits y(t) on the selected window; t must be strictly increasing.
RateFit rate_fit_log(const std::vector<double>& t, const std::vector<double>& y, Endpoint end,
                     const FitWindow& win = {});

// ln w against ln r.
RateFit rate_fit(const ProfileSamples& prof, Endpoint end, const FitWindow& win = {});
// ln |w'| against ln r.
RateFit rate_fit_derivative(const ProfileSamples& prof, Endpoint end, const FitWindow& win = {});

// Relative agreement |a - b| <= tol * max(|b|, floor).
bool rate_matches(double a, double b, double tol, double floor = 0.05);

}  // namespace hh
