// Finite-difference residuals of sampled radial profiles.
//
// The flux G = r^{N-1} |w'|^{p-2} w' is formed pointwise and its
// logarithmic derivative d ln|G| / d ln r is taken with a 5-point centred
// stencil, so sampled power laws give residuals at rounding level.
// Residuals are normalised by the largest source term on the grid.
#pragma once

#include <cstddef>
#include <vector>

#include "hh/exponents.hpp"
#include "hh/profile.hpp"

namespace hh {

struct ResidualReport {
  double max_rel = 0;
  double max_abs = 0;
  double scale = 0;  // max |source| over checked points
  std::size_t checked = 0;
  std::vector<std::size_t> excluded;  // flux vanishes or changes sign in the stencil
};

// Weights of the first derivative at x[i] from the nodes x[i-2..i+2].
void fd5_weights(const double* x, std::size_t i, double out[5]);

// -(|w'|^{p-2} w')' - (N-1)/r |w'|^{p-2} w' - eps r^sigma w^q. Uses
// prof.wprime when present, otherwise differentiates ln w.
ResidualReport residual_scalar(const ScalarParams& s, const ProfileSamples& prof,
                               double floor = 1e-300);

struct SystemResidualReport {
  ResidualReport eq1, eq2;
  double max_rel() const { return eq1.max_rel > eq2.max_rel ? eq1.max_rel : eq2.max_rel; }
};

// Needs prof.u1p and prof.u2p.
SystemResidualReport residual_system(const SystemParams& s, const SystemProfileSamples& prof,
                                     double floor = 1e-300);

// -Lap u - |u'|^q for a radial derivative profile.
ResidualReport residual_hj(double q, double N, const std::vector<double>& r,
                           const std::vector<double>& uprime, double floor = 1e-300);

}  // namespace hh
