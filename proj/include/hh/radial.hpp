// Direct radial integration, asymptotic seeding and behaviour classification.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hh/dynsys.hpp"
#include "hh/exponents.hpp"
#include "hh/profile.hpp"
#include "hh/ratefit.hpp"

namespace hh {

enum class RadialStop { r_end, vanished, blow_up, step_underflow, max_steps };
std::string to_string(RadialStop s);

struct RadialOptions {
  double rtol = 1e-12;
  double atol = 1e-14;  // on ln w and on the flux scaled by its initial size
  double blowup = 1e12;
  std::size_t max_steps = 2'000'000;
};

struct RadialScalarResult {
  ProfileSamples prof;  // sorted by r
  RadialStop stop = RadialStop::r_end;
  double r_final = 0;
};

// Integrates the scalar equation in t = ln r with state (ln w, r^{N-1}|w'|^{p-2}w')
// from r0 to r1 (either direction). Stops when w reaches 0.
RadialScalarResult integrate_radial_scalar(const ScalarParams& sp, double r0, double w0,
                                           double wp0, double r1,
                                           const RadialOptions& opts = {});

struct RadialSystemResult {
  SystemProfileSamples prof;  // sorted by r; u_i(r0) = 0
  RadialStop stop = RadialStop::r_end;
  double r_final = 0;
  int sign_changes_u1p = 0, sign_changes_u2p = 0;
};

// Integrates w_i = -r^{N-1} u_i':  w1' = r^{(N-1)(1-p)}|w2|^p, w2' = r^{(N-1)(1-q)}|w1|^q.
RadialSystemResult integrate_radial_system(const SystemParams& s, double r0, double u1p0,
                                           double u2p0, double r1,
                                           const RadialOptions& opts = {});

enum class BehaviorLabel {
  particular_like,            // w ~ a* r^{-gamma}
  const_plus_sigma_power,     // w -> c, w' ~ r^{(sigma+1)/(p-1)}
  const_plus_harmonic_power,  // w -> c, w' ~ r^{-(N-1)/(p-1)}
  harmonic_decay,             // w ~ k r^{-(N-p)/(p-1)}
  log_power,                  // w ~ C r^alpha |ln r|^beta, beta != 0
  log_linear,                 // w ~ C |ln r|
  vanishing_zero,
  blow_up_finite_r,
  unclassified
};
std::string to_string(BehaviorLabel b);

// Radial values (w, w') close to an endpoint of the given class.
//   particular_like:           no free parameter
//   const_plus_sigma_power:    c = limit of w
//   const_plus_harmonic_power: c = limit of w, k = limit of r^{(N-1)/(p-1)} w'
//   harmonic_decay:            k = limit of r^{(N-p)/(p-1)} w
struct RadialSeed {
  double w = 0, wp = 0;
};
RadialSeed seed_from_asymptotics(const ScalarParams& sp, BehaviorLabel label, double r,
                                 double c = 1, double k = 1);

struct BehaviorReport {
  BehaviorLabel label = BehaviorLabel::unclassified;
  std::vector<BehaviorLabel> also_matches;  // ambiguous when non-empty
  RateFit fit_w, fit_wp;
};

struct ClassifyOptions {
  double rel_tol = 0.02;
  FitWindow window;
};

BehaviorReport classify_behavior(const ScalarParams& sp, const ProfileSamples& prof,
                                 Endpoint end, const ClassifyOptions& opts = {});

// sup of r^gamma w over ln r in [t_lo, t_hi].
double osserman_sup(const ScalarParams& sp, const ProfileSamples& prof, double t_lo,
                    double t_hi);
// sup of r^{lambda_i} |u_i'| with lambda1 = (p+1)/(pq-1), lambda2 = (q+1)/(pq-1).
std::array<double, 2> gradient_sup(const SystemParams& s, const SystemProfileSamples& prof,
                                   double t_lo, double t_hi);

// F_theta(r) = r^N ((p-1)/p |w'|^p + eps r^sigma w^{q+1}/(q+1) + theta w |w'|^{p-2} w'/r).
std::vector<double> pohozaev_energy(const ScalarParams& sp, const ProfileSamples& prof,
                                    double theta);

// u_i(r) = anchor_i + integral of u_i' from r_anchor (trapezoid in ln r).
void integrate_primitives(SystemProfileSamples& prof, std::size_t anchor_index,
                          double u1_anchor = 0, double u2_anchor = 0);

}  // namespace hh
