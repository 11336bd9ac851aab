// Explicit solution families of the scalar Hamilton-Jacobi equation, the
// system and the Hardy-Henon equation. Every family is checked by the
// residual evaluators in residual.hpp.
#pragma once

#include <optional>
#include <vector>

#include "hh/exponents.hpp"
#include "hh/profile.hpp"

namespace hh {

// -Lap u = |grad u|^q, radial: u = A r^alpha + c with alpha = (q-2)/(q-1).
struct HJParticular {
  double A = 0;
  double alpha = 0;
  double c = 0;
  double u(double r) const;
  double uprime(double r) const;
};

// Requires q > 1 and q not in {N/(N-1), 2}.
HJParticular scalar_hj_particular(double q, double N, double c = 0);

enum class Branch { negative, positive };  // sign of u'

// General radial solution of the scalar HJ equation through its first
// integral W = -r^{N-1} u'. Defined on `validity`.
struct HJQuadrature {
  double q = 2, N = 3, C = 0;
  Branch branch = Branch::negative;
  bool log_case = false;  // q = N/(N-1)
  Interval validity;
  double uprime(double r) const;
};

HJQuadrature scalar_hj_quadrature(double q, double N, double C, Branch branch);

// u_i' = eta_i a_i r^{-lambda_i}; u_i = A_i r^{e_i} + c_i.
struct SystemParticular {
  double a1 = 0, a2 = 0;            // signed derivative coefficients
  double lambda1 = 0, lambda2 = 0;  // (p+1)/(pq-1), (q+1)/(pq-1)
  double A1 = 0, A2 = 0;            // signed primitive coefficients
  double e1 = 0, e2 = 0;            // 1 - lambda_i
  double c1 = 0, c2 = 0;
  double u1p(double r) const;
  double u2p(double r) const;
  double u1(double r) const;
  double u2(double r) const;
  SystemProfileSamples sample(const std::vector<double>& r) const;
};

// Defined off the curves q = q1, q2 (zero coefficient) and q = q3, q4
// (logarithmic primitive); nullopt there.
std::optional<SystemParticular> system_particular(const SystemParams& s, double c1 = 0,
                                                  double c2 = 0);

// w* = a r^{-gamma}; nullopt when a^{q-p+1} <= 0.
struct HHParticular {
  double a = 0;
  double gamma = 0;
  double w(double r) const;
  double wprime(double r) const;
  ProfileSamples sample(const std::vector<double>& r) const;
};

std::optional<HHParticular> hh_particular(const ScalarParams& s);

// w = c (d + r^a)^b with a = (p+sigma)/(p-1). Region A or F, eps = 1, q = qS.
struct GroundState {
  double c = 1, d = 1, a = 1, b = -1;
  double w(double r) const;
  double wprime(double r) const;
  ProfileSamples sample(const std::vector<double>& r) const;
};

// Throws InvalidParams outside region A / F, for eps = -1 or q != qS.
GroundState hh_ground_state(const ScalarParams& s, double c);

// eps = -1, sigma = -p(N-1)/(p-1):
//   p != N: w = (c + k d r^{(p-N)/(p-1)})^{-p/(q-p+1)}
//   p == N: w = (c + k d ln r)^{-N/(q-N+1)}
// with k = +1 (branch positive) or -1 (branch negative).
struct ExplicitAbsorption {
  double c = 1, d = 1, k = 1;
  double m = 0;     // exponent of r, 0 in the log case
  double expo = 0;  // outer exponent
  bool log_case = false;
  Interval validity;
  double w(double r) const;
  double wprime(double r) const;
  ProfileSamples sample(const std::vector<double>& r) const;
};

ExplicitAbsorption hh_absorption_explicit(const ScalarParams& s, double c, Branch branch);

// Exact mixed solution for q = q* in region A:
//   u1' = c r^{1-N} (d + r^{m})^{k1},  u2' = -b r^{1-(N-1)q*} (d + r^{m})^{k2}.
struct SystemExactQstar {
  double N = 3, p = 2, q = 1;
  double c = 1, d = 1, b = 1, m = 1, k1 = 0, k2 = 0;
  double u1p(double r) const;
  double u2p(double r) const;
  SystemProfileSamples sample(const std::vector<double>& r) const;
};

// Requires (p, q) in region A with |q - q*| within the region tolerance.
SystemExactQstar system_exact_qstar(const SystemParams& s, double c);

}  // namespace hh
