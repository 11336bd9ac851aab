// Parameters, critical exponents and region maps for the Hamilton-Jacobi
// system and the quasilinear Hardy-Henon equation it reduces to.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace hh {

inline constexpr double kRegionTol = 1e-9;  // relative
inline constexpr double kDenTol = 1e-12;

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// -Lap u1 = |grad u2|^p, -Lap u2 = |grad u1|^q with p >= q after normalisation.
struct SystemParams {
  double N = 3;
  double p = 2;
  double q = 1;
  bool swapped = false;  // true if the caller's (p, q) were exchanged

  bool low_dimension() const { return N < 3; }
};

// Throws InvalidParams unless N >= 2, p, q > 0 and pq > 1.
SystemParams make_system(double N, double p, double q);

//   -(|w'|^{p-2} w')' - (N-1)/r |w'|^{p-2} w' = eps r^sigma w^q,  w > 0.
// N is any finite real so that the r -> 1/r image of a valid equation
// stays representable.
struct ScalarParams {
  double N = 3;
  double p = 2;
  double q = 1;
  double sigma = 0;
  int eps = 1;
};

// Throws InvalidParams unless p > 1, q > p - 1, eps = +-1 and all finite.
ScalarParams make_scalar(double N, double p, double q, double sigma, int eps);

struct SystemExponents {
  std::optional<double> q1, q2, q3, q4, qstar;
  double n_ratio = 0;  // N/(N-1)
};

struct ScalarExponents {
  std::optional<double> qc, qS, gamma;
};

SystemExponents critical_exponents(double N, double p);
inline SystemExponents critical_exponents(const SystemParams& s) {
  return critical_exponents(s.N, s.p);
}
ScalarExponents critical_exponents(const ScalarParams& s);

// The sign eps is -sign(u1' u2') and is not determined by (N, p, q).
ScalarParams to_scalar(const SystemParams& s, int eps);
// Inverse of to_scalar on its image; requires p < 2 and sigma matching q.
SystemParams from_scalar(const ScalarParams& s);

enum class ScalarRegion {
  A,  // N > p > -sigma
  B,  // p > N > -sigma
  C,  // N > -sigma > p
  D,  // -sigma > N > p
  E,  // p > -sigma > N
  F,  // -sigma > p > N
  Boundary_pN,
  Boundary_sigmaP,
  Boundary_sigmaN,
  Triple_pNsigma
};

enum class SystemRegion {
  A1, A2, A3, B, C1, C2, C3, D1, D2, D3,
  L1, L2, L3, L4, Lstar, P_eq_NNm1, Q_eq_NNm1
};

ScalarRegion classify(const ScalarParams& s, double tol = kRegionTol);
SystemRegion classify(const SystemParams& s, double tol = kRegionTol);

bool is_boundary(ScalarRegion r);
bool is_boundary(SystemRegion r);
std::string to_string(ScalarRegion r);
std::string to_string(SystemRegion r);
// Coarse region (A, B, C or D) of a system interior region.
char coarse(SystemRegion r);

// w_hat(r_hat) = C w(r), r = r_hat^lambda; (s_hat, z_hat) = lambda (s, z)
// and t = lambda t_hat in the phase plane.
struct RegionTransform {
  ScalarParams image;
  double lambda = 1;
  double C = 1;
};

RegionTransform region_transform(const ScalarParams& s, double lambda);

}  // namespace hh
