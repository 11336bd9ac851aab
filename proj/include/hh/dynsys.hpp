// Quadratic phase-plane systems, their fixed points, trajectories and the
// reconstruction of radial profiles from trajectories.
//
// Scalar variables: s = -r w'/w, z = -eps r^{1+sigma} w^q |w'|^{-p} w',
// t = ln r. System variables: S = r |u2'|^p / u1', Z = -r |u1'|^q / u2'.
#pragma once

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hh/exponents.hpp"
#include "hh/profile.hpp"

namespace hh {

struct PhasePoint {
  double s = 0;
  double z = 0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

// s_t = s((p-N)/(p-1) + s + z/(p-1)),  z_t = z(N + sigma - q s - z).
PhasePoint vector_field(const ScalarParams& sp, PhasePoint x);
// S_t = S(N - (N-1)p + S + pZ),  Z_t = Z(N - (N-1)q - qS - Z).
PhasePoint vector_field(const SystemParams& sp, PhasePoint x);
Mat2 jacobian(const ScalarParams& sp, PhasePoint x);

// 1..4 counter-clockwise from s > 0, z > 0; 0 on an axis.
int quadrant(PhasePoint x);

enum class FixedPointKind { M0, N0, A0, O };
enum class Stability { source, sink, saddle, spiral_source, spiral_sink, degenerate };

struct FixedPointInfo {
  FixedPointKind kind = FixedPointKind::O;
  PhasePoint pos;
  std::array<std::complex<double>, 2> eigenvalues;
  // eigenvectors[k] belongs to eigenvalues[k], unit Euclidean norm.
  std::array<std::array<std::complex<double>, 2>, 2> eigenvectors;
  Stability stability = Stability::degenerate;
  bool defective = false;  // eigenvectors linearly dependent
  std::vector<FixedPointKind> coincident_with;
  int quadrant = 0;
};

// All four points in the order M0, N0, A0, O with closed-form eigen-data.
std::vector<FixedPointInfo> fixed_points(const ScalarParams& sp, double tol = kRegionTol);
FixedPointInfo fixed_point(const ScalarParams& sp, FixedPointKind kind,
                           double tol = kRegionTol);

std::string to_string(FixedPointKind k);
std::string to_string(Stability s);

enum class Coordinates { automatic, linear, logarithmic };
enum class Termination {
  t_end,
  fixed_point_converged,
  quadrant_exit,
  blow_up,
  step_underflow,
  max_steps
};
std::string to_string(Termination t);

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double fp_tol = 1e-8;  // convergence radius around a fixed point
  double dwell = 5;      // time spent inside fp_tol before stopping
  double blowup = 1e8;
  bool stop_on_convergence = true;
  // Logarithmic coordinates (ln|s|, ln|z|) are used by `automatic` when
  // the start lies in an open quadrant; axes are invariant so the quadrant
  // is preserved exactly.
  Coordinates coords = Coordinates::automatic;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
};

struct TrajectorySample {
  double t = 0, s = 0, z = 0;
  double log_abs_s = 0, log_abs_z = 0;  // -inf on the axes
};

// Samples are stored with t strictly increasing whatever the direction.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  Termination reason = Termination::t_end;
  std::optional<FixedPointKind> converged_to;
  int direction = 1;
  bool log_coords = false;
  int sign_s = 0, sign_z = 0;  // fixed signs in logarithmic coordinates
  // Smallest distance to M0, N0, A0, O over the run.
  std::array<double, 4> closest{};

  // Internal coordinates and their t-derivatives, parallel to samples.
  std::vector<std::array<double, 2>> y, dy;

  double t_min() const { return samples.front().t; }
  double t_max() const { return samples.back().t; }
  // Cubic Hermite dense output, t clamped to [t_min, t_max].
  TrajectorySample at(double t) const;
  std::vector<TrajectorySample> resample(const std::vector<double>& t) const;
};

// Integrates from `start` at time t0 to t1; t1 < t0 integrates the
// time-reversed field.
Trajectory integrate_trajectory(const ScalarParams& sp, PhasePoint start, double t0, double t1,
                                const IntegrateOptions& opts = {});

// Point at distance delta from a fixed point along a real eigenvector,
// oriented so that the point lies in `quad` when possible.
PhasePoint eigen_seed(const FixedPointInfo& fp, int which, double delta, int quad);

// w = r^{-gamma} (|s|^{p-1}|z|)^{1/(q+1-p)},
// w' = -sign(s) r^{-(gamma+1)} (|z||s|^q)^{1/(q+1-p)}.
// Axis samples are dropped; throws if sign(sz) != eps on the trajectory.
ProfileSamples reconstruct_w(const ScalarParams& sp, const std::vector<TrajectorySample>& tr);
inline ProfileSamples reconstruct_w(const ScalarParams& sp, const Trajectory& tr) {
  return reconstruct_w(sp, tr.samples);
}

// u1' = sign(S) (r^{-(p+1)}|S||Z|^p)^{1/(pq-1)},
// u2' = -sign(Z) (r^{-(q+1)}|S|^q|Z|)^{1/(pq-1)}. u1, u2 are left empty.
SystemProfileSamples reconstruct_uprime(const SystemParams& s,
                                        const std::vector<TrajectorySample>& tr);
inline SystemProfileSamples reconstruct_uprime(const SystemParams& s, const Trajectory& tr) {
  return reconstruct_uprime(s, tr.samples);
}

// Inverse maps from a radial state.
PhasePoint phase_point(const ScalarParams& sp, double r, double w, double wp);
PhasePoint phase_point(const SystemParams& s, double r, double u1p, double u2p);

// C(r) = r^{(N-1)(q+1)} (|u1'|^q u1' - |u2'|^q u2') for p = q.
std::vector<double> first_integral_pq(double q, double N, const SystemProfileSamples& prof);

}  // namespace hh
