// Sampled radial profiles.
#pragma once

#include <cstddef>
#include <vector>

namespace hh {

// r strictly increasing. The log_* arrays are either empty or parallel to r;
// when present they are authoritative and survive over/underflow of w, w'.
struct ProfileSamples {
  std::vector<double> r, w, wprime;
  std::vector<double> log_r, log_w, log_abs_wprime;

  std::size_t size() const { return r.size(); }
  bool has_logs() const { return !log_r.empty(); }
};

struct SystemProfileSamples {
  std::vector<double> r, u1, u2, u1p, u2p;
  std::vector<double> log_r, log_abs_u1p, log_abs_u2p;

  std::size_t size() const { return r.size(); }
  bool has_logs() const { return !log_r.empty(); }
};

// n >= 2 points, geometric spacing, endpoints exact.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Closed interval of radii; hi may be +inf.
struct Interval {
  double lo = 0;
  double hi = 0;
  bool contains(double r) const { return r >= lo && r <= hi; }
  bool empty() const { return !(hi > lo); }
};

}  // namespace hh
