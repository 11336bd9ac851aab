#include <doctest.h>

#include <cmath>

#include "hh/closedform.hpp"
#include "hh/residual.hpp"

using namespace hh;

namespace {

std::vector<double> inside(const Interval& iv, double lo, double hi, std::size_t n) {
  const double a = std::max(lo, iv.lo * 2), b = std::min(hi, iv.hi / 2);
  return log_grid(a, b, n);
}

}  // namespace

TEST_CASE("fd5 weights differentiate quartics exactly") {
  const double x[] = {0.1, 0.35, 0.4, 0.9, 1.7, 2.0, 2.05};
  for (std::size_t i = 2; i + 2 < 7; ++i) {
    double w[5];
    fd5_weights(x, i, w);
    for (int deg = 0; deg <= 4; ++deg) {
      double d = 0;
      for (int k = 0; k < 5; ++k) d += w[k] * std::pow(x[i - 2 + k], deg);
      const double exact = deg == 0 ? 0 : deg * std::pow(x[i], deg - 1);
      CHECK(d == doctest::Approx(exact).epsilon(1e-11).scale(1));
    }
  }
}

TEST_CASE("scalar HJ particular solution") {
  const HJParticular h = scalar_hj_particular(3, 3);
  CHECK(h.A == doctest::Approx(-std::sqrt(6.0)));
  CHECK(h.alpha == doctest::Approx(0.5));
  for (double q : {1.2, 1.7, 3.0, 4.5}) {
    for (double N : {2.0, 3.0, 5.0}) {
      if (std::abs(q - N / (N - 1)) < 1e-9) continue;
      const HJParticular p = scalar_hj_particular(q, N, 0.3);
      const auto r = log_grid(1e-2, 1e2, 200);
      std::vector<double> up;
      for (double x : r) up.push_back(p.uprime(x));
      CHECK(residual_hj(q, N, r, up).max_rel < 1e-8);
      CHECK(p.u(2.0) - 0.3 == doctest::Approx(p.A * std::pow(2.0, p.alpha)));
    }
  }
  CHECK_THROWS_AS(scalar_hj_particular(1.5, 3), InvalidParams);
  CHECK_THROWS_AS(scalar_hj_particular(2, 3), InvalidParams);
}

TEST_CASE("HJ quadrature reduces to the particular solution at C = 0") {
  const HJParticular p = scalar_hj_particular(3, 3);
  const HJQuadrature qd = scalar_hj_quadrature(3, 3, 0, Branch::negative);
  for (double r : {0.01, 0.5, 3.0, 80.0}) CHECK(qd.uprime(r) == doctest::Approx(p.uprime(r)));
}

TEST_CASE("HJ quadrature residuals on the validity interval") {
  for (double q : {1.3, 1.5, 2.5}) {
    for (double C : {-1.0, 0.0, 2.0}) {
      for (Branch b : {Branch::negative, Branch::positive}) {
        const HJQuadrature qd = scalar_hj_quadrature(q, 3, C, b);
        if (qd.validity.empty()) continue;
        const auto r = inside(qd.validity, 1e-2, 1e2, 400);
        if (r.front() >= r.back()) continue;
        std::vector<double> up;
        for (double x : r) up.push_back(qd.uprime(x));
        CHECK(residual_hj(q, 3, r, up).max_rel < 1e-6);
        CHECK(qd.log_case == (q == 1.5));
        for (double u : up) CHECK((u < 0) == (b == Branch::negative));
      }
    }
  }
}

TEST_CASE("log-case quadrature at C = 0 lives on one side of r = 1") {
  const HJQuadrature neg = scalar_hj_quadrature(1.5, 3, 0, Branch::negative);
  const HJQuadrature pos = scalar_hj_quadrature(1.5, 3, 0, Branch::positive);
  CHECK(neg.validity.hi == doctest::Approx(1.0));
  CHECK(pos.validity.lo == doctest::Approx(1.0));
  CHECK(std::isinf(pos.validity.hi));
  // r^{1-N} ((q-1) ln r)^{-1/(q-1)} for r > 1
  CHECK(pos.uprime(5.0) == doctest::Approx(std::pow(5.0, -2.0) * std::pow(0.5 * std::log(5.0), -2.0)));
}

TEST_CASE("Hardy-Henon particular solution") {
  const auto h = hh_particular(ScalarParams{3, 2, 5, 0, 1});
  REQUIRE(h.has_value());
  CHECK(h->gamma == doctest::Approx(0.5));
  CHECK(std::pow(h->a, 4) == doctest::Approx(0.25));
  CHECK_FALSE(hh_particular(ScalarParams{3, 2, 3, 0, 1}).has_value());
  CHECK_FALSE(hh_particular(ScalarParams{3, 2, 5, 0, -1}).has_value());

  const ScalarParams cases[] = {{3, 2, 5, 0, 1},     {3, 2, 3, -3.5, -1}, {4, 1.5, 2, 0.5, 1},
                                {2.2, 1.4, 1.0, -0.6, 1}, {1.5, 2.5, 3, -1, -1}};
  for (const auto& s : cases) {
    const auto p = hh_particular(s);
    REQUIRE(p.has_value());
    const auto r = log_grid(1e-2, 1e2, 200);
    CHECK(residual_scalar(s, p->sample(r)).max_rel < 1e-8);
  }
}

TEST_CASE("ground states at the Sobolev exponent") {
  const ScalarParams s{3, 2, 5, 0, 1};
  const GroundState g = hh_ground_state(s, 1);
  CHECK(g.d == doctest::Approx(1.0 / 3.0));
  CHECK(g.a == doctest::Approx(2));
  CHECK(g.b == doctest::Approx(-0.5));
  const GroundState g2 = hh_ground_state(s, 2);
  CHECK(g2.d == doctest::Approx(16.0 / 3.0));

  // Four decades need 800 nodes for the steep q = 13 profile.
  const ScalarParams cases[] = {{3, 2, 5, 0, 1}, {2.2, 1.4, 1.8, -0.6, 1}, {1.2, 1.5, 13, -4, 1},
                                {4, 3, 14, 1, 1}};
  for (const auto& c : cases) {
    const GroundState gs = hh_ground_state(c, 0.7);
    CHECK(residual_scalar(c, gs.sample(log_grid(1e-2, 1e2, 800))).max_rel < 1e-6);
    CHECK(residual_scalar(c, gs.sample(log_grid(0.5, 2, 400))).max_rel < 1e-8);
  }
  CHECK_THROWS_AS(hh_ground_state(ScalarParams{3, 2, 4, 0, 1}, 1), InvalidParams);
  CHECK_THROWS_AS(hh_ground_state(ScalarParams{3, 2, 5, 0, -1}, 1), InvalidParams);
  CHECK_THROWS_AS(hh_ground_state(ScalarParams{1.5, 2, 2, -1, 1}, 1), InvalidParams);
}

TEST_CASE("explicit absorption family") {
  const ScalarParams cases[] = {{3, 2, 3, -4, -1}, {2.2, 1.4, 1.1, -4.2, -1}, {1.5, 2, 2.5, -1, -1}};
  for (const auto& s : cases) {
    for (Branch b : {Branch::negative, Branch::positive}) {
      const ExplicitAbsorption e = hh_absorption_explicit(s, 1, b);
      if (e.validity.empty()) continue;
      const auto r = inside(e.validity, 1e-2, 1e2, 400);
      CHECK(residual_scalar(s, e.sample(r)).max_rel < 1e-6);
    }
  }
  CHECK_THROWS_AS(hh_absorption_explicit(ScalarParams{3, 2, 3, -3, -1}, 1, Branch::positive),
                  InvalidParams);
}

TEST_CASE("explicit absorption at p = N") {
  const ScalarParams s{2, 2, 3, -2, -1};
  const ExplicitAbsorption e = hh_absorption_explicit(s, 1, Branch::positive);
  CHECK(e.log_case);
  CHECK(e.d == doctest::Approx(std::sqrt(0.5)));
  CHECK(e.expo == doctest::Approx(-1.0));
  CHECK(residual_scalar(s, e.sample(inside(e.validity, 1e-2, 1e2, 400))).max_rel < 1e-6);
  CHECK(residual_scalar(s, e.sample(log_grid(1, 1e2, 400))).max_rel < 1e-8);
  const ExplicitAbsorption n = hh_absorption_explicit(s, 1, Branch::negative);
  CHECK(n.validity.hi < 1e2);
}

TEST_CASE("system particular solution") {
  const SystemParams cases[] = {make_system(3, 2, 0.8), make_system(3, 2, 1.1),
                                make_system(3, 1.3, 1.0), make_system(4, 3, 2.5),
                                make_system(3, 2, 1.8)};
  for (const auto& s : cases) {
    const auto sp = system_particular(s, 0.5, -1);
    REQUIRE(sp.has_value());
    const auto prof = sp->sample(log_grid(1e-2, 1e2, 200));
    CHECK(residual_system(s, prof).max_rel() < 1e-8);
    CHECK(sp->lambda1 == doctest::Approx((s.p + 1) / (s.p * s.q - 1)));
  }
  CHECK_FALSE(system_particular(make_system(3, 2, 1.0)).has_value());   // q1
  CHECK_FALSE(system_particular(make_system(3, 2, 1.25)).has_value());  // q2
  CHECK_FALSE(system_particular(make_system(3, 2, 2.0)).has_value());   // q3 = q4
}

TEST_CASE("exact system solution at q = q*") {
  const SystemExactQstar e = system_exact_qstar(make_system(3, 2, 8.0 / 7.0), 1);
  CHECK(e.d == doctest::Approx(1.4));
  CHECK(e.b == doctest::Approx(1.0));
  for (auto [N, p] : {std::pair{3.0, 2.0}, {4.0, 1.7}, {3.0, 3.5}}) {
    const double qs = *critical_exponents(N, p).qstar;
    const SystemParams s = make_system(N, p, qs);
    const SystemExactQstar x = system_exact_qstar(s, 0.8);
    CHECK(residual_system(s, x.sample(log_grid(0.3, 3, 200))).max_rel() < 1e-8);
    CHECK(residual_system(s, x.sample(log_grid(1e-2, 1e2, 200))).max_rel() < 1e-6);
  }
  CHECK_THROWS_AS(system_exact_qstar(make_system(3, 2, 1.1), 1), InvalidParams);
}

TEST_CASE("residual rejects non-solutions") {
  const ScalarParams s{3, 2, 5, 0, 1};
  ProfileSamples p;
  p.r = log_grid(0.1, 10, 100);
  for (double x : p.r) {
    p.w.push_back(1 / x);
    p.wprime.push_back(-1 / (x * x));
  }
  CHECK(residual_scalar(s, p).max_rel > 0.1);
  // Constant profile with sign-changing flux.
  SystemProfileSamples c;
  c.r = log_grid(0.1, 10, 50);
  c.u1p.assign(50, 0);
  c.u2p.assign(50, 0);
  CHECK(residual_system(make_system(3, 2, 1.1), c).max_rel() == 0);
}

TEST_CASE("residual from w alone matches the residual with w'") {
  const ScalarParams s{3, 2, 5, 0, 1};
  const GroundState g = hh_ground_state(s, 1);
  ProfileSamples p = g.sample(log_grid(0.5, 2, 400));
  p.wprime.clear();
  CHECK(residual_scalar(s, p).max_rel < 1e-6);
}
