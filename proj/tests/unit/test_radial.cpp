#include <doctest.h>

#include <cmath>
#include <random>

#include "hh/closedform.hpp"
#include "hh/dynsys.hpp"
#include "hh/radial.hpp"
#include "hh/ratefit.hpp"

using namespace hh;

TEST_CASE("rate fit recovers synthetic power-log laws") {
  for (Endpoint end : {Endpoint::zero, Endpoint::infinity}) {
    for (auto [a, b] : {std::pair{-1.5, 0.0}, {0.0, 1.0}, {2.0, -0.75}, {0.3, 2.5}}) {
      std::vector<double> t, y;
      for (int i = 0; i <= 400; ++i) {
        const double x = end == Endpoint::infinity ? 2 + 0.05 * i : -22 + 0.05 * i;
        t.push_back(x);
        y.push_back(0.7 + a * x + b * std::log(std::abs(x)));
      }
      const RateFit f = rate_fit_log(t, y, end);
      CHECK(f.alpha == doctest::Approx(a).scale(1).epsilon(1e-9));
      CHECK(f.beta == doctest::Approx(b).scale(1).epsilon(1e-9));
      CHECK(f.beta_fitted == (b != 0));
      CHECK(f.lnC == doctest::Approx(0.7).epsilon(1e-8));
    }
  }
}

TEST_CASE("rate fit window selection") {
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.1 * i);
    y.push_back(i < 100 ? 0.0 : -2 * t.back());
  }
  FitWindow w;
  w.decades = 2;
  const RateFit f = rate_fit_log(t, y, Endpoint::infinity, w);
  CHECK(f.alpha == doctest::Approx(-2));
  CHECK(f.t_hi == doctest::Approx(20));
  CHECK(f.t_lo == doctest::Approx(20 - 2 * std::log(10.0)).epsilon(1e-2));
  FitWindow tiny;
  tiny.t_lo = 5.01;
  tiny.t_hi = 5.15;
  CHECK_THROWS_AS(rate_fit_log(t, y, Endpoint::infinity, tiny), InvalidParams);
  CHECK(rate_matches(1.01, 1.0, 0.02));
  CHECK_FALSE(rate_matches(1.05, 1.0, 0.02));
  CHECK(rate_matches(0.0005, 0.0, 0.02));
}

TEST_CASE("radial integration reproduces the ground state") {
  const ScalarParams s{3, 2, 5, 0, 1};
  for (double c : {0.5, 1.0, 2.0}) {
    const GroundState g = hh_ground_state(s, c);
    const double r0 = 1e-4;
    const double w0 = g.c * std::pow(g.d, g.b);
    const RadialSeed sd = seed_from_asymptotics(s, BehaviorLabel::const_plus_sigma_power, r0, w0);
    const RadialScalarResult res = integrate_radial_scalar(s, r0, sd.w, sd.wp, 1e5);
    CHECK(res.stop == RadialStop::r_end);
    for (std::size_t i = 0; i < res.prof.size(); i += 7) {
      const double r = res.prof.r[i];
      if (r < 1e-2) continue;
      CHECK(res.prof.w[i] == doctest::Approx(g.w(r)).epsilon(1e-6));
    }
    BehaviorReport inf = classify_behavior(s, res.prof, Endpoint::infinity);
    CHECK(inf.label == BehaviorLabel::harmonic_decay);
    CHECK(inf.fit_w.alpha == doctest::Approx(-1).epsilon(0.02));
  }
}

TEST_CASE("the particular solution is preserved by radial integration") {
  const ScalarParams s{3, 2, 4, 0, 1};
  const auto h = hh_particular(s);
  REQUIRE(h);
  const RadialSeed sd = seed_from_asymptotics(s, BehaviorLabel::particular_like, 1);
  const RadialScalarResult res = integrate_radial_scalar(s, 1, sd.w, sd.wp, 5);
  for (std::size_t i = 0; i < res.prof.size(); ++i)
    CHECK(res.prof.w[i] == doctest::Approx(h->w(res.prof.r[i])).epsilon(1e-8));
}

TEST_CASE("sublinear source solution vanishing at finite radius") {
  const ScalarParams s{3, 2, 0.5, 0, 1};
  const RadialScalarResult res = integrate_radial_scalar(s, 1, 1, 0, 1e3);
  CHECK(res.stop == RadialStop::vanished);
  CHECK(res.r_final < 1e3);
}

TEST_CASE("system field equals the scalar field of the mapped parameters") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-2, 2);
  const SystemParams sy = make_system(3.5, 2.2, 1.3);
  const ScalarParams sc = to_scalar(sy, 1);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint x{U(rng), U(rng)};
    const PhasePoint a = vector_field(sy, x), b = vector_field(sc, x);
    CHECK(a.s == doctest::Approx(b.s));
    CHECK(a.z == doctest::Approx(b.z));
  }
}

TEST_CASE("direct system integration agrees with the phase plane") {
  const SystemParams sy = make_system(3, 2, 1.1);
  const double u1p0 = -1, u2p0 = -0.5;
  const RadialSystemResult rad = integrate_radial_system(sy, 1, u1p0, u2p0, 20);
  REQUIRE(rad.sign_changes_u1p == 0);
  REQUIRE(rad.sign_changes_u2p == 0);
  const ScalarParams sc = to_scalar(sy, 1);
  const PhasePoint x0 = phase_point(sy, 1, u1p0, u2p0);
  IntegrateOptions o;
  o.stop_on_convergence = false;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  o.max_step = 0.02;
  const Trajectory tr = integrate_trajectory(sc, x0, 0, std::log(rad.r_final), o);
  std::vector<double> t;
  for (double r : rad.prof.r) t.push_back(std::log(r));
  const SystemProfileSamples rec = reconstruct_uprime(sy, tr.resample(t));
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(rec.u1p[i] == doctest::Approx(rad.prof.u1p[i]).epsilon(1e-7));
    CHECK(rec.u2p[i] == doctest::Approx(rad.prof.u2p[i]).epsilon(1e-7));
  }
}

TEST_CASE("first integral for p = q") {
  const SystemParams sy = make_system(3, 2, 2);
  const RadialSystemResult fw = integrate_radial_system(sy, 1, 1, -1, 5);
  const RadialSystemResult bw = integrate_radial_system(sy, 1, 1, -1, 0.5);
  for (const auto* res : {&fw, &bw}) {
    REQUIRE(res->stop == RadialStop::r_end);
    const auto C = first_integral_pq(2, 3, res->prof);
    for (double c : C) CHECK(std::abs(c - 2) < 2e-8);
  }
  const RadialSystemResult far = integrate_radial_system(sy, 1, 1, -1, 1e-3);
  CHECK(far.stop == RadialStop::blow_up);
  CHECK(far.r_final > 0.3);
  CHECK(far.r_final < 0.35);
}

TEST_CASE("derivatives change sign at most once") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(-1, 1);
  const SystemParams sy = make_system(3, 2, 1.35);
  for (int i = 0; i < 20; ++i) {
    const RadialSystemResult a = integrate_radial_system(sy, 1, U(rng), U(rng), 100);
    CHECK(a.sign_changes_u1p <= 1);
    CHECK(a.sign_changes_u2p <= 1);
  }
}

TEST_CASE("identical data give identical solutions") {
  const SystemParams sy = make_system(3, 2, 1.1);
  const RadialSystemResult a = integrate_radial_system(sy, 1, -0.7, -0.2, 10);
  const RadialSystemResult b = integrate_radial_system(sy, 1, -0.7, -0.2, 10);
  REQUIRE(a.prof.size() == b.prof.size());
  CHECK(std::abs(a.prof.u1p.back() - b.prof.u1p.back()) < 1e-9);
}

TEST_CASE("gradient bounds on the particular system solution") {
  const SystemParams sy = make_system(3, 2, 1.1);
  const auto sp = system_particular(sy);
  REQUIRE(sp);
  const auto prof = sp->sample(log_grid(0.1, 10, 50));
  const auto sup = gradient_sup(sy, prof, std::log(0.1), std::log(10));
  CHECK(sup[0] == doctest::Approx(std::abs(sp->a1)));
  CHECK(sup[1] == doctest::Approx(std::abs(sp->a2)));
  const ScalarParams s{3, 2, 4, 0, 1};
  const auto h = hh_particular(s);
  CHECK(osserman_sup(s, h->sample(log_grid(0.1, 10, 20)), -3, 3) == doctest::Approx(h->a));
}

TEST_CASE("Pohozaev energy is constant on ground states") {
  const ScalarParams s{3, 2, 5, 0, 1};
  const GroundState g = hh_ground_state(s, 1);
  const auto F = pohozaev_energy(s, g.sample(log_grid(0.01, 100, 50)), (s.N - s.p) / s.p);
  for (double f : F) CHECK(std::abs(f) < 1e-12);
}

TEST_CASE("primitives by quadrature") {
  const SystemParams sy = make_system(3, 2, 1.1);
  const auto sp = system_particular(sy, 0, 0);
  REQUIRE(sp);
  SystemProfileSamples prof = sp->sample(log_grid(1, 10, 2000));
  integrate_primitives(prof, 0, sp->u1(1), sp->u2(1));
  CHECK(prof.u1.back() == doctest::Approx(sp->u1(10)).epsilon(1e-5));
  CHECK(prof.u2.back() == doctest::Approx(sp->u2(10)).epsilon(1e-5));
}
