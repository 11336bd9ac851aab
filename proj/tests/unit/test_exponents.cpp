#include <doctest.h>

#include <cmath>
#include <random>

#include "hh/exponents.hpp"

using namespace hh;

TEST_CASE("critical exponents for N=3, p=2") {
  const SystemExponents e = critical_exponents(3, 2);
  CHECK(*e.q1 == doctest::Approx(1.0));
  CHECK(*e.q2 == doctest::Approx(1.25));
  CHECK(*e.q3 == doctest::Approx(2.0));
  CHECK(*e.q4 == doctest::Approx(2.0));
  CHECK(*e.qstar == doctest::Approx(8.0 / 7.0));
  CHECK(e.n_ratio == doctest::Approx(1.5));
}

TEST_CASE("q1, q2 and q* meet at p = N/(N-1)") {
  const SystemExponents e = critical_exponents(3, 1.5);
  CHECK(*e.q1 == doctest::Approx(1.5));
  CHECK(*e.q2 == doctest::Approx(1.5));
  CHECK(*e.qstar == doctest::Approx(1.5));
}

TEST_CASE("undefined exponents are reported, not NaN") {
  const SystemExponents e = critical_exponents(3, 1.0);
  CHECK_FALSE(e.q3.has_value());
  const SystemExponents f = critical_exponents(3, 0.5);  // (N-1)p - 1 = 0
  CHECK_FALSE(f.q1.has_value());
  ScalarParams s{2, 2, 3, 0, 1};  // N = p
  const ScalarExponents g = critical_exponents(s);
  CHECK_FALSE(g.qc.has_value());
  CHECK_FALSE(g.qS.has_value());
  CHECK(g.gamma.has_value());
}

TEST_CASE("system to scalar map") {
  const ScalarParams s = to_scalar(make_system(3, 2, 2), 1);
  CHECK(s.p == doctest::Approx(1.5));
  CHECK(s.q == doctest::Approx(2.0));
  CHECK(s.sigma == doctest::Approx(-3.0));
  CHECK(s.N == doctest::Approx(2.0));
  const SystemParams back = from_scalar(s);
  CHECK(back.N == doctest::Approx(3.0));
  CHECK(back.p == doctest::Approx(2.0));
  CHECK(back.q == doctest::Approx(2.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_system(3, 1, 1), InvalidParams);    // pq = 1
  CHECK_THROWS_AS(make_system(1.5, 2, 2), InvalidParams);  // N < 2
  CHECK_THROWS_AS(make_system(NAN, 2, 2), InvalidParams);
  CHECK_THROWS_AS(make_scalar(3, 1, 2, 0, 1), InvalidParams);
  CHECK_THROWS_AS(make_scalar(3, 2, 0.5, 0, 1), InvalidParams);
  CHECK_THROWS_AS(make_scalar(3, 2, 2, 0, 0), InvalidParams);
  const SystemParams s = make_system(3, 2, 3);
  CHECK(s.swapped);
  CHECK(s.p == 3);
  CHECK(s.q == 2);
  CHECK(make_system(2.5, 2, 2).low_dimension());
}

TEST_CASE("scalar region classification") {
  CHECK(classify(ScalarParams{3, 2, 5, 0, 1}) == ScalarRegion::A);
  CHECK(classify(ScalarParams{2, 2, 3, -2, 1}) == ScalarRegion::Triple_pNsigma);
  CHECK(classify(ScalarParams{1.2, 1.5, 2, -4, 1}) == ScalarRegion::F);
  CHECK(classify(ScalarParams{1.5, 2, 2, -1, 1}) == ScalarRegion::B);
  CHECK(classify(ScalarParams{3, 1.5, 2, -2, 1}) == ScalarRegion::C);
  CHECK(classify(ScalarParams{2, 1.5, 2, -3, 1}) == ScalarRegion::D);
  CHECK(classify(ScalarParams{1.2, 2, 2, -1.5, 1}) == ScalarRegion::E);
  CHECK(classify(ScalarParams{2, 2, 3, -1, 1}) == ScalarRegion::Boundary_pN);
  CHECK(classify(ScalarParams{3, 2, 3, -2, 1}) == ScalarRegion::Boundary_sigmaP);
  CHECK(classify(ScalarParams{3, 2, 3, -3, 1}) == ScalarRegion::Boundary_sigmaN);
  CHECK(classify(ScalarParams{3, 2, 3, -3 * (1 + 1e-12), 1}) == ScalarRegion::Boundary_sigmaN);
}

TEST_CASE("system region classification") {
  CHECK(classify(make_system(3, 2, 1.1)) == SystemRegion::A2);
  CHECK(classify(make_system(3, 1.2, 1)) == SystemRegion::B);
  CHECK(classify(make_system(3, 2, 3)) == SystemRegion::D3);
  CHECK(classify(make_system(3, 3, 2.5)) == SystemRegion::D3);
  CHECK(classify(make_system(3, 2, 0.8)) == SystemRegion::A1);
  CHECK(classify(make_system(3, 4, 0.8)) == SystemRegion::A3);
  CHECK(classify(make_system(3, 2, 1.35)) == SystemRegion::C1);
  CHECK(classify(make_system(3, 2, 1.8)) == SystemRegion::D1);
  CHECK(classify(make_system(3, 2, 1.0)) == SystemRegion::L1);
  CHECK(classify(make_system(3, 2, 1.25)) == SystemRegion::L2);
  CHECK(classify(make_system(3, 2, 8.0 / 7.0)) == SystemRegion::Lstar);
  CHECK(classify(make_system(3, 1.5, 1.2)) == SystemRegion::P_eq_NNm1);
  CHECK(classify(make_system(3, 2, 1.5)) == SystemRegion::Q_eq_NNm1);
  CHECK(classify(make_system(3, 4, 1.0)) == SystemRegion::C2);
  CHECK(classify(make_system(3, 8, 1.45)) == SystemRegion::C3);
  CHECK(classify(make_system(3, 3, 1.6)) == SystemRegion::D2);
}

TEST_CASE("region transform examples and round trip") {
  const ScalarParams s{2, 1.5, 2, -3, 1};
  const RegionTransform t = region_transform(s, -1);
  CHECK(t.image.N == doctest::Approx(1.0));
  CHECK(t.image.sigma == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.C == doctest::Approx(1.0));
  CHECK(classify(s) == ScalarRegion::D);
  CHECK(classify(t.image) == ScalarRegion::B);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 200; ++i) {
    const ScalarParams a{1.2 + 3 * U(rng), 1.1 + 2 * U(rng), 0, -4 + 5 * U(rng), 1};
    ScalarParams b = a;
    b.q = a.p - 1 + 0.1 + 2 * U(rng);
    const double lam = (U(rng) < 0.5 ? -1 : 1) * (0.2 + 3 * U(rng));
    const RegionTransform f = region_transform(b, lam);
    const RegionTransform g = region_transform(f.image, 1 / lam);
    CHECK(g.image.N == doctest::Approx(b.N).epsilon(1e-12));
    CHECK(g.image.sigma == doctest::Approx(b.sigma).epsilon(1e-12));
    CHECK(f.C * g.C == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lambda = -1 exchanges A<->F, B<->D, C<->E") {
  struct Pair {
    ScalarParams s;
    ScalarRegion from, to;
  };
  const Pair cases[] = {
      {{3, 2, 2, -1, 1}, ScalarRegion::A, ScalarRegion::F},
      {{1.5, 2, 2, -1, 1}, ScalarRegion::B, ScalarRegion::D},
      {{3, 1.5, 2, -2, 1}, ScalarRegion::C, ScalarRegion::E},
  };
  for (const auto& c : cases) {
    CHECK(classify(c.s) == c.from);
    const ScalarParams img = region_transform(c.s, -1).image;
    CHECK(classify(img) == c.to);
    CHECK(classify(region_transform(img, -1).image) == c.from);
  }
}

TEST_CASE("identities of the system to scalar map on a random grid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const double N = 3 + 5 * U(rng);
    const double p = 1.05 + 6 * U(rng);
    const double q = std::max(1.0 / p + 0.01, p * U(rng));
    if (p * q <= 1.001 || q > p) continue;
    const SystemParams s = make_system(N, p, q);
    const ScalarParams c = to_scalar(s, 1);
    const SystemExponents e = critical_exponents(s);
    CHECK(c.N + c.sigma == doctest::Approx(N - (N - 1) * q));
    CHECK((c.p - c.N) / (c.p - 1) == doctest::Approx(N - (N - 1) * p));
    CHECK(*critical_exponents(c).gamma ==
          doctest::Approx((p + N - (N - 1) * p * q) / (p * q - 1)));
    const double nr = N / (N - 1);
    const double margin = 1e-6;
    auto away = [&](double a, double b) { return std::abs(a - b) > margin * std::max(1.0, b); };
    if (away(p, nr)) CHECK((c.N > c.p) == (p > nr));
    if (away(q, nr)) CHECK((c.N + c.sigma > 0) == (q < nr));
    if (away(q, *e.q2)) CHECK((c.p + c.sigma > 0) == (q < *e.q2));
    if (p > nr * (1 + margin)) {
      const ScalarExponents ce = critical_exponents(c);
      if (away(q, *e.q1)) CHECK((c.q < *ce.qc) == (q < *e.q1));
      if (away(q, *e.qstar)) CHECK((c.q < *ce.qS) == (q < *e.qstar));
    }
    ++checked;
  }
  CHECK(checked > 500);
}

TEST_CASE("coarse system region maps to the scalar region of the same letter") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double N = 3 + 4 * U(rng), p = 1.05 + 6 * U(rng);
    const double q = p * (0.05 + 0.95 * U(rng));
    if (p * q <= 1.001) continue;
    const SystemParams s = make_system(N, p, q);
    const SystemRegion r = classify(s, 1e-6);
    if (is_boundary(r)) continue;
    const ScalarRegion c = classify(to_scalar(s, 1));
    const char expect = coarse(r);
    CHECK(to_string(c) == std::string(1, expect));
  }
}

TEST_CASE("ordering of the critical curves") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double N = 2 + 8 * U(rng);
    const double p = 1.0001 + 10 * U(rng);
    const SystemExponents e = critical_exponents(N, p);
    const double q1 = *e.q1, q2 = *e.q2, q3 = *e.q3, q4 = *e.q4, qs = *e.qstar;
    const double lo = std::min(q2, q3), hi = std::max(q2, q3);
    // The full chain holds exactly when p >= 2.
    if (p >= 2) {
      CHECK(q1 <= lo * (1 + 1e-12));
      CHECK(hi <= q4 * (1 + 1e-12));
    }
    if (p >= e.n_ratio) {
      CHECK(q1 <= qs * (1 + 1e-12));
      CHECK(qs <= q2 * (1 + 1e-12));
    }
    CHECK(q1 <= q3 * (1 + 1e-12));
    CHECK(q2 <= q4 * (1 + 1e-12));
    CHECK((q2 <= q3) == (p <= N));
    CHECK((qs <= q3) == (p <= 2 * (N - 1)));
    CHECK((q1 <= e.n_ratio) == (p >= e.n_ratio));
  }
  // Below p = 2 the curve q3 lies above q4.
  const SystemExponents e = critical_exponents(3, 1.5);
  CHECK(*e.q3 > *e.q4);
}
