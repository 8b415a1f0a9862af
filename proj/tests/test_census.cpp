#include "doctest.h"

#include <cmath>

#include "ffbias/census.hpp"
#include "ffbias/rng.hpp"
#include "helpers.hpp"

using namespace ffbias;

namespace {
FieldPtr f2() { return Field::make(2, 1); }
FieldPtr f3() { return Field::make(3, 1); }

// sum_{i=1..r} x_{2i-1} x_{2i} in 2r variables
MultiPoly hyperbolic(const FieldPtr& K, unsigned r) {
  MultiPoly out = MultiPoly::zero(K, 2 * r);
  for (unsigned i = 0; i < r; ++i) {
    MultiPoly::Exponents e(2 * r, 0);
    e[2 * i] = 1;
    e[2 * i + 1] = 1;
    out = out + MultiPoly::monomial(K, 2 * r, e, K->one());
  }
  return out;
}
}  // namespace

TEST_CASE("census examples") {
  FiberCensus c = census(MultiPoly::parse("x0*x1", f2(), 2), 1, 1000);
  CHECK(c.counts == std::vector<std::uint64_t>{3, 1});
  CHECK(c.total == 4);

  // coordinate projection: all fibers q^{n(N-1)}
  FiberCensus lin = census(MultiPoly::parse("x0", f3(), 3), 2, 100000);
  for (auto v : lin.counts) CHECK(v == 81);  // 9^2

  FiberCensus sq = census(MultiPoly::parse("x0^2", f3(), 1), 1, 1000);
  CHECK(sq.counts == std::vector<std::uint64_t>{1, 2, 0});
}

TEST_CASE("census budget") {
  CHECK_THROWS_AS(census(MultiPoly::parse("x0*x1", f2(), 2), 10, 100), error);
  try {
    census(MultiPoly::parse("x0*x1", f2(), 2), 10, 100);
  } catch (const error& e) {
    CHECK(e.code() == errc::budget_exceeded);
    CHECK(std::string(e.what()).find("1048576") != std::string::npos);
  }
}

TEST_CASE("measures examples") {
  LevelMeasures m = measures(census(MultiPoly::parse("x0*x1", f2(), 2), 1, 100));
  CHECK(m.delta == Rational(1, 2));
  REQUIRE(m.b_n_exact);
  CHECK(*m.b_n_exact == Rational(1, 1));

  LevelMeasures u = measures(census(MultiPoly::parse("x0", f3(), 2), 1, 100));
  CHECK(u.uniform);
  CHECK(u.delta.is_zero());

  LevelMeasures s = measures(census(MultiPoly::parse("x0^2", f3(), 1), 1, 100));
  CHECK(s.delta == Rational(2, 3));
  CHECK(!s.b_n_exact);
  CHECK(s.b_n == doctest::Approx(0.369070246428543).epsilon(1e-12));
}

TEST_CASE("hyperbolic bias is exactly 1/r") {
  for (unsigned r : {1u, 2u}) {
    MultiPoly Q = hyperbolic(f3(), r);
    BiasReport rep = bias_estimate(Q, 2, 100000000);
    for (const auto& lvl : rep.levels) {
      REQUIRE(!lvl.skipped);
      REQUIRE(lvl.measures.b_n_exact);
      CHECK(*lvl.measures.b_n_exact == Rational((std::int64_t)r, 1));
    }
    REQUIRE(rep.bias_estimate_exact);
    CHECK(*rep.bias_estimate_exact == Rational(1, (std::int64_t)r));
  }
}

TEST_CASE("linear polynomial has zero bias estimate") {
  BiasReport rep = bias_estimate(MultiPoly::parse("x0 + 2*x1", f3(), 2), 3, 1000000);
  for (const auto& lvl : rep.levels) {
    REQUIRE(!lvl.skipped);
    CHECK(lvl.measures.uniform);
  }
  CHECK(rep.bias_estimate == 0.0);
  REQUIRE(rep.bias_estimate_exact);
  CHECK(rep.bias_estimate_exact->is_zero());
  CHECK(rep.attained_at_n == 0);
}

TEST_CASE("bias with no affordable level") {
  CHECK_THROWS_AS(bias_estimate(MultiPoly::parse("x0*x1", f3(), 2), 2, 5), error);
  try {
    bias_estimate(MultiPoly::parse("x0*x1", f3(), 2), 2, 5);
  } catch (const error& e) {
    CHECK(e.code() == errc::no_completed_levels);
  }
}

TEST_CASE("projective counts") {
  CHECK(projective_count(MultiPoly::parse("x0", f2(), 2), 1, 1000).points == 1);

  // two lines sharing a point in P^2 over F_3: 4 + 4 - 1
  CHECK(projective_count(MultiPoly::parse("x0*x1", f3(), 3), 1, 1000).points == 7);

  // smooth conic in P^2 over F_5 is a P^1: q + 1 points
  FieldPtr f5 = Field::make(5, 1);
  CHECK(projective_count(MultiPoly::parse("x0*x1 - z^2", f5, 3), 1, 1000).points == 6);

  CHECK_THROWS_AS(projective_count(MultiPoly::parse("x0 + 1", f3(), 2), 1, 1000),
                  error);
}

TEST_CASE("fiber identity examples") {
  FiberIdentityReport r =
      fiber_identity_check(MultiPoly::parse("x0*x1", f2(), 2), f2()->one(), 1, 10000);
  CHECK(r.fiber == 1);
  CHECK(r.y_points == 3);
  CHECK(r.x_points == 2);

  // linear F: hyperplane counts at any t
  FieldPtr F3 = f3();
  MultiPoly lin = MultiPoly::parse("x0 + 2*x1 + x2", F3, 3);
  for (unsigned n : {1u, 2u}) {
    FieldPtr K = Field::extend(F3, n);
    FiberIdentityReport lr =
        fiber_identity_check(lin, K->element(n), n, 100000000);
    std::uint64_t Q = K->size();
    CHECK(lr.fiber == Q * Q);
  }
}

TEST_CASE("fiber identity on seeded cubics") {
  FieldPtr F3 = f3();
  SplitMix64 rng(2024);
  int checked = 0;
  for (int s = 0; s < 5; ++s) {
    MultiPoly F = MultiPoly::random(F3, 3, 3, false, 4000 + s);
    if (F.degree() < 1) continue;
    for (unsigned n : {1u, 2u}) {
      FieldPtr K = Field::extend(F3, n);
      FieldElement t = test::random_element(K, rng);
      CHECK_NOTHROW(fiber_identity_check(F, t, n, 100000000));
      ++checked;
    }
  }
  CHECK(checked >= 8);
}

TEST_CASE("census totals always sum to q^{nN}") {
  for (int s = 0; s < 10; ++s) {
    MultiPoly F = MultiPoly::random(f3(), 3, 2, false, 600 + s);
    FiberCensus c = census(F, 1, 100000);
    std::uint64_t sum = 0;
    for (auto v : c.counts) sum += v;
    CHECK(sum == c.total);
  }
}

TEST_CASE("parallel census matches serial bit-exactly") {
  for (int s = 0; s < 6; ++s) {
    MultiPoly F = MultiPoly::random(f3(), 4, 3, false, 1700 + s);
    FiberCensus serial = census(F, 2, 100000000, 1);
    for (unsigned w : {2u, 8u}) {
      FiberCensus par = census(F, 2, 100000000, w);
      CHECK(par.counts == serial.counts);
    }
  }
}

TEST_CASE("compiled census equals the naive oracle") {
  struct Case {
    FieldPtr K;
    unsigned nvars, deg, n;
  };
  std::vector<Case> cases = {
      {f2(), 3, 2, 2},
      {f3(), 2, 3, 2},
      {Field::make(2, 2), 2, 2, 1},
      {Field::make(5, 1), 3, 2, 1},
      {Field::extend(f3(), 2), 2, 2, 2},  // coefficients already in k_2
  };
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    for (int s = 0; s < 4; ++s) {
      MultiPoly F = MultiPoly::random(c.K, c.nvars, c.deg, false, 810 + s);
      FiberCensus fast = census(F, c.n, 100000);
      CHECK(fast.counts == test::naive_census(F, c.n));
    }
  }
}

TEST_CASE("Chevalley-Warning: p divides the zero count") {
  // deg F < N and F(0) = 0 force p | #F^{-1}(0)
  for (auto [pch, seed0] : {std::pair<int, int>{2, 5000}, {3, 6000}}) {
    FieldPtr K = Field::make(pch, 1);
    int done = 0;
    for (int s = 0; done < 25 && s < 200; ++s) {
      MultiPoly F = MultiPoly::random(K, 3, 2, false, seed0 + s);
      F = F - MultiPoly::constant(K, 3, F.constant_term());
      if (F.degree() < 1 || F.degree() >= 3) continue;
      FiberCensus c = census(F, 1, 100000);
      CHECK(c.counts[0] % (std::uint64_t)pch == 0);
      ++done;
    }
    CHECK(done == 25);
  }
}

TEST_CASE("same-top-part perturbations stay within twice the single bound") {
  // F and G with the same top homogeneous part; both 3-good hyperbolics.
  // With c = 3, every deviation of G obeys dev <= 2 M^_F q^{-n(c/2-1)}.
  FieldPtr F3 = f3();
  MultiPoly F = hyperbolic(F3, 2);
  std::vector<MultiPoly> lows = {
      MultiPoly::parse("x0 + 1", F3, 4),
      MultiPoly::parse("2*x1 + x2", F3, 4),
  };
  const int c = 3;
  for (std::size_t li = 0; li < lows.size(); ++li) {
    MultiPoly G = F + lows[li];
    // M^_F as the exact max over n,t of dev^2 q^{n(c-2)}
    Rational mf_sq(0, 1);
    for (unsigned n : {1u, 2u}) {
      FiberCensus cf = census(F, n, 100000000);
      std::int64_t expected = (std::int64_t)(cf.total / cf.field->size());
      Rational scale = rational_pow(3, (int)n * (c - 2));
      for (auto v : cf.counts) {
        Rational dev((std::int64_t)v - expected, (std::int64_t)cf.total);
        dev = dev.abs();
        Rational sq = dev * dev * scale;
        if (sq > mf_sq) mf_sq = sq;
      }
    }
    Rational bound_sq = mf_sq * Rational(4, 1);  // (2 M)^2
    for (unsigned n : {1u, 2u}) {
      FiberCensus cg = census(G, n, 100000000);
      std::int64_t expected = (std::int64_t)(cg.total / cg.field->size());
      Rational scale = rational_pow(3, (int)n * (c - 2));
      for (auto v : cg.counts) {
        Rational dev((std::int64_t)v - expected, (std::int64_t)cg.total);
        dev = dev.abs();
        CHECK(dev * dev * scale <= bound_sq);
      }
    }
  }
}
