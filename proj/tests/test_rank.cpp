#include "doctest.h"

#include "ffbias/rank.hpp"
#include "ffbias/rng.hpp"
#include "helpers.hpp"
#include "rank_oracle.hpp"

using namespace ffbias;

namespace {
FieldPtr f3() { return Field::make(3, 1); }
FieldPtr f5() { return Field::make(5, 1); }
FieldPtr f7() { return Field::make(7, 1); }

// random invertible linear change of variables applied to a quadratic
MultiPoly gl_conjugate(const MultiPoly& Q, SplitMix64& rng) {
  const unsigned N = Q.nvars();
  const FieldPtr& K = Q.ctx();
  std::vector<std::vector<std::uint32_t>> M;
  for (;;) {
    M.assign(N, std::vector<std::uint32_t>(N, 0));
    for (auto& row : M)
      for (auto& x : row) x = (std::uint32_t)rng.next_below(K->size());
    if (matrix_rank(M, K) == N) break;
  }
  std::vector<MultiPoly> images;
  for (unsigned i = 0; i < N; ++i) {
    MultiPoly li = MultiPoly::zero(K, N);
    for (unsigned j = 0; j < N; ++j)
      if (M[i][j])
        li = li + MultiPoly::variable(K, N, j).scaled(K->element(M[i][j]));
    images.push_back(std::move(li));
  }
  MultiPoly out = MultiPoly::zero(K, N);
  for (const auto& [e, c] : Q.terms()) {
    MultiPoly term = MultiPoly::constant(K, N, K->element(c));
    for (unsigned j = 0; j < N; ++j)
      for (std::uint32_t k = 0; k < e[j]; ++k) term = term * images[j];
    out = out + term;
  }
  return out;
}
}  // namespace

TEST_CASE("quadratic rank examples") {
  CHECK(quadratic_rank(MultiPoly::parse("x0*x1 + x2*x3", f3(), 4)) == 2);
  CHECK(quadratic_rank(MultiPoly::parse("x0^2", f5(), 1)) == 1);
  CHECK_THROWS_AS(quadratic_rank(MultiPoly::parse("x0*x1", Field::make(2, 1), 2)),
                  error);
  try {
    quadratic_rank(MultiPoly::parse("x0*x1", Field::make(2, 1), 2));
  } catch (const error& e) {
    CHECK(e.code() == errc::characteristic_two);
  }
  CHECK_THROWS_AS(quadratic_rank(MultiPoly::parse("x0^3", f5(), 1)), error);
}

TEST_CASE("quadratic witness matches the matrix rank") {
  SplitMix64 rng(8);
  int done = 0;
  for (int s = 0; done < 40 && s < 200; ++s) {
    MultiPoly Q = MultiPoly::random(f5(), 4, 2, true, 2200 + s);
    if (Q.is_zero() || Q.degree() != 2) continue;
    unsigned r = quadratic_rank(Q);
    auto w = quadratic_witness(Q);
    REQUIRE(w);
    CHECK(w->length() == r);
    CHECK_NOTHROW(w->validate());
    ++done;
  }
  CHECK(done == 40);
}

TEST_CASE("quadratic rank is a linear invariant") {
  SplitMix64 rng(12);
  std::vector<std::string> quads = {"x0*x1 + x2*x3", "x0^2 + x1*x2",
                                    "x0^2 + x1^2 + x2^2 + x3^2", "x0*x1"};
  for (const auto& text : quads) {
    MultiPoly Q = MultiPoly::parse(text, f5(), 4);
    unsigned r = quadratic_rank(Q);
    for (int i = 0; i < 50; ++i)
      CHECK(quadratic_rank(gl_conjugate(Q, rng)) == r);
  }
}

TEST_CASE("quadratic rank is stable under base change") {
  std::vector<std::string> quads = {"x0*x1 + x2*x3", "x0^2 + x1^2",
                                    "x0^2 + 2*x1*x2"};
  for (const auto& text : quads) {
    MultiPoly Q = MultiPoly::parse(text, f3(), 4);
    unsigned r = quadratic_rank(Q);
    for (unsigned e : {2u, 3u}) {
      FieldPtr ke = Field::extend(f3(), e);
      CHECK(quadratic_rank(Q.embed_into(ke)) == r);
    }
  }
}

TEST_CASE("quadratic rank agrees with brute-force factorization") {
  // sampled here; the exhaustive sweep over every F_3 quadratic in N <= 3
  // runs in the acceptance suite
  test::QuadraticBruteForce oracle(f3());
  int done = 0;
  for (int s = 0; done < 60 && s < 300; ++s) {
    MultiPoly Q = MultiPoly::random(f3(), 3, 2, true, 3100 + s);
    if (Q.is_zero() || Q.degree() != 2) continue;
    CHECK(quadratic_rank(Q) == oracle.min_rank(Q));
    ++done;
  }
  CHECK(done == 60);
}

TEST_CASE("rank_of examples") {
  RankInterval one = rank_of(MultiPoly::parse("x0*x1 + x0 + 1", f3(), 2));
  CHECK(one.lo == 1);
  CHECK(one.hi == 1);
  CHECK(one.lo_method == "quadratic-exact");

  CHECK_THROWS_AS(rank_of(MultiPoly::parse("2", f3(), 2)), error);
  CHECK_THROWS_AS(rank_of(MultiPoly::parse("x0 + 1", f3(), 2)), error);

  RankInterval fermat = rank_of(MultiPoly::parse("x0^3 + x1^3 + x2^3 + x3^3", f7(), 4));
  CHECK(fermat.lo == 2);
  CHECK(fermat.hi == 2);
  CHECK(fermat.lo_method == "sing-codim");
  CHECK(fermat.hi_method == "witness-search");
  REQUIRE(fermat.witness);
  CHECK_NOTHROW(fermat.witness->validate());
}

TEST_CASE("rank_upper examples") {
  // constructed rank-1 cubic
  MultiPoly r1 = MultiPoly::parse("x0*x1^2 + x0*x2*x3", f5(), 4);
  auto u1 = rank_upper(r1, 50, 1, 2);
  REQUIRE(u1);
  CHECK(u1->first == 1);
  CHECK_NOTHROW(u1->second.validate());

  // sum of two cubes factors through a linear form
  auto u2 = rank_upper(MultiPoly::parse("x0^3 + x1^3", f7(), 2), 50, 1, 2);
  REQUIRE(u2);
  CHECK(u2->first == 1);

  CHECK(!rank_upper(MultiPoly::parse("x0^3 + x1^3 + x0*x1*x2", f5(), 3), 0, 1, 2));
}

TEST_CASE("witness search upper bounds on planted sums") {
  // hi never exceeds the planted number of products
  FieldPtr K = f5();
  SplitMix64 rng(77);
  for (unsigned r = 1; r <= 3; ++r) {
    for (int s = 0; s < 5; ++s) {
      MultiPoly sum = MultiPoly::zero(K, 4);
      for (unsigned i = 0; i < r; ++i) {
        MultiPoly q = MultiPoly::random(K, 4, 1, true, 4000 + 10 * s + i);
        MultiPoly p = MultiPoly::random(K, 4, 2, true, 5000 + 10 * s + i);
        sum = sum + q * p;
      }
      if (sum.is_zero() || sum.degree() != 3) continue;
      auto u = rank_upper(sum, 300, 9 + s, 2);
      REQUIRE(u);
      CHECK(u->first <= r);
      CHECK_NOTHROW(u->second.validate());
    }
  }
}

TEST_CASE("quartic plants reachable only with quadratic factors") {
  // Q1 P1 + Q2 P2 with all factors quadratic: degree 4, no linear form
  // divides a generic such sum
  FieldPtr K = f5();
  int done = 0;
  for (int s = 0; done < 3 && s < 20; ++s) {
    MultiPoly sum = MultiPoly::zero(K, 3);
    for (unsigned i = 0; i < 2; ++i) {
      MultiPoly q = MultiPoly::random(K, 3, 2, true, 8800 + 10 * s + i);
      MultiPoly p = MultiPoly::random(K, 3, 2, true, 9900 + 10 * s + i);
      sum = sum + q * p;
    }
    if (sum.is_zero() || sum.degree() != 4) continue;
    auto u = rank_upper(sum, 400, 3, 2);
    REQUIRE(u);
    CHECK(u->first <= 2);
    CHECK_NOTHROW(u->second.validate());
    ++done;
  }
  CHECK(done == 3);
}

TEST_CASE("rank_lower_via_sing examples") {
  FieldPtr F3 = f3();
  MultiPoly smooth = MultiPoly::parse("x0*x1 + x2*x3", F3, 4);
  SingularReport srep = c_regularity(smooth, 2, 100000000);
  CHECK(rank_lower_via_sing(smooth, srep) == 2);
  CHECK(rank_lower_via_sing(smooth, srep) == quadratic_rank(smooth));

  MultiPoly r1 = MultiPoly::parse("x0*x1*x2 + x0*x3*x4", F3, 5);
  SingularReport rrep = c_regularity(r1, 2, 100000000);
  CHECK(rank_lower_via_sing(r1, rrep) == 1);

  // mismatched report
  CHECK_THROWS_AS(rank_lower_via_sing(smooth, rrep), error);

  // unconfident degrades to 1
  SingularReport fake = srep;
  fake.confident = false;
  CHECK(rank_lower_via_sing(smooth, fake) == 1);
}

TEST_CASE("sandwich examples") {
  FieldPtr F3 = f3();
  MultiPoly F = MultiPoly::parse("x0*x1", F3, 2);
  SandwichReport s1 = sandwich_check(F, F3->one());
  CHECK(s1.rank_f == 1);
  CHECK(s1.rank_hat == 2);
  SandwichReport s0 = sandwich_check(F, F3->zero());
  CHECK(s0.rank_hat == 1);
}

TEST_CASE("sandwich holds on seeded quadratics") {
  SplitMix64 rng(55);
  FieldPtr K = f5();
  int done = 0;
  for (int s = 0; done < 60 && s < 400; ++s) {
    unsigned nv = 2 + (unsigned)(s % 4);  // N in 2..5
    MultiPoly F = MultiPoly::random(K, nv, 2, false, 6000 + s);
    if (F.degree() != 2) continue;
    FieldElement t = test::random_element(K, rng);
    CHECK_NOTHROW(sandwich_check(F, t));
    ++done;
  }
  CHECK(done == 60);
}

TEST_CASE("factorization validation rejects bad witnesses") {
  FieldPtr K = f3();
  Factorization bad;
  bad.target = MultiPoly::parse("x0*x1", K, 2);
  bad.pairs.emplace_back(MultiPoly::parse("x0", K, 2), MultiPoly::parse("x0", K, 2));
  CHECK_THROWS_AS(bad.validate(), error);

  Factorization deg;
  deg.target = MultiPoly::parse("x0*x1", K, 2);
  deg.pairs.emplace_back(MultiPoly::parse("x0*x1", K, 2),
                         MultiPoly::parse("1", K, 2));
  CHECK_THROWS_AS(deg.validate(), error);
}

TEST_CASE("matrix rank over small fields") {
  FieldPtr K = f3();
  CHECK(matrix_rank({{1, 0}, {0, 1}}, K) == 2);
  CHECK(matrix_rank({{1, 2}, {2, 2}}, K) == 2);
  CHECK(matrix_rank({{1, 2}, {2, 1}}, K) == 1);  // row2 = 2 * row1 mod 3
  CHECK(matrix_rank({{0, 0}, {0, 0}}, K) == 0);
}
