#include "doctest.h"

#include <map>

#include "ffbias/poly.hpp"
#include "ffbias/rng.hpp"
#include "helpers.hpp"

using namespace ffbias;

namespace {
FieldPtr f2() { return Field::make(2, 1); }
FieldPtr f3() { return Field::make(3, 1); }
}  // namespace

TEST_CASE("parse examples") {
  MultiPoly p = MultiPoly::parse("x0*x1 + 2", f3(), 2);
  CHECK(p.term_count() == 2);
  CHECK(p.coefficient({1, 1}).index() == 1);
  CHECK(p.coefficient({0, 0}).index() == 2);

  CHECK(MultiPoly::parse("x0^2 - x0^2", f3(), 2).is_zero());

  CHECK_THROWS_AS(MultiPoly::parse("x5", f3(), 2), error);
  try {
    MultiPoly::parse("x5", f3(), 2);
  } catch (const error& e) {
    CHECK(e.code() == errc::unknown_variable);
  }
  try {
    MultiPoly::parse("x0 + + x1", f3(), 2);
  } catch (const error& e) {
    CHECK(e.code() == errc::syntax_error);
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
  try {
    MultiPoly::parse("g*x0", f3(), 1);
  } catch (const error& e) {
    CHECK(e.code() == errc::coefficient_not_in_field);
  }
}

TEST_CASE("z aliases the last variable") {
  MultiPoly a = MultiPoly::parse("x0*x1 - z^2", f3(), 3);
  MultiPoly b = MultiPoly::parse("x0*x1 - x2^2", f3(), 3);
  CHECK(a == b);
}

TEST_CASE("evaluate examples") {
  FieldPtr f4 = Field::make(2, 2);
  MultiPoly p = MultiPoly::parse("x0*x1", f4, 2);
  FieldElement g = f4->generator();
  CHECK(p.evaluate({g, g + f4->one()}) == f4->one());

  MultiPoly q = MultiPoly::parse("x0^2 + x1 + 2", f3(), 2);
  CHECK(q.evaluate({f3()->zero(), f3()->zero()}) == q.constant_term());

  MultiPoly r = MultiPoly::parse("x0^2 + x1", f3(), 2);
  CHECK(r.evaluate({f3()->from_int(1), f3()->from_int(2)}).is_zero());

  CHECK_THROWS_AS(q.evaluate({f3()->zero()}), error);
}

TEST_CASE("evaluation embeds base coefficients into the point field") {
  FieldPtr base = f3();
  FieldPtr k2 = Field::extend(base, 2);
  MultiPoly p = MultiPoly::parse("x0^2 + 2*x0 + 1", base, 1);
  SplitMix64 rng(3);
  for (int i = 0; i < 50; ++i) {
    FieldElement x = test::random_element(k2, rng);
    FieldElement direct = p.evaluate({x});
    FieldElement expanded = x * x + k2->from_int(2) * x + k2->one();
    CHECK(direct == expanded);
  }
}

TEST_CASE("top homogeneous part") {
  MultiPoly p = MultiPoly::parse("x0^2 + x1 + 1", f3(), 2);
  CHECK(p.top_homogeneous() == MultiPoly::parse("x0^2", f3(), 2));

  MultiPoly h = MultiPoly::parse("x0^2 + x0*x1", f3(), 2);
  CHECK(h.top_homogeneous() == h);

  MultiPoly q = MultiPoly::parse("x0*x1 + x0 + x1", f2(), 2);
  CHECK(q.top_homogeneous() == MultiPoly::parse("x0*x1", f2(), 2));

  CHECK_THROWS_AS(MultiPoly::zero(f3(), 2).top_homogeneous(), error);
}

TEST_CASE("homogenize examples") {
  FieldPtr F3 = f3();
  MultiPoly p = MultiPoly::parse("x0*x1", F3, 2);
  HomogenizationResult h = p.homogenize(F3->one());
  CHECK(h.poly == MultiPoly::parse("x0*x1 + 2*z^2", F3, 3));
  CHECK(h.poly.is_homogeneous());

  MultiPoly q = MultiPoly::parse("x0^2 + x1", F3, 2);
  HomogenizationResult h0 = q.homogenize(F3->zero());
  CHECK(h0.poly == MultiPoly::parse("x0^2 + x1*z", F3, 3));

  CHECK_THROWS_AS(MultiPoly::parse("2", F3, 2).homogenize(F3->one()), error);
}

TEST_CASE("homogenization identities on random polynomials") {
  SplitMix64 rng(21);
  FieldPtr F3 = f3();
  for (int i = 0; i < 40; ++i) {
    MultiPoly p = MultiPoly::random(F3, 3, 3, false, 1000 + i);
    if (p.degree() < 1) continue;
    FieldElement t = test::random_element(F3, rng);
    HomogenizationResult h = p.homogenize(t);
    CHECK(h.poly.is_homogeneous());
    CHECK(h.poly.degree() == p.degree());
    // z = 0 specialization recovers the top homogeneous part
    CHECK(h.poly.substitute_last(F3->zero()) == p.top_homogeneous());
    // z = 1 recovers p - t
    CHECK(h.poly.substitute_last(F3->one()) ==
          p - MultiPoly::constant(F3, 3, t));
    // evaluation consistency at random points
    std::vector<FieldElement> v;
    for (int j = 0; j < 3; ++j) v.push_back(test::random_element(F3, rng));
    std::vector<FieldElement> v1 = v;
    v1.push_back(F3->one());
    CHECK(h.poly.evaluate(v1) == p.evaluate(v) - t);
  }
}

TEST_CASE("partial derivatives") {
  FieldPtr F3 = f3();
  // d/dx of x^p vanishes in characteristic p
  CHECK(MultiPoly::parse("x0^3", F3, 1).partial(0).is_zero());

  MultiPoly p = MultiPoly::parse("x0*x1", F3, 2);
  CHECK(p.partial(0) == MultiPoly::parse("x1", F3, 2));
  CHECK(p.partial(1) == MultiPoly::parse("x0", F3, 2));
}

TEST_CASE("Euler identity for homogeneous polynomials") {
  // sum x_i dF/dx_i = d F when p does not divide d
  for (auto [pch, d] : {std::pair<int, int>{5, 3}, {7, 2}, {3, 2}}) {
    FieldPtr K = Field::make(pch, 1);
    for (int s = 0; s < 10; ++s) {
      MultiPoly F = MultiPoly::random(K, 3, d, true, 500 + s);
      if (F.is_zero()) continue;
      MultiPoly sum = MultiPoly::zero(K, 3);
      for (unsigned j = 0; j < 3; ++j)
        sum = sum + MultiPoly::variable(K, 3, j) * F.partial(j);
      CHECK(sum == F.scaled(K->from_int((std::uint64_t)d)));
    }
  }
}

TEST_CASE("random polynomials are deterministic per seed") {
  MultiPoly a = MultiPoly::random(f3(), 3, 2, false, 42);
  MultiPoly b = MultiPoly::random(f3(), 3, 2, false, 42);
  CHECK(a == b);
  MultiPoly c = MultiPoly::random(f3(), 3, 2, false, 43);
  CHECK(a != c);

  for (int s = 0; s < 20; ++s) {
    MultiPoly h = MultiPoly::random(f3(), 3, 3, true, s);
    CHECK(h.is_homogeneous());
    if (!h.is_zero()) CHECK(h.degree() == 3);
  }
}

TEST_CASE("random coefficient distribution is uniform") {
  // F_2, N=2, degree <= 1: 8 polynomials, 1000 seeds, exact multinomial
  std::map<std::string, int> freq;
  for (int s = 0; s < 1000; ++s)
    ++freq[MultiPoly::random(f2(), 2, 1, false, 90000 + s).str()];
  CHECK(freq.size() == 8);
  for (const auto& [poly, count] : freq) {
    // mean 125, sigma = sqrt(1000 * 1/8 * 7/8) ~ 10.5; 5 sigma ~ 53
    CHECK(count > 125 - 53);
    CHECK(count < 125 + 53);
  }
}

TEST_CASE("print/parse round trip on random polynomials") {
  std::vector<FieldPtr> fields = {f3(), Field::make(2, 2),
                                  Field::extend(f3(), 2), Field::make(5, 1)};
  int done = 0;
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const FieldPtr& K = fields[fi];
    for (int s = 0; s < 125; ++s) {
      MultiPoly p = MultiPoly::random(K, 3, 3, false, 7700 + s);
      MultiPoly back = MultiPoly::parse(p.str(), K, 3);
      CHECK(back == p);
      ++done;
    }
  }
  CHECK(done == 500);
}

TEST_CASE("evaluation is a ring homomorphism at a fixed point") {
  SplitMix64 rng(31);
  FieldPtr K = Field::extend(f3(), 2);
  for (int s = 0; s < 30; ++s) {
    MultiPoly p = MultiPoly::random(f3(), 3, 2, false, 100 + s);
    MultiPoly q = MultiPoly::random(f3(), 3, 2, false, 200 + s);
    std::vector<FieldElement> v;
    for (int j = 0; j < 3; ++j) v.push_back(test::random_element(K, rng));
    CHECK((p + q).evaluate(v) == p.evaluate(v) + q.evaluate(v));
    CHECK((p * q).evaluate(v) == p.evaluate(v) * q.evaluate(v));
  }
}

TEST_CASE("degree bookkeeping") {
  for (int s = 0; s < 30; ++s) {
    MultiPoly p = MultiPoly::random(f3(), 2, 3, false, 300 + s);
    if (p.is_zero()) continue;
    MultiPoly top = p.top_homogeneous();
    CHECK(top.degree() == p.degree());
    MultiPoly rest = p - top;
    CHECK(rest.degree() < p.degree());
  }
}

TEST_CASE("extension coefficients print with the y generator") {
  FieldPtr k2 = Field::extend(f3(), 2);
  FieldElement y = k2->element(3);  // the extension generator
  MultiPoly p = MultiPoly::monomial(k2, 2, {1, 0}, y + k2->one());
  CHECK(p.str() == "x0 + y*x0");
  CHECK(MultiPoly::parse(p.str(), k2, 2) == p);
}
