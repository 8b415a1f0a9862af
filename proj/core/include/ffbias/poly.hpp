#ifndef FFBIAS_POLY_HPP
#define FFBIAS_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ffbias/field.hpp"

namespace ffbias {

// Graded lexicographic term order, highest total degree first.  Fixes the
// canonical print order and makes report output byte-stable.
struct TermOrder {
  bool operator()(const std::vector<std::uint32_t>& a,
                  const std::vector<std::uint32_t>& b) const {
    std::uint64_t da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

struct HomogenizationResult;

// Sparse multivariate polynomial over a field context.  Exponent vectors
// have length nvars; zero coefficients are never stored.  Immutable in
// practice: every operation returns a new value.
class MultiPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;
  using TermMap = std::map<Exponents, std::uint32_t, TermOrder>;

  MultiPoly() = default;

  static MultiPoly zero(FieldPtr ctx, unsigned nvars);
  static MultiPoly constant(FieldPtr ctx, unsigned nvars, const FieldElement& c);
  static MultiPoly monomial(FieldPtr ctx, unsigned nvars, Exponents exps,
                            const FieldElement& c);
  static MultiPoly variable(FieldPtr ctx, unsigned nvars, unsigned var);

  // Text grammar (see README): sums of '*'-joined atoms, where an atom is
  // a natural number (reduced mod p), a base-field generator power g^k, an
  // extension generator power y^k, or a variable power x<i>^e / z^e ('z'
  // aliases the last variable).  parse(print(P)) == P on canonical forms.
  static MultiPoly parse(std::string_view text, FieldPtr ctx, unsigned nvars);

  // Uniform independent coefficients over all monomials of total degree
  // <= d (== d when homogeneous); bit-reproducible per seed.
  static MultiPoly random(FieldPtr ctx, unsigned nvars, unsigned degree,
                          bool homogeneous, std::uint64_t seed);

  bool valid() const { return static_cast<bool>(ctx_); }
  const FieldPtr& ctx() const { return ctx_; }
  unsigned nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  // Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;

  FieldElement coefficient(const Exponents& e) const;
  FieldElement constant_term() const;

  FieldElement evaluate(const std::vector<FieldElement>& point) const;
  MultiPoly top_homogeneous() const;
  HomogenizationResult homogenize(const FieldElement& t) const;
  MultiPoly partial(unsigned var) const;
  std::vector<MultiPoly> partials() const;

  // Same coefficients seen inside an extension of the base context.
  MultiPoly embed_into(const FieldPtr& ext) const;
  // Substitute a value for the last variable; result has nvars-1 variables.
  MultiPoly substitute_last(const FieldElement& v) const;

  std::string str() const;

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;
  MultiPoly scaled(const FieldElement& c) const;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

 private:
  FieldPtr ctx_;
  unsigned nvars_ = 0;
  TermMap terms_;

  void add_term(const Exponents& e, std::uint32_t coeff_idx);
  void require_valid() const;
  static void require_compatible(const MultiPoly& a, const MultiPoly& b);
};

struct HomogenizationResult {
  MultiPoly poly;      // homogeneous of degree deg(F), nvars+1 variables
  FieldElement shift;  // the t in F - t
};

}  // namespace ffbias

#endif
