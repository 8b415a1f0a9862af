#ifndef FFBIAS_RANK_HPP
#define FFBIAS_RANK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffbias/poly.hpp"
#include "ffbias/singular.hpp"

namespace ffbias {

// A length-r expression target = sum Q_i P_i with deg Q_i, deg P_i < deg
// target; re-expanded and checked on every emission.
struct Factorization {
  std::vector<std::pair<MultiPoly, MultiPoly>> pairs;
  MultiPoly target;

  unsigned length() const { return (unsigned)pairs.size(); }
  void validate() const;  // throws InvalidArgument on any violation
};

struct RankInterval {
  unsigned lo = 1;
  std::optional<unsigned> hi;
  std::optional<Factorization> witness;  // for hi, when available
  std::string lo_method;  // "quadratic-exact" | "sing-codim" | "degenerate"
  std::string hi_method;  // "quadratic-exact" | "witness-search" | "degenerate"
};

struct RankOptions {
  std::uint64_t search_budget = 200;  // randomized attempts, split across r
  std::uint64_t seed = 1;
  unsigned extension_degree = 2;  // witnesses may live over k_e, e <= this
  unsigned sing_nmax = 3;
  std::uint64_t sing_budget = 10000000;
  unsigned workers = 1;
};

// Exact strength of a homogeneous quadratic over odd characteristic:
// ceil(rank(B)/2) for the symmetric matrix B with B_ii = a_ii and
// B_ij = c_ij/2.  Matrix rank is a geometric invariant, so the value is
// valid over the algebraic closure.
unsigned quadratic_rank(const MultiPoly& Q);

// Explicit factorization of length quadratic_rank(Q), built by iterated
// square/product splitting; square pairs may need a quadratic extension
// for the sqrt.  Returns nullopt only when the sqrt scan is infeasible.
std::optional<Factorization> quadratic_witness(const MultiPoly& Q);

// Ascending-r search for an upper bound: structured candidates first
// (monomial content, two-variable linear factors, greedy pair grouping),
// then seeded random linear forms Q_i with the P_i solved from the
// coefficient-matching linear system.  A found witness is an upper bound
// over the closure; NoWitnessFound (nullopt) is not a lower bound.
std::optional<std::pair<unsigned, Factorization>> rank_upper(
    const MultiPoly& Ft, std::uint64_t search_budget, std::uint64_t seed,
    unsigned extension_degree);

// Certified lower bound from the singular locus of X_{F~}: any length-r
// expression forces codim(Sing) <= 2r, so rank >= ceil(codim/2); degrades
// to 1 when the dimension estimate is unconfident.
unsigned rank_lower_via_sing(const MultiPoly& Ft, const SingularReport& sing);

RankInterval rank_of(const MultiPoly& F, const RankOptions& opts = {});

struct SandwichReport {
  unsigned rank_f = 0;
  unsigned rank_hat = 0;
};

// Exact check of rank(F) <= rank(F^_t) <= rank(F) + 1 for quadratics.
SandwichReport sandwich_check(const MultiPoly& F, const FieldElement& t);

// Gaussian elimination rank over a field context (rows of element indices).
unsigned matrix_rank(std::vector<std::vector<std::uint32_t>> M, const FieldPtr& K);

}  // namespace ffbias

#endif
