#ifndef FFBIAS_CENSUS_HPP
#define FFBIAS_CENSUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffbias/poly.hpp"
#include "ffbias/rational.hpp"

namespace ffbias {

// Exact fiber sizes of F over V(k_n): counts[i] = #F^{-1}(element i) and
// the counts always sum to q^{nN}.
struct FiberCensus {
  FieldPtr field;  // the evaluation field k_n
  unsigned level_n = 0;
  unsigned nvars = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t count_of(const FieldElement& t) const;
};

struct LevelMeasures {
  std::vector<Rational> mu;  // by element index, exact count/q^{nN}
  Rational delta;            // max_{t,s} |mu(t) - mu(s)|, exact
  bool uniform = false;
  double b_n = 0.0;                    // -log_{q^n}(delta); unset when uniform
  std::optional<Rational> b_n_exact;   // set when delta is a pure power 1/q^s
};

struct BiasLevel {
  unsigned n = 0;
  bool skipped = false;
  std::string required;  // evaluation count that broke the budget
  FiberCensus census;
  LevelMeasures measures;
};

// Per-level bias data plus the finite-sample estimate
// B^ = max over computed n of 1/b_n (uniform levels contribute 0).
// The estimate is a witness from finitely many levels, not a limit.
struct BiasReport {
  FieldPtr base;
  unsigned nvars = 0;
  std::string poly;
  std::vector<BiasLevel> levels;
  double bias_estimate = 0.0;
  std::optional<Rational> bias_estimate_exact;
  unsigned attained_at_n = 0;      // 0 when every level is uniform
  bool stable_at_nmax = false;     // max was attained before the last computed level
};

struct ProjectiveCount {
  std::string variety;
  unsigned n = 0;
  std::uint64_t points = 0;
};

struct FiberIdentityReport {
  std::uint64_t fiber = 0;     // #F|_n^{-1}(t)
  std::uint64_t y_points = 0;  // #Y_t(k_n)
  std::uint64_t x_points = 0;  // #X(k_n)
};

// Evaluation field for counting a polynomial over level n: extensions are
// built from base-field polynomials; a polynomial already over k_j can
// only be counted over k_j itself.
FieldPtr resolve_eval_field(const MultiPoly& F, unsigned n);

// Exact census by full enumeration of V(k_n).  Deterministic: any worker
// count produces identical counts.  Throws BudgetExceeded when
// q^{nN} > budget, reporting the required evaluation count.
FiberCensus census(const MultiPoly& F, unsigned n, std::uint64_t budget,
                   unsigned workers = 1);

LevelMeasures measures(const FiberCensus& c);

BiasReport bias_estimate(const MultiPoly& F, unsigned n_max, std::uint64_t budget,
                         unsigned workers = 1);

// Number of projective zeros of a nonzero homogeneous H, via the affine
// cone: (#zeros - 1)/(q^n - 1), with the divisibility asserted.
ProjectiveCount projective_count(const MultiPoly& H, unsigned n, std::uint64_t budget,
                                 unsigned workers = 1, const std::string& tag = "");

// Verifies #F^{-1}(t) = #Y_t(k_n) - #X(k_n) exactly and returns the three
// counts; a mismatch throws IdentityViolation since the identity is a
// theorem.
FiberIdentityReport fiber_identity_check(const MultiPoly& F, const FieldElement& t,
                                         unsigned n, std::uint64_t budget,
                                         unsigned workers = 1);

// Shared sweep: exact number of points where every polynomial vanishes.
// All polynomials must live over the same context and are evaluated over
// K.  When assert_vanishes is given it is checked to vanish at every
// common zero found (used for the Euler-relation cross-check).  Points are
// collected (as index vectors) only while the running count stays within
// point_cap; pass 0 to skip collection.
struct ZeroCount {
  std::uint64_t count = 0;
  std::vector<std::vector<std::uint32_t>> points;
  bool points_complete = false;
};
ZeroCount count_common_zeros(const std::vector<MultiPoly>& polys, const FieldPtr& K,
                             unsigned workers, std::uint64_t point_cap = 0,
                             const MultiPoly* assert_vanishes = nullptr);

}  // namespace ffbias

#endif
