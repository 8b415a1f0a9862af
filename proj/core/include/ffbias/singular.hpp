#ifndef FFBIAS_SINGULAR_HPP
#define FFBIAS_SINGULAR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffbias/poly.hpp"

namespace ffbias {

struct SingularLevel {
  unsigned n = 0;
  bool skipped = false;
  std::string required;
  std::uint64_t count = 0;  // projective singular points over k_n
  std::vector<std::string> points;
  bool points_complete = false;
};

// Singular locus measurements of the projective hypersurface cut by a
// homogeneous H in N variables (dimension N-2 in P^{N-1}).  codim is
// measured inside the hypersurface; an empty locus gets codim = N by
// convention so "c-regular for all c <= N" stays representable.
struct SingularReport {
  static constexpr double kSlopeTolerance = 0.25;

  std::string variety;
  std::string poly;
  unsigned ambient_vars = 0;  // N
  int variety_dim = 0;        // N - 2
  std::vector<SingularLevel> levels;
  bool empty_locus = false;
  std::optional<int> dim_est;  // nullopt means EMPTY
  bool confident = false;
  int codim = 0;

  bool is_c_regular(int c) const { return codim >= c; }
};

struct DimEstimate {
  std::optional<int> dim;  // nullopt means EMPTY
  bool confident = false;
};

// Lang-Weil style growth fit: a d-dimensional locus has about q^{nd}
// points over k_n, so the count slope in n estimates d.  Throws
// InsufficientLevels unless the counts are all zero or at least two levels
// are nonzero.
DimEstimate dim_estimate(const std::vector<std::pair<unsigned, std::uint64_t>>& counts,
                         std::uint64_t q);

// Exact number of projective points where H and all its partials vanish
// over k_n, by enumeration of the affine cone.  When p does not divide
// deg H the partials alone cut the locus (Euler) and H is asserted to
// vanish on it; both variants therefore agree by construction or the run
// aborts.  Points (projective representatives) are reported when the count
// stays within point_cap.
std::uint64_t singular_points(const MultiPoly& H, unsigned n, std::uint64_t budget,
                              unsigned workers = 1,
                              std::vector<std::string>* points_out = nullptr,
                              std::uint64_t point_cap = 64);

SingularReport c_regularity(const MultiPoly& H, unsigned n_max, std::uint64_t budget,
                            unsigned workers = 1, const std::string& tag = "");

struct GoodnessEntry {
  std::string variety;
  int codim = 0;
  bool confident = false;
  int verdict = -1;  // 1 pass, 0 fail, -1 inconclusive
  SingularReport report;
};

// c-goodness is sampled: t runs over one finite extension, never all of
// the algebraic closure, and every verdict carries that sampling spec.
struct GoodnessVerdict {
  enum class Overall { good, not_good, inconclusive };
  int c = 0;
  std::string t_sample_spec;
  std::vector<GoodnessEntry> entries;
  Overall overall = Overall::inconclusive;

  const char* overall_str() const {
    switch (overall) {
      case Overall::good: return "c-good";
      case Overall::not_good: return "not-c-good";
      default: return "inconclusive";
    }
  }
};

// All per-variety regularity reports for X^F and the sampled Y_t^F,
// computed once; verdicts for any c are derived from them.
struct GoodnessAnalysis {
  std::string t_sample_spec;
  std::vector<SingularReport> reports;  // X first, then Y_t by t index
};

GoodnessAnalysis goodness_analysis(const MultiPoly& F, unsigned t_ext_degree,
                                   unsigned n_max, std::uint64_t budget,
                                   unsigned workers = 1);
GoodnessVerdict verdict_for(const GoodnessAnalysis& a, int c);

GoodnessVerdict c_good_check(const MultiPoly& F, int c, unsigned t_ext_degree,
                             unsigned n_max, std::uint64_t budget,
                             unsigned workers = 1);

}  // namespace ffbias

#endif
