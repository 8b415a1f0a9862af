#ifndef FFBIAS_EXPERIMENT_HPP
#define FFBIAS_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffbias/census.hpp"
#include "ffbias/rank.hpp"
#include "ffbias/singular.hpp"

namespace ffbias::exp {

struct FieldSpec {
  std::uint64_t p = 2;
  unsigned m = 1;
  unsigned n = 1;
};

// "p^m" or "p^m:n", e.g. "3^1:2"; plain "p" means m = 1.
FieldSpec parse_field_spec(const std::string& text);

struct Config {
  std::string field = "2^1";
  unsigned nvars = 2;
  std::string poly;
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000000;
  unsigned workers = 1;
  unsigned nmax = 4;
  unsigned level_n = 0;  // census level; 0 = field spec's n
  std::vector<int> c_values = {2, 3};
  unsigned t_ext_degree = 1;
  unsigned degree = 3;         // ensemble sample degree
  unsigned ensemble_size = 10;
  std::uint64_t rank_budget = 200;
  unsigned rank_ext_degree = 2;

  FieldPtr base_field() const;
  MultiPoly parsed_poly() const;  // requires poly text
};

// ---- deviation bound shape (verify-lemma3) ----

struct Lemma3Row {
  unsigned n = 0;
  std::string t;
  Rational deviation;  // |mu_n(t) - q^{-n}|, exact
  Rational scaled_sq;  // deviation^2 * q^{n(c-2)}, exact
};

struct Lemma3PerN {
  unsigned n = 0;
  Rational max_deviation;
  Rational scaled_sq;  // max_deviation^2 * q^{n(c-2)}
  double scaled = 0.0;
};

// Empirical fit of |mu_n(t) - 1/q^n| <= M / q^{n(c/2-1)}: M^ is the
// smallest constant consistent with the observed deviations.  Squared
// scaled deviations are kept as exact rationals so the monotone-shape and
// attainment checks are tolerance-free.
struct Lemma3Report {
  int c = 0;
  std::string poly;
  GoodnessVerdict goodness;
  bool goodness_warning = false;  // verdict was inconclusive
  std::vector<Lemma3Row> rows;
  std::vector<Lemma3PerN> per_n;
  double m_hat = 0.0;
  unsigned attained_n = 0;
  bool attained_smallest_n = false;
  bool shape_nonincreasing = false;
};

Lemma3Report verify_lemma3(const MultiPoly& F, int c, unsigned t_ext_degree,
                           unsigned n_max, std::uint64_t budget, unsigned workers = 1);

// ---- derived bound B^ <= 2/(c-2) ----

struct DerivedBoundReport {
  std::string status;  // "ok" | "vacuous" | "inconclusive"
  int c_star = 0;
  bool all_confident = false;
  BiasReport bias;
  GoodnessAnalysis analysis;
  double bound = 0.0;
  double slack = 0.0;
};

// c_star = min codim over X and the sampled Y_t (confident entries only,
// and inconclusive unless all are confident); a violated bound throws
// BoundViolation with both sides.
DerivedBoundReport derived_bound(const MultiPoly& F, unsigned t_ext_degree,
                                 unsigned n_max, std::uint64_t budget,
                                 unsigned workers = 1);

// ---- ensemble ----

struct EnsembleRow {
  std::uint64_t seed = 0;
  std::string poly;
  std::string error;
  unsigned rank_lo = 0;
  std::optional<unsigned> rank_hi;
  std::string lo_method;
  int codim_x = 0;
  bool codim_confident = false;
  std::vector<int> c_good;  // per configured c: 1 pass, 0 fail, -1 inconclusive
  std::vector<std::optional<LevelMeasures>> level_measures;  // index n-1; nullopt = skipped
  double bias_est = 0.0;
  std::optional<Rational> bias_exact;
  int c_star = 0;
  bool all_confident = false;
  std::optional<double> bound_slack;  // set when all_confident and c_star > 2
};

// One full pipeline row: sample (or take the planted polynomial), rank
// interval, c-goodness sweep, bias levels, derived-bound slack.  Failures
// land in row.error and the run continues.
EnsembleRow ensemble_row(const Config& cfg, std::uint64_t row_seed,
                         const MultiPoly* planted = nullptr);

std::string ensemble_csv_header(const Config& cfg);
std::string ensemble_csv_row(const Config& cfg, const EnsembleRow& row);

struct EnsembleOutput {
  std::string csv;
  std::string aggregate_json;
  std::vector<EnsembleRow> rows;
};

// Rows are seeded derive_seed(cfg.seed, i) and emitted in row order
// regardless of worker scheduling; the aggregate tabulates c-goodness
// failures by rank upper bound and halts on a certified inconsistency
// (a confident sing-codim lower bound contradicting the X report).
EnsembleOutput run_ensemble(const Config& cfg);

// ---- serialized command reports (what the CLI prints) ----

std::string run_census(const Config& cfg);
std::string run_bias(const Config& cfg);
std::string run_rank(const Config& cfg);
std::string run_singular(const Config& cfg);
std::string run_good(const Config& cfg);
std::string run_verify_lemma3(const Config& cfg, int c);
std::string run_derived_bound(const Config& cfg);

}  // namespace ffbias::exp

#endif
