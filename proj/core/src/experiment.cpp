#include "ffbias/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "json.hpp"
#include "ffbias/rng.hpp"

namespace ffbias::exp {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out.push_back(c);
  }
  out += "\"";
  return out;
}

constexpr int kSchemaVersion = 1;

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  FieldSpec out;
  std::size_t caret = text.find('^');
  std::size_t colon = text.find(':');
  auto to_u64 = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      raise(errc::invalid_argument, "bad field spec '" + text + "' (want p^m or p^m:n)");
    return std::stoull(s);
  };
  std::string p_part = text.substr(0, std::min(caret, colon));
  out.p = to_u64(p_part);
  if (caret != std::string::npos) {
    std::size_t m_end = colon == std::string::npos ? text.size() : colon;
    if (colon != std::string::npos && colon < caret)
      raise(errc::invalid_argument, "bad field spec '" + text + "'");
    out.m = (unsigned)to_u64(text.substr(caret + 1, m_end - caret - 1));
  }
  if (colon != std::string::npos)
    out.n = (unsigned)to_u64(text.substr(colon + 1));
  if (out.m < 1 || out.n < 1)
    raise(errc::invalid_argument, "bad field spec '" + text + "'");
  return out;
}

FieldPtr Config::base_field() const {
  FieldSpec spec = parse_field_spec(field);
  FieldPtr base = Field::make(spec.p, spec.m);
  return spec.n > 1 ? Field::extend(base, spec.n) : base;
}

MultiPoly Config::parsed_poly() const {
  if (poly.empty()) raise(errc::invalid_argument, "no polynomial given (--poly)");
  return MultiPoly::parse(poly, base_field(), nvars);
}

// ---- deviation bound shape ----

Lemma3Report verify_lemma3(const MultiPoly& F, int c, unsigned t_ext_degree,
                           unsigned n_max, std::uint64_t budget, unsigned workers) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  Lemma3Report rep;
  rep.c = c;
  rep.poly = F.str();
  rep.goodness = c_good_check(F, c, t_ext_degree, n_max, budget, workers);
  if (rep.goodness.overall == GoodnessVerdict::Overall::not_good)
    raise(errc::not_c_good, "polynomial is not " + std::to_string(c) +
                                "-good on the sampled shifts");
  rep.goodness_warning =
      rep.goodness.overall == GoodnessVerdict::Overall::inconclusive;

  const std::uint64_t q = F.ctx()->base_size();
  const unsigned N = F.nvars();
  const std::uint64_t field_cap = std::min(F.ctx()->max_size(), Field::kHardCap);
  unsigned first_n = 0;

  for (unsigned n = 1; n <= n_max; ++n) {
    unsigned __int128 field_size = 1, evals = 1;
    for (unsigned i = 0; i < n; ++i) field_size *= q;
    for (unsigned i = 0; i < n * N; ++i) evals *= q;
    if (evals > budget || field_size > field_cap) continue;
    FiberCensus cs = census(F, n, budget, workers);
    if (first_n == 0) first_n = n;

    // expected fiber size q^{n(N-1)} and scale factor q^{n(c-2)}
    std::int64_t expected = 1;
    for (unsigned i = 0; i < n * (N - 1); ++i) expected *= (std::int64_t)q;
    Rational scale = rational_pow(q, (int)n * (c - 2));

    Lemma3PerN per;
    per.n = n;
    per.max_deviation = Rational::from_int(0);
    for (std::uint64_t ti = 0; ti < cs.counts.size(); ++ti) {
      Rational dev((std::int64_t)cs.counts[ti] - expected, (std::int64_t)cs.total);
      dev = dev.abs();
      Lemma3Row row;
      row.n = n;
      row.t = cs.field->element_string(ti);
      row.deviation = dev;
      row.scaled_sq = dev * dev * scale;
      if (dev > per.max_deviation) per.max_deviation = dev;
      rep.rows.push_back(std::move(row));
    }
    per.scaled_sq = per.max_deviation * per.max_deviation * scale;
    per.scaled = std::sqrt(per.scaled_sq.to_double());
    rep.per_n.push_back(std::move(per));
  }
  if (rep.per_n.empty())
    raise(errc::no_completed_levels, "budget excludes every level");

  Rational best = Rational::from_int(-1);
  for (const auto& per : rep.per_n) {
    if (per.scaled_sq > best) {
      best = per.scaled_sq;
      rep.attained_n = per.n;
    }
  }
  rep.m_hat = std::sqrt(best.to_double());
  rep.attained_smallest_n = rep.attained_n == first_n;
  rep.shape_nonincreasing = true;
  for (std::size_t i = 0; i + 1 < rep.per_n.size(); ++i)
    if (rep.per_n[i].scaled_sq < rep.per_n[i + 1].scaled_sq)
      rep.shape_nonincreasing = false;
  return rep;
}

// ---- derived bound ----

DerivedBoundReport derived_bound(const MultiPoly& F, unsigned t_ext_degree,
                                 unsigned n_max, std::uint64_t budget,
                                 unsigned workers) {
  DerivedBoundReport rep;
  rep.analysis = goodness_analysis(F, t_ext_degree, n_max, budget, workers);
  rep.all_confident = true;
  rep.c_star = 0;
  bool first = true;
  for (const auto& r : rep.analysis.reports) {
    if (!r.confident) rep.all_confident = false;
    if (first || r.codim < rep.c_star) rep.c_star = r.codim;
    first = false;
  }
  rep.bias = bias_estimate(F, n_max, budget, workers);

  if (!rep.all_confident) {
    rep.status = "inconclusive";
    return rep;
  }
  if (rep.c_star <= 2) {
    rep.status = "vacuous";
    return rep;
  }
  Rational bound(2, rep.c_star - 2);
  rep.bound = bound.to_double();
  bool violated;
  if (rep.bias.bias_estimate_exact)
    violated = *rep.bias.bias_estimate_exact > bound;
  else
    violated = rep.bias.bias_estimate > rep.bound;
  if (violated)
    raise(errc::bound_violation,
          "bias estimate " + fmt_double(rep.bias.bias_estimate) +
              " exceeds 2/(c-2) = " + bound.str() + " at c = " +
              std::to_string(rep.c_star) +
              "; re-examine the codimension estimates at higher n_max");
  rep.status = "ok";
  rep.slack = rep.bound - rep.bias.bias_estimate;
  return rep;
}

// ---- ensemble ----

EnsembleRow ensemble_row(const Config& cfg, std::uint64_t row_seed,
                         const MultiPoly* planted) {
  EnsembleRow row;
  row.seed = row_seed;
  row.c_good.assign(cfg.c_values.size(), -1);
  row.level_measures.assign(cfg.nmax, std::nullopt);
  try {
    FieldPtr base = cfg.base_field();
    if (!base->is_base())
      raise(errc::invalid_argument, "ensemble needs a base field spec (p^m)");
    MultiPoly F = planted ? *planted
                          : MultiPoly::random(base, cfg.nvars, cfg.degree,
                                              /*homogeneous=*/false, row_seed);
    row.poly = F.str();
    if (F.degree() < 2)
      raise(errc::degree_too_low,
            "sampled polynomial has degree " + std::to_string(F.degree()));
    MultiPoly top = F.top_homogeneous();

    GoodnessAnalysis analysis =
        goodness_analysis(F, cfg.t_ext_degree, cfg.nmax, cfg.budget, 1);
    const SingularReport& xrep = analysis.reports.front();
    row.codim_x = xrep.codim;
    row.codim_confident = xrep.confident;

    if (top.degree() == 2 && base->characteristic() != 2) {
      unsigned r = quadratic_rank(top);
      row.rank_lo = r;
      row.rank_hi = r;
      row.lo_method = "quadratic-exact";
    } else {
      row.rank_lo = rank_lower_via_sing(top, xrep);
      row.lo_method = xrep.confident ? "sing-codim" : "degenerate";
      auto upper =
          rank_upper(top, cfg.rank_budget, row_seed, cfg.rank_ext_degree);
      if (upper) {
        row.rank_hi = upper->first;
        if (*row.rank_hi < row.rank_lo) {
          row.rank_lo = *row.rank_hi;
          row.lo_method = "degenerate";
        }
      }
    }

    for (std::size_t ci = 0; ci < cfg.c_values.size(); ++ci) {
      GoodnessVerdict v = verdict_for(analysis, cfg.c_values[ci]);
      row.c_good[ci] = v.overall == GoodnessVerdict::Overall::good ? 1
                       : v.overall == GoodnessVerdict::Overall::not_good ? 0
                                                                         : -1;
    }

    BiasReport bias = bias_estimate(F, cfg.nmax, cfg.budget, 1);
    for (const auto& lvl : bias.levels)
      if (!lvl.skipped && lvl.n >= 1 && lvl.n <= cfg.nmax)
        row.level_measures[lvl.n - 1] = lvl.measures;
    row.bias_est = bias.bias_estimate;
    row.bias_exact = bias.bias_estimate_exact;

    row.all_confident = true;
    bool first = true;
    for (const auto& r : analysis.reports) {
      if (!r.confident) row.all_confident = false;
      if (first || r.codim < row.c_star) row.c_star = r.codim;
      first = false;
    }
    if (row.all_confident && row.c_star > 2) {
      Rational bound(2, row.c_star - 2);
      row.bound_slack = bound.to_double() - row.bias_est;
      bool violated = row.bias_exact ? *row.bias_exact > bound
                                     : row.bias_est > bound.to_double();
      if (violated)
        row.error = "BoundViolation: bias estimate " + fmt_double(row.bias_est) +
                    " exceeds 2/(c-2) = " + bound.str();
    }
  } catch (const error& e) {
    row.error = e.what();
  }
  return row;
}

std::string ensemble_csv_header(const Config& cfg) {
  std::string h = "seed,poly,rank_lo,rank_hi,codim_X,codim_confident";
  for (int c : cfg.c_values) h += ",c_good_at_" + std::to_string(c);
  for (unsigned n = 1; n <= cfg.nmax; ++n) h += ",b_" + std::to_string(n);
  h += ",bias_est,bound_slack,error";
  return h;
}

std::string ensemble_csv_row(const Config& cfg, const EnsembleRow& row) {
  std::string line = std::to_string(row.seed);
  line += "," + csv_quote(row.poly);
  line += "," + (row.rank_lo ? std::to_string(row.rank_lo) : std::string());
  line += "," + (row.rank_hi ? std::to_string(*row.rank_hi) : std::string());
  line += "," + std::to_string(row.codim_x);
  line += row.codim_confident ? ",true" : ",false";
  for (std::size_t ci = 0; ci < cfg.c_values.size(); ++ci) {
    const char* cell = row.c_good[ci] == 1 ? "yes"
                       : row.c_good[ci] == 0 ? "no"
                                             : "inconclusive";
    line += ",";
    line += cell;
  }
  for (unsigned n = 1; n <= cfg.nmax; ++n) {
    line += ",";
    const auto& lm = row.level_measures[n - 1];
    if (!lm) continue;
    line += lm->uniform ? "uniform" : fmt_double(lm->b_n);
  }
  line += ",";
  bool bias_done = row.bias_exact.has_value();
  for (const auto& lm : row.level_measures)
    if (lm) bias_done = true;
  if (bias_done)
    line += row.bias_exact ? row.bias_exact->str() : fmt_double(row.bias_est);
  line += ",";
  if (row.bound_slack) line += fmt_double(*row.bound_slack);
  line += "," + csv_quote(row.error);
  return line;
}

EnsembleOutput run_ensemble(const Config& cfg) {
  if (cfg.ensemble_size < 1)
    raise(errc::invalid_argument, "ensemble size must be >= 1");
  const std::size_t size = cfg.ensemble_size;
  std::vector<EnsembleRow> rows(size);
  unsigned workers = std::max(1u, cfg.workers);
  workers = (unsigned)std::min<std::size_t>(workers, size);
  if (workers <= 1) {
    for (std::size_t i = 0; i < size; ++i)
      rows[i] = ensemble_row(cfg, derive_seed(cfg.seed, i));
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < size; i += workers)
          rows[i] = ensemble_row(cfg, derive_seed(cfg.seed, i));
      });
    for (auto& t : pool) t.join();
  }

  EnsembleOutput out;
  out.csv = ensemble_csv_header(cfg) + "\n";
  for (const auto& row : rows) out.csv += ensemble_csv_row(cfg, row) + "\n";

  // aggregate and the certified consistency guard: a confident sing-codim
  // lower bound lo promises codim_X >= 2*lo - 1, so X may not fail
  // c-regularity for any c <= 2*lo - 1
  ordered_json agg;
  agg["schema_version"] = kSchemaVersion;
  agg["command"] = "ensemble-aggregate";
  agg["rows"] = size;
  ordered_json cfg_echo;
  cfg_echo["field"] = cfg.field;
  cfg_echo["nvars"] = cfg.nvars;
  cfg_echo["degree"] = cfg.degree;
  cfg_echo["seed"] = cfg.seed;
  cfg_echo["nmax"] = cfg.nmax;
  cfg_echo["budget"] = cfg.budget;
  cfg_echo["t_ext_degree"] = cfg.t_ext_degree;
  cfg_echo["c_values"] = cfg.c_values;
  cfg_echo["size"] = cfg.ensemble_size;
  agg["config"] = cfg_echo;

  ordered_json per_c = ordered_json::array();
  for (std::size_t ci = 0; ci < cfg.c_values.size(); ++ci) {
    int c = cfg.c_values[ci];
    std::uint64_t confident_rows = 0, failing_confident = 0;
    std::map<long long, std::pair<std::uint64_t, std::uint64_t>> buckets;
    for (const auto& row : rows) {
      long long hi = row.rank_hi ? (long long)*row.rank_hi : -1;
      auto& b = buckets[hi];
      ++b.first;
      if (row.all_confident) ++confident_rows;
      if (row.c_good[ci] == 0) {
        ++b.second;
        if (row.all_confident) ++failing_confident;
      }
      if (row.lo_method == "sing-codim" && row.codim_confident &&
          c <= 2 * (int)row.rank_lo - 1 && row.codim_x < c)
        raise(errc::bound_violation,
              "ensemble consistency guard: row seed " + std::to_string(row.seed) +
                  " has sing-codim rank lower bound " + std::to_string(row.rank_lo) +
                  " but X fails " + std::to_string(c) + "-regularity");
    }
    ordered_json jc;
    jc["c"] = c;
    jc["confident_rows"] = confident_rows;
    jc["failing_confident"] = failing_confident;
    ordered_json by_hi = ordered_json::array();
    for (const auto& [hi, counts] : buckets) {
      ordered_json e;
      if (hi < 0)
        e["hi"] = nullptr;
      else
        e["hi"] = hi;
      e["rows"] = counts.first;
      e["failing"] = counts.second;
      by_hi.push_back(e);
    }
    jc["by_rank_hi"] = by_hi;
    per_c.push_back(jc);
  }
  agg["per_c"] = per_c;
  agg["consistency"] = "ok";
  out.aggregate_json = agg.dump(2) + "\n";
  out.rows = std::move(rows);
  return out;
}

// ---- JSON report builders ----

namespace {

ordered_json level_json(const BiasLevel& lvl) {
  ordered_json j;
  j["n"] = lvl.n;
  if (lvl.skipped) {
    j["skipped"] = true;
    j["required"] = lvl.required;
    return j;
  }
  j["field"] = lvl.census.field->spec_string();
  if (lvl.census.field->ext_degree() > 1)
    j["modulus"] = lvl.census.field->ext_modulus_string();
  else if (lvl.census.field->base_degree() > 1)
    j["modulus"] = lvl.census.field->base_modulus_string();
  j["total"] = lvl.census.total;
  ordered_json counts;
  for (std::uint64_t i = 0; i < lvl.census.counts.size(); ++i)
    counts[lvl.census.field->element_string(i)] = lvl.census.counts[i];
  j["counts"] = counts;
  j["delta"] = lvl.measures.delta.str();
  j["uniform"] = lvl.measures.uniform;
  if (!lvl.measures.uniform) {
    j["b_n"] = lvl.measures.b_n;
    if (lvl.measures.b_n_exact) j["b_n_exact"] = lvl.measures.b_n_exact->str();
  }
  return j;
}

ordered_json bias_json(const char* command, const Config& cfg, const BiasReport& rep) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["field"] = rep.base->spec_string();
  j["nvars"] = rep.nvars;
  j["poly"] = rep.poly;
  ordered_json levels = ordered_json::array();
  for (const auto& lvl : rep.levels) levels.push_back(level_json(lvl));
  j["levels"] = levels;
  j["bias_estimate"] = rep.bias_estimate;
  if (rep.bias_estimate_exact)
    j["bias_estimate_exact"] = rep.bias_estimate_exact->str();
  j["attained_at_n"] = rep.attained_at_n;
  j["stable_at_nmax"] = rep.stable_at_nmax;
  (void)cfg;
  return j;
}

ordered_json singular_json(const SingularReport& rep, const std::vector<int>& cs) {
  ordered_json j;
  j["variety"] = rep.variety;
  j["poly"] = rep.poly;
  j["ambient_vars"] = rep.ambient_vars;
  j["variety_dim"] = rep.variety_dim;
  ordered_json levels = ordered_json::array();
  for (const auto& lvl : rep.levels) {
    ordered_json l;
    l["n"] = lvl.n;
    if (lvl.skipped) {
      l["skipped"] = true;
      l["required"] = lvl.required;
    } else {
      l["count"] = lvl.count;
      if (lvl.points_complete && lvl.count > 0) l["points"] = lvl.points;
    }
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["empty_locus"] = rep.empty_locus;
  if (rep.dim_est)
    j["dim_estimate"] = *rep.dim_est;
  else
    j["dim_estimate"] = "EMPTY";
  j["confident"] = rep.confident;
  j["codim"] = rep.codim;
  j["slope_tolerance"] = SingularReport::kSlopeTolerance;
  if (!cs.empty()) {
    ordered_json creg;
    for (int c : cs) creg[std::to_string(c)] = rep.is_c_regular(c);
    j["c_regular"] = creg;
  }
  return j;
}

ordered_json witness_json(const Factorization& w) {
  ordered_json j;
  j["field"] = w.target.ctx()->spec_string();
  j["length"] = w.length();
  ordered_json pairs = ordered_json::array();
  for (const auto& [Q, P] : w.pairs) {
    ordered_json p;
    p["q"] = Q.str();
    p["p"] = P.str();
    pairs.push_back(p);
  }
  j["pairs"] = pairs;
  return j;
}

}  // namespace

std::string run_census(const Config& cfg) {
  MultiPoly F = cfg.parsed_poly();
  FieldSpec spec = parse_field_spec(cfg.field);
  unsigned n = cfg.level_n ? cfg.level_n : spec.n;

  BiasReport rep;
  rep.base = F.ctx()->is_base() ? F.ctx() : Field::make(spec.p, spec.m);
  rep.nvars = F.nvars();
  rep.poly = F.str();
  BiasLevel lvl;
  lvl.n = n;
  lvl.census = census(F, n, cfg.budget, cfg.workers);
  lvl.measures = measures(lvl.census);
  bool uniform = lvl.measures.uniform;
  if (!uniform) {
    rep.bias_estimate = 1.0 / lvl.measures.b_n;
    if (lvl.measures.b_n_exact)
      rep.bias_estimate_exact =
          Rational(lvl.measures.b_n_exact->den, lvl.measures.b_n_exact->num);
    rep.attained_at_n = n;
  } else {
    rep.bias_estimate_exact = Rational::from_int(0);
  }
  rep.stable_at_nmax = false;
  rep.levels.push_back(std::move(lvl));
  return bias_json("census", cfg, rep).dump(2) + "\n";
}

std::string run_bias(const Config& cfg) {
  MultiPoly F = cfg.parsed_poly();
  BiasReport rep = bias_estimate(F, cfg.nmax, cfg.budget, cfg.workers);
  return bias_json("bias", cfg, rep).dump(2) + "\n";
}

std::string run_rank(const Config& cfg) {
  MultiPoly F = cfg.parsed_poly();
  RankOptions opts;
  opts.search_budget = cfg.rank_budget;
  opts.seed = cfg.seed;
  opts.extension_degree = cfg.rank_ext_degree;
  opts.sing_nmax = cfg.nmax;
  opts.sing_budget = cfg.budget;
  opts.workers = cfg.workers;
  RankInterval iv = rank_of(F, opts);

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "rank";
  j["field"] = F.ctx()->spec_string();
  j["nvars"] = F.nvars();
  j["poly"] = F.str();
  j["degree"] = F.degree();
  j["lo"] = iv.lo;
  if (iv.hi)
    j["hi"] = *iv.hi;
  else
    j["hi"] = nullptr;
  j["lo_method"] = iv.lo_method;
  j["hi_method"] = iv.hi_method;
  if (iv.witness) j["witness"] = witness_json(*iv.witness);
  return j.dump(2) + "\n";
}

std::string run_singular(const Config& cfg) {
  MultiPoly F = cfg.parsed_poly();
  MultiPoly H = F.is_homogeneous() ? F : F.top_homogeneous();
  SingularReport rep = c_regularity(H, cfg.nmax, cfg.budget, cfg.workers);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "singular";
  j["field"] = H.ctx()->spec_string();
  j["nvars"] = H.nvars();
  ordered_json body = singular_json(rep, cfg.c_values);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string run_good(const Config& cfg) {
  MultiPoly F = cfg.parsed_poly();
  GoodnessAnalysis analysis =
      goodness_analysis(F, cfg.t_ext_degree, cfg.nmax, cfg.budget, cfg.workers);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "good";
  j["field"] = F.ctx()->spec_string();
  j["nvars"] = F.nvars();
  j["poly"] = F.str();
  j["t_sample_spec"] = analysis.t_sample_spec;
  j["c_values"] = cfg.c_values;
  ordered_json entries = ordered_json::array();
  for (const auto& rep : analysis.reports) {
    ordered_json e;
    e["variety"] = rep.variety;
    e["codim"] = rep.codim;
    e["confident"] = rep.confident;
    if (rep.dim_est)
      e["dim_estimate"] = *rep.dim_est;
    else
      e["dim_estimate"] = "EMPTY";
    ordered_json levels = ordered_json::array();
    for (const auto& lvl : rep.levels) {
      ordered_json l;
      l["n"] = lvl.n;
      if (lvl.skipped)
        l["skipped"] = true;
      else
        l["count"] = lvl.count;
      levels.push_back(l);
    }
    e["levels"] = levels;
    entries.push_back(e);
  }
  j["entries"] = entries;
  ordered_json overall;
  for (int c : cfg.c_values)
    overall[std::to_string(c)] = verdict_for(analysis, c).overall_str();
  j["overall"] = overall;
  j["note"] = "verdicts are sampled over " + analysis.t_sample_spec +
              ", not all of the algebraic closure";
  return j.dump(2) + "\n";
}

std::string run_verify_lemma3(const Config& cfg, int c) {
  MultiPoly F = cfg.parsed_poly();
  Lemma3Report rep =
      verify_lemma3(F, c, cfg.t_ext_degree, cfg.nmax, cfg.budget, cfg.workers);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify-lemma3";
  j["field"] = F.ctx()->spec_string();
  j["nvars"] = F.nvars();
  j["poly"] = rep.poly;
  j["c"] = rep.c;
  j["goodness"] = rep.goodness.overall_str();
  j["t_sample_spec"] = rep.goodness.t_sample_spec;
  if (rep.goodness_warning)
    j["warning"] = "goodness verdict is inconclusive; the bound shape is reported anyway";
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows) {
    ordered_json e;
    e["n"] = r.n;
    e["t"] = r.t;
    e["deviation"] = r.deviation.str();
    e["scaled_sq"] = r.scaled_sq.str();
    rows.push_back(e);
  }
  j["rows"] = rows;
  ordered_json per_n = ordered_json::array();
  for (const auto& p : rep.per_n) {
    ordered_json e;
    e["n"] = p.n;
    e["max_deviation"] = p.max_deviation.str();
    e["scaled"] = p.scaled;
    e["scaled_sq"] = p.scaled_sq.str();
    per_n.push_back(e);
  }
  j["per_n"] = per_n;
  j["m_hat"] = rep.m_hat;
  j["m_hat_attained_n"] = rep.attained_n;
  j["attained_at_smallest_n"] = rep.attained_smallest_n;
  j["shape_nonincreasing"] = rep.shape_nonincreasing;
  return j.dump(2) + "\n";
}

std::string run_derived_bound(const Config& cfg) {
  MultiPoly F = cfg.parsed_poly();
  DerivedBoundReport rep =
      derived_bound(F, cfg.t_ext_degree, cfg.nmax, cfg.budget, cfg.workers);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "derived-bound";
  j["field"] = F.ctx()->spec_string();
  j["nvars"] = F.nvars();
  j["poly"] = F.str();
  j["status"] = rep.status;
  j["c_star"] = rep.c_star;
  j["all_confident"] = rep.all_confident;
  j["t_sample_spec"] = rep.analysis.t_sample_spec;
  j["bias_estimate"] = rep.bias.bias_estimate;
  if (rep.bias.bias_estimate_exact)
    j["bias_estimate_exact"] = rep.bias.bias_estimate_exact->str();
  if (rep.status == "ok") {
    j["bound"] = rep.bound;
    j["slack"] = rep.slack;
  }
  return j.dump(2) + "\n";
}

}  // namespace ffbias::exp
