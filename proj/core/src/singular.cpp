#include "ffbias/singular.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ffbias/census.hpp"

namespace ffbias {

namespace {

std::string u128_str(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + (int)(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned __int128 ipow128(std::uint64_t b, unsigned e) {
  unsigned __int128 v = 1;
  for (unsigned i = 0; i < e; ++i) v *= b;
  return v;
}

// Projective representatives from affine cone points: scale so the first
// nonzero coordinate is 1, drop the origin, keep first occurrences.
std::vector<std::string> normalize_points(
    const std::vector<std::vector<std::uint32_t>>& affine, const Field& K) {
  std::vector<std::string> out;
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& pt : affine) {
    std::size_t lead = pt.size();
    for (std::size_t i = 0; i < pt.size(); ++i)
      if (pt[i] != 0) {
        lead = i;
        break;
      }
    if (lead == pt.size()) continue;  // origin
    std::uint32_t s = K.idx_inv(pt[lead]);
    std::vector<std::uint32_t> rep(pt.size());
    for (std::size_t i = 0; i < pt.size(); ++i) rep[i] = K.idx_mul(pt[i], s);
    if (!seen.insert(rep).second) continue;
    std::string str = "[";
    for (std::size_t i = 0; i < rep.size(); ++i) {
      if (i) str += ":";
      str += K.element_string(rep[i]);
    }
    str += "]";
    out.push_back(std::move(str));
  }
  return out;
}

}  // namespace

std::uint64_t singular_points(const MultiPoly& H, unsigned n, std::uint64_t budget,
                              unsigned workers, std::vector<std::string>* points_out,
                              std::uint64_t point_cap) {
  if (!H.valid()) raise(errc::invalid_argument, "null polynomial");
  if (H.is_zero() || !H.is_homogeneous())
    raise(errc::not_homogeneous, "singular locus needs a nonzero homogeneous polynomial");
  FieldPtr K = resolve_eval_field(H, n);
  unsigned __int128 total = ipow128(K->size(), H.nvars());
  if (total > budget)
    raise(errc::budget_exceeded, "singular count requires " + u128_str(total) +
                                     " evaluations, budget is " + std::to_string(budget));

  const unsigned d = (unsigned)H.degree();
  std::vector<MultiPoly> parts = H.partials();
  std::uint64_t affine_cap =
      points_out ? point_cap * (K->size() - 1) + 1 : 0;

  ZeroCount z;
  if (d % K->characteristic() != 0) {
    // p does not divide d: the partials cut the cone locus and H must
    // vanish on it (Euler relation) -- computed as the partials-only count
    // with H asserted zero at every hit, which makes the two variants
    // equal by construction or aborts.
    z = count_common_zeros(parts, K, workers, affine_cap, &H);
  } else {
    std::vector<MultiPoly> all;
    all.push_back(H);
    for (auto& P : parts) all.push_back(std::move(P));
    z = count_common_zeros(all, K, workers, affine_cap);
  }

  std::uint64_t projective = 0;
  if (z.count > 0) {
    std::uint64_t cone = z.count - 1;
    std::uint64_t lines = K->size() - 1;
    if (cone % lines != 0)
      raise(errc::divisibility_violation,
            "singular cone count " + std::to_string(z.count) +
                " is not 1 mod (q^n - 1); arithmetic bug");
    projective = cone / lines;
  }
  if (points_out) {
    points_out->clear();
    if (z.points_complete && projective <= point_cap)
      *points_out = normalize_points(z.points, *K);
  }
  return projective;
}

DimEstimate dim_estimate(const std::vector<std::pair<unsigned, std::uint64_t>>& counts,
                         std::uint64_t q) {
  if (counts.empty())
    raise(errc::insufficient_levels, "no computed levels");
  bool all_zero = true;
  for (const auto& [n, c] : counts)
    if (c != 0) all_zero = false;
  if (all_zero) {
    DimEstimate e;
    e.dim = std::nullopt;
    e.confident = counts.size() >= 2;
    return e;
  }
  std::vector<std::pair<unsigned, std::uint64_t>> usable;
  for (const auto& [n, c] : counts)
    if (c != 0) usable.emplace_back(n, c);
  if (usable.size() < 2)
    raise(errc::insufficient_levels,
          "need at least two levels with nonzero counts");
  const double lq = std::log((double)q);
  std::vector<long> rounded;
  double last_slope = 0.0;
  for (std::size_t i = 0; i + 1 < usable.size(); ++i) {
    auto [n1, c1] = usable[i];
    auto [n2, c2] = usable[i + 1];
    double s = (std::log((double)c2) - std::log((double)c1)) /
               ((double)(n2 - n1) * lq);
    rounded.push_back(std::lround(s));
    last_slope = s;
  }
  DimEstimate e;
  long d = rounded.back();
  bool consistent = true;
  for (long r : rounded)
    if (r != d) consistent = false;
  e.dim = (int)std::max(0l, d);
  e.confident = consistent && d >= 0 &&
                std::abs(last_slope - (double)d) <= SingularReport::kSlopeTolerance;
  return e;
}

SingularReport c_regularity(const MultiPoly& H, unsigned n_max, std::uint64_t budget,
                            unsigned workers, const std::string& tag) {
  if (!H.valid()) raise(errc::invalid_argument, "null polynomial");
  if (H.is_zero() || !H.is_homogeneous())
    raise(errc::not_homogeneous, "c-regularity needs a nonzero homogeneous polynomial");
  if (n_max < 1) raise(errc::invalid_argument, "n_max must be >= 1");

  SingularReport rep;
  rep.poly = H.str();
  rep.variety = tag.empty() ? "X[" + rep.poly + "]" : tag;
  rep.ambient_vars = H.nvars();
  rep.variety_dim = (int)H.nvars() - 2;

  const std::uint64_t q = H.ctx()->base_size();
  const std::uint64_t field_cap = std::min(H.ctx()->max_size(), Field::kHardCap);
  // A polynomial already over k_j is measurable at its own level only.
  std::vector<unsigned> level_ns;
  if (H.ctx()->is_base())
    for (unsigned n = 1; n <= n_max; ++n) level_ns.push_back(n);
  else
    level_ns.push_back(H.ctx()->ext_degree());
  std::vector<std::pair<unsigned, std::uint64_t>> computed;
  for (unsigned n : level_ns) {
    SingularLevel lvl;
    lvl.n = n;
    unsigned __int128 field_size = ipow128(q, n);
    if (field_size > field_cap) {
      lvl.skipped = true;
      lvl.required = "field of " + u128_str(field_size) + " elements";
      rep.levels.push_back(std::move(lvl));
      continue;
    }
    unsigned __int128 evals = ipow128((std::uint64_t)field_size, H.nvars());
    if (evals > budget) {
      lvl.skipped = true;
      lvl.required = u128_str(evals);
      rep.levels.push_back(std::move(lvl));
      continue;
    }
    lvl.count = singular_points(H, n, budget, workers, &lvl.points);
    lvl.points_complete = !lvl.points.empty() || lvl.count == 0;
    computed.emplace_back(n, lvl.count);
    rep.levels.push_back(std::move(lvl));
  }
  if (computed.empty())
    raise(errc::budget_exceeded,
          "budget excludes every singular level up to n_max = " + std::to_string(n_max));

  bool all_zero = true;
  for (auto& [n, c] : computed)
    if (c) all_zero = false;
  if (all_zero) {
    rep.empty_locus = true;
    rep.dim_est = std::nullopt;
    rep.confident = computed.size() >= 2;
    rep.codim = (int)rep.ambient_vars;
    return rep;
  }
  rep.empty_locus = false;
  try {
    DimEstimate e = dim_estimate(computed, q);
    rep.dim_est = e.dim;
    rep.confident = e.confident;
  } catch (const error& err) {
    if (err.code() != errc::insufficient_levels) throw;
    // single usable level: a growth fit needs two, fall back to the raw
    // size heuristic and mark it unconfident
    auto [n, c] = computed.back();
    for (auto& [nn, cc] : computed)
      if (cc) { n = nn; c = cc; }
    rep.dim_est = (int)std::max(
        0l, std::lround(std::log((double)c) / ((double)n * std::log((double)q))));
    rep.confident = false;
  }
  int d = rep.dim_est.value_or(0);
  rep.codim = std::max(0, rep.variety_dim - d);
  return rep;
}

namespace {

MultiPoly map_poly(const FlattenMap& fm, const MultiPoly& P) {
  MultiPoly out = MultiPoly::zero(fm.dst, P.nvars());
  for (const auto& [e, c] : P.terms()) {
    FieldElement mapped = fm(FieldElement(fm.src, c));
    out = out + MultiPoly::monomial(fm.dst, P.nvars(), e, mapped);
  }
  return out;
}

}  // namespace

GoodnessAnalysis goodness_analysis(const MultiPoly& F, unsigned t_ext_degree,
                                   unsigned n_max, std::uint64_t budget,
                                   unsigned workers) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  if (F.degree() < 2) raise(errc::degree_too_low, "c-goodness needs degree >= 2");
  if (!F.ctx()->is_base())
    raise(errc::invalid_argument, "c-goodness sweep needs a base-field polynomial");
  if (t_ext_degree < 1) raise(errc::invalid_argument, "t_ext_degree must be >= 1");

  GoodnessAnalysis out;
  MultiPoly top = F.top_homogeneous();
  out.reports.push_back(
      c_regularity(top, n_max, budget, workers, "X[" + top.str() + "]"));

  if (t_ext_degree == 1) {
    const FieldPtr& base = F.ctx();
    out.t_sample_spec = "t over k_1 = " + base->spec_string() + " (" +
                        std::to_string(base->size()) + " values)";
    for (std::uint64_t ti = 0; ti < base->size(); ++ti) {
      FieldElement t = base->element(ti);
      HomogenizationResult hat = F.homogenize(t);
      out.reports.push_back(c_regularity(hat.poly, n_max, budget, workers,
                                         "Y[t=" + t.str() + "]"));
    }
  } else {
    // Shifts from a proper extension k_j: flatten k_j into a single-level
    // base so Y_t can itself be measured over further extensions.
    FieldPtr Kt = Field::extend(F.ctx(), t_ext_degree);
    FlattenMap fm = flatten_field(Kt);
    MultiPoly F_flat = map_poly(fm, F.embed_into(Kt));
    out.t_sample_spec = "t over k_" + std::to_string(t_ext_degree) + " of " +
                        F.ctx()->spec_string() + " (" + std::to_string(Kt->size()) +
                        " values)";
    for (std::uint64_t ti = 0; ti < Kt->size(); ++ti) {
      FieldElement t = Kt->element(ti);
      HomogenizationResult hat = F_flat.homogenize(fm(t));
      out.reports.push_back(c_regularity(hat.poly, n_max, budget, workers,
                                         "Y[t=" + t.str() + "]"));
    }
  }
  return out;
}

GoodnessVerdict verdict_for(const GoodnessAnalysis& a, int c) {
  GoodnessVerdict v;
  v.c = c;
  v.t_sample_spec = a.t_sample_spec;
  bool any_fail = false, any_inconclusive = false;
  for (const auto& rep : a.reports) {
    GoodnessEntry e;
    e.variety = rep.variety;
    e.codim = rep.codim;
    e.confident = rep.confident;
    e.report = rep;
    if (c <= 0) {
      e.verdict = 1;  // vacuous
    } else if (!rep.confident) {
      e.verdict = -1;
      any_inconclusive = true;
    } else if (rep.codim >= c) {
      e.verdict = 1;
    } else {
      e.verdict = 0;
      any_fail = true;
    }
    v.entries.push_back(std::move(e));
  }
  v.overall = any_fail ? GoodnessVerdict::Overall::not_good
              : any_inconclusive ? GoodnessVerdict::Overall::inconclusive
                                 : GoodnessVerdict::Overall::good;
  return v;
}

GoodnessVerdict c_good_check(const MultiPoly& F, int c, unsigned t_ext_degree,
                             unsigned n_max, std::uint64_t budget, unsigned workers) {
  return verdict_for(goodness_analysis(F, t_ext_degree, n_max, budget, workers), c);
}

}  // namespace ffbias
