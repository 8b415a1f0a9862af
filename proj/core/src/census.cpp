#include "ffbias/census.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

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

// Straight-line form of a polynomial for the enumeration sweep: terms are
// grouped by the exponent of the last (innermost) variable, outer factors
// are resolved against cached per-coordinate power rows, and the inner
// sweep is a Horner pass per point.
struct Compiled {
  unsigned nvars = 0;
  unsigned inner_deg = 0;
  struct Term {
    std::uint32_t coeff;
    std::uint32_t inner_exp;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> outer;  // (var, exp)
  };
  std::vector<Term> terms;
  std::vector<std::uint32_t> outer_maxexp;
};

Compiled compile(const MultiPoly& P) {
  Compiled c;
  c.nvars = P.nvars();
  unsigned nouter = c.nvars > 0 ? c.nvars - 1 : 0;
  c.outer_maxexp.assign(nouter, 0);
  for (const auto& [e, k] : P.terms()) {
    Compiled::Term t;
    t.coeff = k;
    t.inner_exp = c.nvars > 0 ? e[c.nvars - 1] : 0;
    for (unsigned j = 0; j < nouter; ++j) {
      if (e[j] == 0) continue;
      t.outer.emplace_back(j, e[j]);
      c.outer_maxexp[j] = std::max(c.outer_maxexp[j], e[j]);
    }
    c.inner_deg = std::max(c.inner_deg, t.inner_exp);
    c.terms.push_back(std::move(t));
  }
  return c;
}

// Per-worker sweep state over the outer odometer.
struct Sweep {
  const Field* K;
  std::uint64_t Q;
  unsigned nouter;
  std::vector<std::uint32_t> digits;
  std::vector<std::vector<std::uint32_t>> pows;  // per outer var

  Sweep(const Field& field, const std::vector<std::uint32_t>& maxexp,
        std::uint64_t outer_start)
      : K(&field), Q(field.size()), nouter((unsigned)maxexp.size()) {
    digits.assign(nouter, 0);
    std::uint64_t rem = outer_start;
    for (unsigned j = nouter; j-- > 0;) {
      digits[j] = (std::uint32_t)(rem % Q);
      rem /= Q;
    }
    pows.resize(nouter);
    for (unsigned j = 0; j < nouter; ++j) {
      pows[j].assign(maxexp[j] + 1, 1);
      refresh(j);
    }
  }

  void refresh(unsigned j) {
    auto& row = pows[j];
    for (std::size_t e = 1; e < row.size(); ++e)
      row[e] = K->idx_mul(row[e - 1], digits[j]);
  }

  void advance() {
    for (unsigned j = nouter; j-- > 0;) {
      if (++digits[j] < Q) {
        refresh(j);
        return;
      }
      digits[j] = 0;
      refresh(j);
    }
  }

  // Horner coefficients of one compiled polynomial at the current outer cell.
  void cell_coeffs(const Compiled& c, std::vector<std::uint32_t>& hc) const {
    hc.assign(c.inner_deg + 1, 0);
    for (const auto& t : c.terms) {
      std::uint32_t v = t.coeff;
      for (const auto& [var, e] : t.outer) v = K->idx_mul(v, pows[var][e]);
      hc[t.inner_exp] = K->idx_add(hc[t.inner_exp], v);
    }
  }
};

inline std::uint32_t horner(const Field& K, const std::vector<std::uint32_t>& hc,
                            std::uint32_t x) {
  std::uint32_t acc = hc.back();
  for (std::size_t e = hc.size() - 1; e-- > 0;) acc = K.idx_add(K.idx_mul(acc, x), hc[e]);
  return acc;
}

void check_budget(const Field& K, unsigned nvars, std::uint64_t budget,
                  const char* what) {
  unsigned __int128 total = ipow128(K.size(), nvars);
  if (total > budget)
    raise(errc::budget_exceeded, std::string(what) + " requires " + u128_str(total) +
                                     " evaluations, budget is " +
                                     std::to_string(budget));
}

std::uint64_t outer_space(const Field& K, unsigned nvars) {
  if (nvars == 0) return 1;
  std::uint64_t o = 1;
  for (unsigned j = 0; j + 1 < nvars; ++j) o *= K.size();
  return o;
}

void run_workers(unsigned workers, std::uint64_t space,
                 const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body) {
  if (workers <= 1 || space <= 1) {
    body(0, 0, space);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t lo = space * w / workers;
    std::uint64_t hi = space * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      try {
        body(w, lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::uint64_t FiberCensus::count_of(const FieldElement& t) const {
  if (!t.valid() || !t.field()->same_field(*field))
    raise(errc::mixed_fields, "fiber value from a different field");
  return counts[t.index()];
}

FieldPtr resolve_eval_field(const MultiPoly& F, unsigned n) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  if (n < 1) raise(errc::invalid_argument, "extension degree must be >= 1");
  const FieldPtr& ctx = F.ctx();
  if (ctx->is_base()) return Field::extend(ctx, n);
  if (ctx->ext_degree() == n) return ctx;
  raise(errc::mixed_fields,
        "polynomial over " + ctx->spec_string() + " cannot be counted over level " +
            std::to_string(n));
}

FiberCensus census(const MultiPoly& F, unsigned n, std::uint64_t budget,
                   unsigned workers) {
  FieldPtr K = resolve_eval_field(F, n);
  const unsigned N = F.nvars();
  check_budget(*K, N, budget, "census");
  const std::uint64_t Q = K->size();

  Compiled c = compile(F);
  std::uint64_t space = outer_space(*K, N);
  if (workers == 0) workers = 1;

  std::vector<std::vector<std::uint64_t>> local(workers);
  run_workers(workers, space, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    auto& hist = local[w];
    hist.assign(Q, 0);
    if (lo >= hi) return;
    Sweep sw(*K, c.outer_maxexp, lo);
    std::vector<std::uint32_t> hc;
    for (std::uint64_t o = lo; o < hi; ++o) {
      sw.cell_coeffs(c, hc);
      if (N == 0) {
        ++hist[hc[0]];
      } else {
        for (std::uint64_t v = 0; v < Q; ++v) ++hist[horner(*K, hc, (std::uint32_t)v)];
      }
      sw.advance();
    }
  });

  FiberCensus out;
  out.field = K;
  out.level_n = n;
  out.nvars = N;
  out.total = (std::uint64_t)ipow128(Q, N);
  out.counts.assign(Q, 0);
  for (unsigned w = 0; w < workers; ++w) {
    if (local[w].empty()) continue;
    for (std::uint64_t i = 0; i < Q; ++i) out.counts[i] += local[w][i];
  }
  std::uint64_t sum = 0;
  for (auto v : out.counts) sum += v;
  if (sum != out.total)
    raise(errc::identity_violation, "internal: census counts sum to " +
                                        std::to_string(sum) + ", expected " +
                                        std::to_string(out.total));
  return out;
}

LevelMeasures measures(const FiberCensus& c) {
  LevelMeasures m;
  std::uint64_t maxc = 0, minc = UINT64_MAX;
  for (auto v : c.counts) {
    maxc = std::max(maxc, v);
    minc = std::min(minc, v);
  }
  m.mu.reserve(c.counts.size());
  for (auto v : c.counts) m.mu.emplace_back((std::int64_t)v, (std::int64_t)c.total);
  m.delta = Rational((std::int64_t)(maxc - minc), (std::int64_t)c.total);
  m.uniform = m.delta.is_zero();
  if (!m.uniform) {
    const std::uint64_t q = c.field->base_size();
    const unsigned n = c.level_n;
    m.b_n = (std::log((double)m.delta.den) - std::log((double)m.delta.num)) /
            ((double)n * std::log((double)q));
    if (m.delta.num == 1) {
      std::int64_t d = m.delta.den;
      int s = 0;
      while (d % (std::int64_t)q == 0) {
        d /= (std::int64_t)q;
        ++s;
      }
      if (d == 1) m.b_n_exact = Rational(s, (std::int64_t)n);
    }
  }
  return m;
}

BiasReport bias_estimate(const MultiPoly& F, unsigned n_max, std::uint64_t budget,
                         unsigned workers) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  if (n_max < 1) raise(errc::invalid_argument, "n_max must be >= 1");
  if (F.degree() < 1)
    raise(errc::degree_too_low, "bias needs a non-constant polynomial");
  if (!F.ctx()->is_base())
    raise(errc::mixed_fields, "bias levels need a base-field polynomial");

  BiasReport rep;
  rep.base = F.ctx();
  rep.nvars = F.nvars();
  rep.poly = F.str();

  const std::uint64_t q = F.ctx()->base_size();
  const std::uint64_t field_cap = std::min(F.ctx()->max_size(), Field::kHardCap);
  unsigned last_completed = 0;

  for (unsigned n = 1; n <= n_max; ++n) {
    BiasLevel lvl;
    lvl.n = n;
    unsigned __int128 field_size = ipow128(q, n);
    unsigned __int128 evals = ipow128(q, n * F.nvars());
    if (evals > budget || field_size > field_cap) {
      lvl.skipped = true;
      lvl.required = u128_str(evals);
      rep.levels.push_back(std::move(lvl));
      continue;
    }
    lvl.census = census(F, n, budget, workers);
    lvl.measures = measures(lvl.census);
    last_completed = n;
    rep.levels.push_back(std::move(lvl));
  }
  if (last_completed == 0)
    raise(errc::no_completed_levels,
          "budget excludes every level up to n_max = " + std::to_string(n_max));

  // B^ = max over computed levels of 1/b_n; a uniform level contributes 0.
  bool all_exact = true;
  for (const auto& lvl : rep.levels)
    if (!lvl.skipped && !lvl.measures.uniform && !lvl.measures.b_n_exact)
      all_exact = false;

  double best = 0.0;
  Rational best_exact = Rational::from_int(0);
  unsigned best_n = 0;
  for (const auto& lvl : rep.levels) {
    if (lvl.skipped || lvl.measures.uniform) continue;
    if (all_exact) {
      Rational inv(lvl.measures.b_n_exact->den, lvl.measures.b_n_exact->num);
      if (best_n == 0 || inv > best_exact) {
        best_exact = inv;
        best = inv.to_double();
        best_n = lvl.n;
      }
    } else {
      double inv = 1.0 / lvl.measures.b_n;
      if (best_n == 0 || inv > best) {
        best = inv;
        best_n = lvl.n;
      }
    }
  }
  rep.bias_estimate = best;
  if (all_exact) rep.bias_estimate_exact = best_exact;
  rep.attained_at_n = best_n;
  rep.stable_at_nmax = best_n != last_completed;
  return rep;
}

ProjectiveCount projective_count(const MultiPoly& H, unsigned n, std::uint64_t budget,
                                 unsigned workers, const std::string& tag) {
  if (!H.valid()) raise(errc::invalid_argument, "null polynomial");
  if (H.is_zero() || !H.is_homogeneous())
    raise(errc::not_homogeneous, "projective count needs a nonzero homogeneous polynomial");
  FieldPtr K = resolve_eval_field(H, n);
  check_budget(*K, H.nvars(), budget, "projective count");
  ZeroCount z = count_common_zeros({H}, K, workers);
  ProjectiveCount out;
  out.variety = tag.empty() ? "V[" + H.str() + "]" : tag;
  out.n = n;
  if (z.count == 0) {
    out.points = 0;
    return out;
  }
  std::uint64_t cone = z.count - 1;  // drop the origin
  std::uint64_t lines = K->size() - 1;
  if (cone % lines != 0)
    raise(errc::divisibility_violation,
          "affine cone count " + std::to_string(z.count) +
              " is not 1 mod (q^n - 1); arithmetic bug");
  out.points = cone / lines;
  return out;
}

FiberIdentityReport fiber_identity_check(const MultiPoly& F, const FieldElement& t,
                                         unsigned n, std::uint64_t budget,
                                         unsigned workers) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  if (F.degree() < 1) raise(errc::degree_too_low, "fiber identity needs degree >= 1");
  FieldPtr K = resolve_eval_field(F, n);
  FieldElement tk = K->embed(t);

  FiberIdentityReport rep;
  rep.fiber = census(F, n, budget, workers).count_of(tk);

  HomogenizationResult hat = F.homogenize(tk);
  rep.y_points =
      projective_count(hat.poly, n, budget, workers, "Y[t=" + tk.str() + "]").points;
  rep.x_points =
      projective_count(F.top_homogeneous(), n, budget, workers, "X").points;

  if (rep.y_points < rep.x_points || rep.fiber != rep.y_points - rep.x_points)
    raise(errc::identity_violation,
          "fiber identity failed: #F^-1(t) = " + std::to_string(rep.fiber) +
              " but #Y - #X = " + std::to_string(rep.y_points) + " - " +
              std::to_string(rep.x_points));
  return rep;
}

ZeroCount count_common_zeros(const std::vector<MultiPoly>& polys, const FieldPtr& K,
                             unsigned workers, std::uint64_t point_cap,
                             const MultiPoly* assert_vanishes) {
  if (polys.empty()) raise(errc::invalid_argument, "no polynomials to intersect");
  const unsigned N = polys.front().nvars();
  for (const auto& P : polys) {
    if (!P.valid() || P.nvars() != N)
      raise(errc::dimension_mismatch, "mismatched variable counts");
    if (!K->same_field(*P.ctx()) && !K->extends(*P.ctx()))
      raise(errc::mixed_fields, "evaluation field does not extend the coefficients");
  }
  const std::uint64_t Q = K->size();
  std::vector<Compiled> comp;
  comp.reserve(polys.size());
  std::vector<std::uint32_t> maxexp(N > 0 ? N - 1 : 0, 0);
  for (const auto& P : polys) {
    comp.push_back(compile(P));
    for (std::size_t j = 0; j < maxexp.size(); ++j)
      maxexp[j] = std::max(maxexp[j], comp.back().outer_maxexp[j]);
  }
  std::optional<Compiled> extra;
  if (assert_vanishes) {
    extra = compile(*assert_vanishes);
    for (std::size_t j = 0; j < maxexp.size(); ++j)
      maxexp[j] = std::max(maxexp[j], extra->outer_maxexp[j]);
  }

  std::uint64_t space = outer_space(*K, N);
  if (workers == 0) workers = 1;

  struct Local {
    std::uint64_t count = 0;
    std::vector<std::vector<std::uint32_t>> points;
    bool overflow = false;
  };
  std::vector<Local> local(workers);

  run_workers(workers, space, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    Local& acc = local[w];
    if (lo >= hi) return;
    Sweep sw(*K, maxexp, lo);
    std::vector<std::vector<std::uint32_t>> hc(comp.size());
    std::vector<std::uint32_t> hx;
    std::vector<bool> valid(comp.size());
    for (std::uint64_t o = lo; o < hi; ++o) {
      std::fill(valid.begin(), valid.end(), false);
      bool extra_valid = false;
      std::uint64_t inner = N == 0 ? 1 : Q;
      for (std::uint64_t v = 0; v < inner; ++v) {
        bool all_zero = true;
        for (std::size_t pi = 0; pi < comp.size(); ++pi) {
          if (!valid[pi]) {
            sw.cell_coeffs(comp[pi], hc[pi]);
            valid[pi] = true;
          }
          if (horner(*K, hc[pi], (std::uint32_t)v) != 0) {
            all_zero = false;
            break;
          }
        }
        if (!all_zero) continue;
        ++acc.count;
        if (extra) {
          if (!extra_valid) {
            sw.cell_coeffs(*extra, hx);
            extra_valid = true;
          }
          if (horner(*K, hx, (std::uint32_t)v) != 0)
            raise(errc::identity_violation,
                  "internal: Euler cross-check failed at a common zero");
        }
        if (point_cap > 0 && !acc.overflow) {
          if (acc.count > point_cap) {
            acc.overflow = true;
            acc.points.clear();
          } else {
            std::vector<std::uint32_t> pt(sw.digits);
            if (N > 0) pt.push_back((std::uint32_t)v);
            acc.points.push_back(std::move(pt));
          }
        }
      }
      sw.advance();
    }
  });

  ZeroCount out;
  bool overflow = false;
  for (auto& l : local) {
    out.count += l.count;
    overflow = overflow || l.overflow;
  }
  if (point_cap > 0 && !overflow && out.count <= point_cap) {
    out.points_complete = true;
    for (auto& l : local)
      for (auto& p : l.points) out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace ffbias
