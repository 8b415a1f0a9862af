#include "ffbias/rank.hpp"

#include <algorithm>
#include <map>

#include "ffbias/rng.hpp"

namespace ffbias {

namespace {

using Exponents = MultiPoly::Exponents;

Exponents unit_exp(unsigned nvars, unsigned i, std::uint32_t e = 1) {
  Exponents out(nvars, 0);
  out[i] = e;
  return out;
}

}  // namespace

void Factorization::validate() const {
  if (!target.valid()) raise(errc::invalid_argument, "factorization without target");
  int d = target.degree();
  MultiPoly sum = MultiPoly::zero(target.ctx(), target.nvars());
  for (const auto& [Q, P] : pairs) {
    if (Q.is_zero() || P.is_zero())
      raise(errc::invalid_argument, "factorization with a zero factor");
    if (Q.degree() >= d || P.degree() >= d)
      raise(errc::invalid_argument, "factor degree not below the target degree");
    sum = sum + Q * P;
  }
  if (!(sum == target))
    raise(errc::invalid_argument, "factorization does not expand to its target");
}

unsigned matrix_rank(std::vector<std::vector<std::uint32_t>> M, const FieldPtr& K) {
  if (M.empty()) return 0;
  const std::size_t rows = M.size(), cols = M[0].size();
  unsigned rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && M[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(M[pivot], M[row]);
    std::uint32_t inv = K->idx_inv(M[row][col]);
    for (std::size_t j = col; j < cols; ++j) M[row][j] = K->idx_mul(M[row][j], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || M[i][col] == 0) continue;
      std::uint32_t f = M[i][col];
      for (std::size_t j = col; j < cols; ++j)
        M[i][j] = K->idx_sub(M[i][j], K->idx_mul(f, M[row][j]));
    }
    ++row;
    ++rank;
  }
  return rank;
}

namespace {

// Any solution of A x = b over K, or nullopt when inconsistent.
std::optional<std::vector<std::uint32_t>> solve_linear(
    std::vector<std::vector<std::uint32_t>> A, std::vector<std::uint32_t> b,
    const FieldPtr& K) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows ? A[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && A[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(A[pivot], A[row]);
    std::swap(b[pivot], b[row]);
    std::uint32_t inv = K->idx_inv(A[row][col]);
    for (std::size_t j = col; j < cols; ++j) A[row][j] = K->idx_mul(A[row][j], inv);
    b[row] = K->idx_mul(b[row], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || A[i][col] == 0) continue;
      std::uint32_t f = A[i][col];
      for (std::size_t j = col; j < cols; ++j)
        A[i][j] = K->idx_sub(A[i][j], K->idx_mul(f, A[row][j]));
      b[i] = K->idx_sub(b[i], K->idx_mul(f, b[row]));
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<std::uint32_t> x(cols, 0);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
  return x;
}

void require_quadratic(const MultiPoly& Q) {
  if (!Q.valid()) raise(errc::invalid_argument, "null polynomial");
  if (Q.is_zero() || !Q.is_homogeneous() || Q.degree() != 2)
    raise(errc::not_quadratic, "need a nonzero homogeneous quadratic");
  if (Q.ctx()->characteristic() == 2)
    raise(errc::characteristic_two,
          "quadratic rank needs odd characteristic (the symmetric matrix halves "
          "cross terms)");
}

std::vector<std::vector<std::uint32_t>> symmetric_matrix(const MultiPoly& Q) {
  const unsigned N = Q.nvars();
  const FieldPtr& K = Q.ctx();
  std::uint32_t inv2 = K->idx_inv(2 % (std::uint32_t)K->characteristic());
  std::vector<std::vector<std::uint32_t>> B(N, std::vector<std::uint32_t>(N, 0));
  for (unsigned i = 0; i < N; ++i) {
    B[i][i] = Q.coefficient(unit_exp(N, i, 2)).index();
    for (unsigned j = i + 1; j < N; ++j) {
      Exponents e(N, 0);
      e[i] = 1;
      e[j] = 1;
      std::uint32_t half = K->idx_mul(Q.coefficient(e).index(), inv2);
      B[i][j] = half;
      B[j][i] = half;
    }
  }
  return B;
}

}  // namespace

unsigned quadratic_rank(const MultiPoly& Q) {
  require_quadratic(Q);
  unsigned r = matrix_rank(symmetric_matrix(Q), Q.ctx());
  return (r + 1) / 2;
}

// ---- explicit quadratic witness ----

namespace {

// square root in K by scan; K is small at desk scale
std::optional<std::uint32_t> sqrt_scan(std::uint32_t a, const FieldPtr& K) {
  if (K->size() > (1u << 22)) return std::nullopt;
  for (std::uint64_t s = 0; s < K->size(); ++s)
    if (K->idx_mul((std::uint32_t)s, (std::uint32_t)s) == a)
      return (std::uint32_t)s;
  return std::nullopt;
}

}  // namespace

std::optional<Factorization> quadratic_witness(const MultiPoly& Q) {
  require_quadratic(Q);
  const FieldPtr& K = Q.ctx();
  const unsigned N = Q.nvars();
  std::uint32_t inv2 = K->idx_inv(2 % (std::uint32_t)K->characteristic());

  MultiPoly R = Q;
  std::vector<std::pair<MultiPoly, MultiPoly>> products;
  std::vector<std::pair<FieldElement, MultiPoly>> squares;  // (lambda, linear L)

  while (!R.is_zero()) {
    // prefer a diagonal entry: R = a x_i^2 + x_i A + rest -> a (x_i + A/2a)^2 + ...
    int di = -1;
    for (unsigned i = 0; i < N && di < 0; ++i)
      if (!R.coefficient(unit_exp(N, i, 2)).is_zero()) di = (int)i;
    if (di >= 0) {
      unsigned i = (unsigned)di;
      FieldElement a = R.coefficient(unit_exp(N, i, 2));
      MultiPoly A = MultiPoly::zero(K, N);
      for (unsigned j = 0; j < N; ++j) {
        if (j == i) continue;
        Exponents e(N, 0);
        e[i] = 1;
        e[j] = 1;
        FieldElement c = R.coefficient(e);
        if (!c.is_zero()) A = A + MultiPoly::variable(K, N, j).scaled(c);
      }
      FieldElement half_over_a = FieldElement(K, inv2) / a;
      MultiPoly L = MultiPoly::variable(K, N, i) + A.scaled(half_over_a);
      R = R - (L * L).scaled(a);
      squares.emplace_back(a, L);
      continue;
    }
    // all diagonal zero: take any cross term c x_i x_j and split off the
    // rank-one product c (x_i + V/c)(x_j + U/c)
    const auto& [e0, c0] = *R.terms().begin();
    unsigned i = 0, j = 0;
    bool first = true;
    for (unsigned k = 0; k < N; ++k)
      if (e0[k] == 1) {
        (first ? i : j) = k;
        first = false;
      }
    FieldElement c = FieldElement(K, c0);
    MultiPoly U = MultiPoly::zero(K, N), V = MultiPoly::zero(K, N);
    for (unsigned k = 0; k < N; ++k) {
      if (k == i || k == j) continue;
      Exponents ei(N, 0), ej(N, 0);
      ei[i] = 1;
      ei[k] = 1;
      ej[j] = 1;
      ej[k] = 1;
      FieldElement ci = R.coefficient(ei);
      FieldElement cj = R.coefficient(ej);
      if (!ci.is_zero()) U = U + MultiPoly::variable(K, N, k).scaled(ci);
      if (!cj.is_zero()) V = V + MultiPoly::variable(K, N, k).scaled(cj);
    }
    FieldElement cinv = c.inv();
    MultiPoly Qf = (MultiPoly::variable(K, N, i) + V.scaled(cinv)).scaled(c);
    MultiPoly Pf = MultiPoly::variable(K, N, j) + U.scaled(cinv);
    R = R - Qf * Pf;
    products.emplace_back(Qf, Pf);
  }

  // pair the squares: l1 L1^2 + l2 L2^2 = l1 (L1 + s L2)(L1 - s L2) with
  // s^2 = -l2/l1; every base-field element is a square in k_2
  FieldPtr W = K;
  auto lift = [&](const MultiPoly& P) { return P.embed_into(W); };
  Factorization fact;
  for (std::size_t k = 0; k + 1 < squares.size(); k += 2) {
    FieldElement l1 = squares[k].first, l2 = squares[k + 1].first;
    std::uint32_t target = K->idx_neg((l2 / l1).index());
    std::optional<std::uint32_t> s = sqrt_scan(target, W);
    if (!s && W->is_base() && K->is_base()) {
      unsigned __int128 sq = (unsigned __int128)K->size() * K->size();
      if (sq <= Field::kHardCap && sq <= (1u << 22)) {
        W = Field::extend(K, 2);
        s = sqrt_scan(target, W);
      }
    }
    if (!s) return std::nullopt;
  }

  // rebuild with the final field so all pairs live together
  fact.pairs.clear();
  for (auto& [Qf, Pf] : products) fact.pairs.emplace_back(lift(Qf), lift(Pf));
  for (std::size_t k = 0; k + 1 < squares.size(); k += 2) {
    FieldElement l1 = W->embed(squares[k].first), l2 = W->embed(squares[k + 1].first);
    MultiPoly L1 = lift(squares[k].second), L2 = lift(squares[k + 1].second);
    std::uint32_t target = W->idx_neg((l2 / l1).index());
    std::optional<std::uint32_t> s = sqrt_scan(target, W);
    if (!s) return std::nullopt;
    FieldElement se(W, *s);
    fact.pairs.emplace_back((L1 + L2.scaled(se)).scaled(l1), L1 - L2.scaled(se));
  }
  if (squares.size() % 2 == 1) {
    FieldElement l = W->embed(squares.back().first);
    MultiPoly L = lift(squares.back().second);
    fact.pairs.emplace_back(L.scaled(l), L);
  }
  fact.target = Q.embed_into(W);
  fact.validate();
  return fact;
}

// ---- upper-bound search ----

namespace {

// two-variable homogeneous G: find a linear factor x_i - s x_j over K by a
// root scan of the dehomogenization, then divide it out
std::optional<std::pair<MultiPoly, MultiPoly>> two_var_linear_factor(
    const MultiPoly& G, unsigned vi, unsigned vj, const FieldPtr& K) {
  const unsigned N = G.nvars();
  const int d = G.degree();
  MultiPoly Ge = G.embed_into(K);
  // univariate g(u) = G(u, 1) in x_vi
  std::vector<std::uint32_t> g((std::size_t)d + 1, 0);
  for (const auto& [e, c] : Ge.terms()) g[e[vi]] = c;
  for (std::uint64_t s = 0; s < K->size(); ++s) {
    std::uint32_t acc = 0;
    for (std::size_t k = g.size(); k-- > 0;)
      acc = K->idx_add(K->idx_mul(acc, (std::uint32_t)s), g[k]);
    if (acc != 0) continue;
    // synthetic division g(u) = (u - s) h(u)
    std::vector<std::uint32_t> h((std::size_t)d, 0);
    std::uint32_t carry = 0;
    for (std::size_t k = g.size(); k-- > 1;) {
      carry = k == g.size() - 1 ? g[k] : K->idx_add(g[k], K->idx_mul(carry, (std::uint32_t)s));
      h[k - 1] = carry;
    }
    MultiPoly Qf = MultiPoly::variable(K, N, vi) -
                   MultiPoly::variable(K, N, vj).scaled(FieldElement(K, (std::uint32_t)s));
    MultiPoly Pf = MultiPoly::zero(K, N);
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (h[k] == 0) continue;
      Exponents e(N, 0);
      e[vi] = (std::uint32_t)k;
      e[vj] = (std::uint32_t)(d - 1 - k);
      Pf = Pf + MultiPoly::monomial(K, N, e, FieldElement(K, h[k]));
    }
    if ((Qf * Pf) == Ge) return std::make_pair(Qf, Pf);
  }
  return std::nullopt;
}

std::vector<unsigned> support_vars(const MultiPoly& P) {
  std::vector<unsigned> vars;
  for (unsigned j = 0; j < P.nvars(); ++j) {
    for (const auto& [e, c] : P.terms())
      if (e[j] != 0) {
        vars.push_back(j);
        break;
      }
  }
  return vars;
}

// single-term split c x^E = (x_i) * (c x^{E - e_i})
std::pair<MultiPoly, MultiPoly> split_monomial(const MultiPoly& term) {
  const unsigned N = term.nvars();
  const auto& [e, c] = *term.terms().begin();
  unsigned i = 0;
  while (e[i] == 0) ++i;
  Exponents rest = e;
  rest[i] -= 1;
  return {MultiPoly::variable(term.ctx(), N, i),
          MultiPoly::monomial(term.ctx(), N, rest, FieldElement(term.ctx(), c))};
}

// rank-1 attempt on an arbitrary sub-polynomial: monomial content, or a
// two-variable linear factor over one of the candidate fields
std::optional<std::pair<MultiPoly, MultiPoly>> rank_one_split(
    const MultiPoly& G, const std::vector<FieldPtr>& fields) {
  if (G.is_zero()) return std::nullopt;
  const unsigned N = G.nvars();
  const int d = G.degree();
  if (G.term_count() == 1) return split_monomial(G);
  // monomial content
  Exponents content = G.terms().begin()->first;
  for (const auto& [e, c] : G.terms())
    for (unsigned j = 0; j < N; ++j) content[j] = std::min(content[j], e[j]);
  std::uint64_t ctotal = 0;
  for (auto x : content) ctotal += x;
  if (ctotal >= 1 && (int)ctotal < d) {
    MultiPoly Qf = MultiPoly::monomial(G.ctx(), N, content, G.ctx()->one());
    MultiPoly Pf = MultiPoly::zero(G.ctx(), N);
    for (const auto& [e, c] : G.terms()) {
      Exponents rest(N);
      for (unsigned j = 0; j < N; ++j) rest[j] = e[j] - content[j];
      Pf = Pf + MultiPoly::monomial(G.ctx(), N, rest, FieldElement(G.ctx(), c));
    }
    if ((Qf * Pf) == G) return std::make_pair(Qf, Pf);
  }
  auto vars = support_vars(G);
  if (vars.size() == 2) {
    for (const auto& K : fields)
      if (auto f = two_var_linear_factor(G, vars[0], vars[1], K)) return f;
  }
  return std::nullopt;
}

void enumerate_monomials(unsigned nvars, unsigned deg, std::vector<Exponents>& out) {
  Exponents e(nvars, 0);
  auto rec = [&](auto&& self, unsigned var, unsigned remaining) -> void {
    if (var + 1 == nvars) {
      e[var] = remaining;
      out.push_back(e);
      e[var] = 0;
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      e[var] = k;
      self(self, var + 1, remaining - k);
    }
    e[var] = 0;
  };
  if (nvars == 0) return;
  rec(rec, 0, deg);
}

// Fixed homogeneous Q_i of degree k over K; solve the coefficient-matching
// system for homogeneous P_i of degree d-k.
std::optional<Factorization> solve_with_forms(const MultiPoly& target,
                                              const std::vector<MultiPoly>& qpolys,
                                              const FieldPtr& K) {
  const unsigned N = target.nvars();
  const int d = target.degree();
  const int k = qpolys.front().degree();
  if (k < 1 || k >= d) return std::nullopt;
  std::vector<Exponents> rows_mon, cols_mon;
  enumerate_monomials(N, (unsigned)d, rows_mon);
  enumerate_monomials(N, (unsigned)(d - k), cols_mon);
  std::map<Exponents, std::size_t> row_of;
  for (std::size_t r = 0; r < rows_mon.size(); ++r) row_of[rows_mon[r]] = r;

  const std::size_t r_count = qpolys.size();
  const std::size_t cols = r_count * cols_mon.size();
  std::vector<std::vector<std::uint32_t>> A(rows_mon.size(),
                                            std::vector<std::uint32_t>(cols, 0));
  Exponents nu(N);
  for (std::size_t i = 0; i < r_count; ++i)
    for (std::size_t mu = 0; mu < cols_mon.size(); ++mu) {
      std::size_t col = i * cols_mon.size() + mu;
      for (const auto& [qe, qc] : qpolys[i].terms()) {
        for (unsigned j = 0; j < N; ++j) nu[j] = cols_mon[mu][j] + qe[j];
        std::size_t row = row_of.at(nu);
        A[row][col] = K->idx_add(A[row][col], qc);
      }
    }
  std::vector<std::uint32_t> b(rows_mon.size(), 0);
  MultiPoly te = target.embed_into(K);
  for (const auto& [e, c] : te.terms()) b[row_of.at(e)] = c;

  auto x = solve_linear(A, b, K);
  if (!x) return std::nullopt;

  Factorization fact;
  fact.target = te;
  for (std::size_t i = 0; i < r_count; ++i) {
    MultiPoly Pf = MultiPoly::zero(K, N);
    for (std::size_t mu = 0; mu < cols_mon.size(); ++mu) {
      std::uint32_t c = (*x)[i * cols_mon.size() + mu];
      if (c != 0)
        Pf = Pf + MultiPoly::monomial(K, N, cols_mon[mu], FieldElement(K, c));
    }
    if (qpolys[i].is_zero() || Pf.is_zero()) continue;
    fact.pairs.emplace_back(qpolys[i], std::move(Pf));
  }
  if (fact.pairs.empty()) return std::nullopt;
  fact.validate();
  return fact;
}

std::optional<Factorization> solve_with_linear_forms(
    const MultiPoly& target, const std::vector<std::vector<std::uint32_t>>& qforms,
    const FieldPtr& K) {
  const unsigned N = target.nvars();
  std::vector<MultiPoly> qpolys;
  for (const auto& form : qforms) {
    MultiPoly Qf = MultiPoly::zero(K, N);
    for (unsigned j = 0; j < N; ++j)
      if (form[j] != 0)
        Qf = Qf + MultiPoly::variable(K, N, j).scaled(FieldElement(K, form[j]));
    if (Qf.is_zero()) return std::nullopt;
    qpolys.push_back(std::move(Qf));
  }
  return solve_with_forms(target, qpolys, K);
}

// Split terms into groups, each group rank-one factorable over a single
// candidate field; greedy pairing of terms first, singles as their own
// groups.
std::optional<Factorization> grouping_witness(const MultiPoly& G, unsigned r,
                                              const FieldPtr& K) {
  std::vector<FieldPtr> fields{K};
  std::vector<MultiPoly> units;
  for (const auto& [e, c] : G.terms())
    units.push_back(MultiPoly::monomial(G.ctx(), G.nvars(), e,
                                        FieldElement(G.ctx(), c)));
  std::vector<bool> used(units.size(), false);
  std::vector<std::pair<MultiPoly, MultiPoly>> pairs;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::optional<std::pair<MultiPoly, MultiPoly>> split;
    for (std::size_t j = i + 1; j < units.size() && !split; ++j) {
      if (used[j]) continue;
      split = rank_one_split(units[i] + units[j], fields);
      if (split) used[j] = true;
    }
    if (!split) split = rank_one_split(units[i], fields);
    if (!split) return std::nullopt;
    pairs.push_back(std::move(*split));
    if (pairs.size() > r) return std::nullopt;
  }
  Factorization fact;
  fact.target = G.embed_into(K);
  for (auto& [Qf, Pf] : pairs)
    fact.pairs.emplace_back(Qf.embed_into(K), Pf.embed_into(K));
  fact.validate();
  return fact;
}

// G = sum_i x_i H_i, grouping terms by least variable; always succeeds for
// homogeneous G of degree >= 2 and bounds the search depth.
Factorization leastvar_grouping(const MultiPoly& G) {
  const unsigned N = G.nvars();
  std::map<unsigned, MultiPoly> groups;
  for (const auto& [e, c] : G.terms()) {
    unsigned i = 0;
    while (e[i] == 0) ++i;
    Exponents rest = e;
    rest[i] -= 1;
    MultiPoly piece =
        MultiPoly::monomial(G.ctx(), N, rest, FieldElement(G.ctx(), c));
    auto it = groups.find(i);
    if (it == groups.end())
      groups.emplace(i, std::move(piece));
    else
      it->second = it->second + piece;
  }
  Factorization fact;
  fact.target = G;
  for (auto& [i, H] : groups)
    fact.pairs.emplace_back(MultiPoly::variable(G.ctx(), N, i), std::move(H));
  fact.validate();
  return fact;
}

}  // namespace

namespace {

// All projective representatives of nonzero linear forms over K (leading
// nonzero coefficient normalized to 1), or empty when there are too many
// to enumerate.
std::vector<std::vector<std::uint32_t>> projective_forms(const FieldPtr& K,
                                                         unsigned nvars,
                                                         std::uint64_t cap) {
  unsigned __int128 total = 1;
  for (unsigned j = 0; j < nvars; ++j) total *= K->size();
  std::uint64_t count = (std::uint64_t)((total - 1) / (K->size() - 1));
  if (count > cap) return {};
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> form(nvars, 0);
  for (std::uint64_t code = 1; code < (std::uint64_t)total; ++code) {
    std::uint64_t c = code;
    for (unsigned j = 0; j < nvars; ++j) {
      form[j] = (std::uint32_t)(c % K->size());
      c /= K->size();
    }
    unsigned lead = 0;
    while (form[lead] == 0) ++lead;
    if (form[lead] != 1) continue;  // one representative per line
    out.push_back(form);
  }
  return out;
}

}  // namespace

std::optional<std::pair<unsigned, Factorization>> rank_upper(
    const MultiPoly& Ft, std::uint64_t search_budget, std::uint64_t seed,
    unsigned extension_degree) {
  if (!Ft.valid()) raise(errc::invalid_argument, "null polynomial");
  if (Ft.is_zero() || !Ft.is_homogeneous() || Ft.degree() < 2)
    raise(errc::not_homogeneous, "rank search needs a homogeneous polynomial of degree >= 2");
  if (search_budget == 0) return std::nullopt;

  const unsigned N = Ft.nvars();
  const int d = Ft.degree();
  std::vector<FieldPtr> fields;
  if (Ft.ctx()->is_base()) {
    for (unsigned e = 1; e <= std::max(1u, extension_degree); ++e) {
      unsigned __int128 sz = 1;
      for (unsigned i = 0; i < e; ++i) sz *= Ft.ctx()->base_size();
      if (sz > std::min(Ft.ctx()->max_size(), Field::kHardCap)) break;
      fields.push_back(Field::extend(Ft.ctx(), e));
    }
  } else {
    fields.push_back(Ft.ctx());
  }

  // guaranteed fallback: group terms by least variable
  Factorization fallback = leastvar_grouping(Ft);
  unsigned r_cap = fallback.length();

  // projective linear forms over the base context for the exhaustive
  // small-r stages
  std::vector<std::vector<std::uint32_t>> pforms =
      projective_forms(Ft.ctx(), N, 4096);

  for (unsigned r = 1; r <= r_cap; ++r) {
    // structured candidates
    if (r == 1) {
      if (auto s = rank_one_split(Ft, fields)) {
        Factorization fact;
        fact.target = Ft.embed_into(s->first.ctx());
        fact.pairs.emplace_back(s->first, s->second);
        fact.validate();
        return std::make_pair(1u, std::move(fact));
      }
      // exhaustive linear-divisor scan
      for (const auto& form : pforms)
        if (auto fact = solve_with_linear_forms(Ft, {form}, Ft.ctx()))
          return std::make_pair(fact->length(), std::move(*fact));
    }
    if (r == 2 && pforms.size() >= 2 &&
        pforms.size() * pforms.size() <= 2 * 40000) {
      // exhaustive over unordered pairs of base-field forms
      for (std::size_t i = 0; i < pforms.size(); ++i)
        for (std::size_t j = i; j < pforms.size(); ++j)
          if (auto fact =
                  solve_with_linear_forms(Ft, {pforms[i], pforms[j]}, Ft.ctx()))
            return std::make_pair(fact->length(), std::move(*fact));
    }
    for (const auto& K : fields)
      if (auto g = grouping_witness(Ft, r, K))
        return std::make_pair(g->length(), std::move(*g));
    if (r == r_cap)
      return std::make_pair(r_cap, std::move(fallback));

    // seeded random linear forms, P_i by linear algebra
    unsigned shift = r_cap - r >= 60 ? 60 : r_cap - r;
    std::uint64_t attempts = std::max<std::uint64_t>(1, search_budget >> shift);
    for (std::uint64_t a = 0; a < attempts; ++a) {
      const FieldPtr& K = fields[a % fields.size()];
      SplitMix64 rng(derive_seed(seed, (std::uint64_t)r * 1000003u + a));
      std::vector<std::vector<std::uint32_t>> qforms(r,
                                                     std::vector<std::uint32_t>(N, 0));
      for (auto& form : qforms) {
        bool nonzero = false;
        while (!nonzero) {
          for (unsigned j = 0; j < N; ++j) {
            form[j] = (std::uint32_t)rng.next_below(K->size());
            nonzero = nonzero || form[j] != 0;
          }
        }
      }
      if (auto fact = solve_with_linear_forms(Ft, qforms, K))
        return std::make_pair(fact->length(), std::move(*fact));
    }
    // for degree >= 4, retry with random quadratic Q_i
    if (d >= 4) {
      for (std::uint64_t a = 0; a < attempts; ++a) {
        const FieldPtr& K = fields[a % fields.size()];
        std::vector<MultiPoly> qpolys;
        bool ok = true;
        for (unsigned i = 0; i < r && ok; ++i) {
          MultiPoly Qf = MultiPoly::random(
              K, N, 2, true,
              derive_seed(seed, 0x71ull + r * 1000003u + a * 131u + i));
          if (Qf.is_zero() || Qf.degree() != 2) ok = false;
          qpolys.push_back(std::move(Qf));
        }
        if (!ok) continue;
        if (auto fact = solve_with_forms(Ft, qpolys, K))
          return std::make_pair(fact->length(), std::move(*fact));
      }
    }
  }
  return std::nullopt;
}

unsigned rank_lower_via_sing(const MultiPoly& Ft, const SingularReport& sing) {
  if (!Ft.valid()) raise(errc::invalid_argument, "null polynomial");
  if (sing.poly != Ft.str() || sing.ambient_vars != Ft.nvars())
    raise(errc::mismatched_variety,
          "singular report describes a different hypersurface");
  if (!sing.confident) return 1;
  int codim = std::max(0, sing.codim);
  return std::max(1, (codim + 1) / 2);
}

RankInterval rank_of(const MultiPoly& F, const RankOptions& opts) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  if (F.degree() < 2)
    raise(errc::degree_too_low, "rank is defined for degree >= 2");
  MultiPoly top = F.top_homogeneous();

  RankInterval out;
  if (top.degree() == 2 && F.ctx()->characteristic() != 2) {
    unsigned r = quadratic_rank(top);
    out.lo = r;
    out.hi = r;
    out.lo_method = "quadratic-exact";
    out.hi_method = "quadratic-exact";
    out.witness = quadratic_witness(top);
    return out;
  }

  SingularReport sing = c_regularity(top, opts.sing_nmax, opts.sing_budget,
                                     opts.workers);
  out.lo = rank_lower_via_sing(top, sing);
  out.lo_method = sing.confident ? "sing-codim" : "degenerate";

  auto upper = rank_upper(top, opts.search_budget, opts.seed, opts.extension_degree);
  if (upper) {
    out.hi = upper->first;
    out.witness = std::move(upper->second);
    out.hi_method = "witness-search";
    if (out.hi && *out.hi < out.lo) {
      // a verified witness beats a heuristic dimension estimate
      out.lo = *out.hi;
      out.lo_method = "degenerate";
    }
  } else {
    out.hi_method = "degenerate";
  }
  return out;
}

SandwichReport sandwich_check(const MultiPoly& F, const FieldElement& t) {
  if (!F.valid()) raise(errc::invalid_argument, "null polynomial");
  if (F.degree() != 2)
    raise(errc::not_quadratic, "sandwich check is exact for degree 2 only");
  SandwichReport rep;
  rep.rank_f = quadratic_rank(F.top_homogeneous());
  HomogenizationResult hat = F.homogenize(t);
  rep.rank_hat = quadratic_rank(hat.poly);
  if (rep.rank_hat < rep.rank_f || rep.rank_hat > rep.rank_f + 1)
    raise(errc::sandwich_violation,
          "rank(F) = " + std::to_string(rep.rank_f) +
              " but rank(F^_t) = " + std::to_string(rep.rank_hat));
  return rep;
}

}  // namespace ffbias
