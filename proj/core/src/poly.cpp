#include "ffbias/poly.hpp"

#include <algorithm>
#include <cctype>

#include "ffbias/rng.hpp"

namespace ffbias {

// ---- construction ----

MultiPoly MultiPoly::zero(FieldPtr ctx, unsigned nvars) {
  if (!ctx) raise(errc::invalid_argument, "null field context");
  MultiPoly p;
  p.ctx_ = std::move(ctx);
  p.nvars_ = nvars;
  return p;
}

MultiPoly MultiPoly::constant(FieldPtr ctx, unsigned nvars, const FieldElement& c) {
  MultiPoly p = zero(std::move(ctx), nvars);
  if (!c.valid() || !c.field()->same_field(*p.ctx_))
    raise(errc::mixed_fields, "constant from a different field");
  p.add_term(Exponents(nvars, 0), c.index());
  return p;
}

MultiPoly MultiPoly::monomial(FieldPtr ctx, unsigned nvars, Exponents exps,
                              const FieldElement& c) {
  MultiPoly p = zero(std::move(ctx), nvars);
  if (exps.size() != nvars)
    raise(errc::dimension_mismatch, "exponent vector length != nvars");
  if (!c.valid() || !c.field()->same_field(*p.ctx_))
    raise(errc::mixed_fields, "coefficient from a different field");
  p.add_term(exps, c.index());
  return p;
}

MultiPoly MultiPoly::variable(FieldPtr ctx, unsigned nvars, unsigned var) {
  if (var >= nvars) raise(errc::unknown_variable, "variable index out of range");
  MultiPoly p = zero(std::move(ctx), nvars);
  Exponents e(nvars, 0);
  e[var] = 1;
  p.add_term(e, 1);
  return p;
}

void MultiPoly::add_term(const Exponents& e, std::uint32_t coeff_idx) {
  if (coeff_idx == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, coeff_idx);
  } else {
    std::uint32_t s = ctx_->idx_add(it->second, coeff_idx);
    if (s == 0)
      terms_.erase(it);
    else
      it->second = s;
  }
}

void MultiPoly::require_valid() const {
  if (!ctx_) raise(errc::invalid_argument, "operation on a null polynomial");
}

void MultiPoly::require_compatible(const MultiPoly& a, const MultiPoly& b) {
  a.require_valid();
  b.require_valid();
  if (!a.ctx_->same_field(*b.ctx_))
    raise(errc::mixed_fields, "polynomials over different fields");
  if (a.nvars_ != b.nvars_)
    raise(errc::dimension_mismatch, "polynomials with different variable counts");
}

// ---- basic observers ----

int MultiPoly::degree() const {
  require_valid();
  if (terms_.empty()) return -1;
  // map order is graded descending: first key has maximal total degree
  const Exponents& e = terms_.begin()->first;
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  return (int)d;
}

bool MultiPoly::is_homogeneous() const {
  require_valid();
  if (terms_.empty()) return true;
  std::uint64_t d0 = 0;
  for (auto x : terms_.begin()->first) d0 += x;
  for (const auto& [e, c] : terms_) {
    std::uint64_t d = 0;
    for (auto x : e) d += x;
    if (d != d0) return false;
  }
  return true;
}

FieldElement MultiPoly::coefficient(const Exponents& e) const {
  require_valid();
  auto it = terms_.find(e);
  return ctx_->element(it == terms_.end() ? 0 : it->second);
}

FieldElement MultiPoly::constant_term() const {
  require_valid();
  return coefficient(Exponents(nvars_, 0));
}

// ---- arithmetic ----

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly::require_compatible(a, b);
  MultiPoly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly::require_compatible(a, b);
  MultiPoly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, b.ctx_->idx_neg(c));
  return out;
}

MultiPoly MultiPoly::operator-() const {
  require_valid();
  MultiPoly out = zero(ctx_, nvars_);
  for (const auto& [e, c] : terms_) out.add_term(e, ctx_->idx_neg(c));
  return out;
}

MultiPoly MultiPoly::scaled(const FieldElement& c) const {
  require_valid();
  if (!c.valid() || !c.field()->same_field(*ctx_))
    raise(errc::mixed_fields, "scalar from a different field");
  MultiPoly out = zero(ctx_, nvars_);
  for (const auto& [e, k] : terms_) out.add_term(e, ctx_->idx_mul(k, c.index()));
  return out;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly::require_compatible(a, b);
  MultiPoly out = MultiPoly::zero(a.ctx_, a.nvars_);
  MultiPoly::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (unsigned i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, a.ctx_->idx_mul(ca, cb));
    }
  return out;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly::require_compatible(a, b);
  return a.terms_ == b.terms_;
}

// ---- evaluation ----

FieldElement MultiPoly::evaluate(const std::vector<FieldElement>& point) const {
  require_valid();
  if (point.size() != nvars_)
    raise(errc::dimension_mismatch,
          "point has " + std::to_string(point.size()) + " coordinates, expected " +
              std::to_string(nvars_));
  FieldPtr K;
  for (const auto& x : point) {
    if (!x.valid()) raise(errc::invalid_argument, "null point coordinate");
    if (!K)
      K = x.field();
    else if (!K->same_field(*x.field()))
      raise(errc::mixed_fields, "point coordinates from different fields");
  }
  if (!K) K = ctx_;  // nvars == 0
  if (!K->same_field(*ctx_) && !K->extends(*ctx_))
    raise(errc::mixed_fields, "point field does not extend the coefficient field");
  // naive term-by-term evaluation; this is the reference path that the
  // compiled census evaluator is checked against
  std::uint32_t acc = 0;
  for (const auto& [e, c] : terms_) {
    std::uint32_t v = c;  // base coefficients keep their index in K
    for (unsigned j = 0; j < nvars_; ++j)
      if (e[j] != 0) v = K->idx_mul(v, K->idx_pow(point[j].index(), e[j]));
    acc = K->idx_add(acc, v);
  }
  return FieldElement(K, acc);
}

// ---- structure operations ----

MultiPoly MultiPoly::top_homogeneous() const {
  require_valid();
  if (terms_.empty()) raise(errc::zero_polynomial, "zero polynomial has no top part");
  int d = degree();
  MultiPoly out = zero(ctx_, nvars_);
  for (const auto& [e, c] : terms_) {
    std::uint64_t td = 0;
    for (auto x : e) td += x;
    if ((int)td == d) out.terms_.emplace(e, c);
  }
  return out;
}

HomogenizationResult MultiPoly::homogenize(const FieldElement& t) const {
  require_valid();
  int d = degree();
  if (d < 1)
    raise(errc::zero_polynomial, "homogenization needs degree >= 1");
  if (!t.valid()) raise(errc::invalid_argument, "null shift value");
  // resolve the working field: the larger of ctx_ and t's field
  FieldPtr K;
  const Field& tf = *t.field();
  if (tf.same_field(*ctx_))
    K = ctx_;
  else if (tf.extends(*ctx_))
    K = t.field();
  else if (ctx_->extends(tf))
    K = ctx_;
  else
    raise(errc::mixed_fields, "shift value field is incompatible");
  MultiPoly out = zero(K, nvars_ + 1);
  Exponents e(nvars_ + 1, 0);
  for (const auto& [ex, c] : terms_) {
    std::uint64_t td = 0;
    for (unsigned i = 0; i < nvars_; ++i) {
      e[i] = ex[i];
      td += ex[i];
    }
    e[nvars_] = (std::uint32_t)(d - (int)td);
    out.add_term(e, c);
  }
  std::fill(e.begin(), e.end(), 0);
  e[nvars_] = (std::uint32_t)d;
  out.add_term(e, K->idx_neg(t.index()));
  HomogenizationResult r;
  r.poly = std::move(out);
  r.shift = FieldElement(K, t.index());
  return r;
}

MultiPoly MultiPoly::partial(unsigned var) const {
  require_valid();
  if (var >= nvars_) raise(errc::unknown_variable, "variable index out of range");
  MultiPoly out = zero(ctx_, nvars_);
  const std::uint64_t p = ctx_->characteristic();
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    std::uint32_t mult = (std::uint32_t)(e[var] % p);
    if (mult == 0) continue;  // char-p annihilation
    Exponents ne = e;
    ne[var] -= 1;
    out.add_term(ne, ctx_->idx_mul(c, mult));
  }
  return out;
}

std::vector<MultiPoly> MultiPoly::partials() const {
  std::vector<MultiPoly> out;
  out.reserve(nvars_);
  for (unsigned j = 0; j < nvars_; ++j) out.push_back(partial(j));
  return out;
}

MultiPoly MultiPoly::embed_into(const FieldPtr& ext) const {
  require_valid();
  if (!ext) raise(errc::invalid_argument, "null field context");
  if (ext->same_field(*ctx_)) return *this;
  if (!ext->extends(*ctx_))
    raise(errc::mixed_fields, "target is not an extension of the coefficient field");
  MultiPoly out = *this;
  out.ctx_ = ext;  // base-field indices are preserved by the embedding
  return out;
}

MultiPoly MultiPoly::substitute_last(const FieldElement& v) const {
  require_valid();
  if (nvars_ == 0) raise(errc::dimension_mismatch, "no variable to substitute");
  if (!v.valid() || !v.field()->same_field(*ctx_))
    raise(errc::mixed_fields, "substitution value from a different field");
  MultiPoly out = zero(ctx_, nvars_ - 1);
  Exponents e(nvars_ - 1);
  for (const auto& [ex, c] : terms_) {
    std::copy(ex.begin(), ex.end() - 1, e.begin());
    std::uint32_t k = ctx_->idx_mul(c, ctx_->idx_pow(v.index(), ex.back()));
    out.add_term(e, k);
  }
  return out;
}

// ---- random sampling ----

MultiPoly MultiPoly::random(FieldPtr ctx, unsigned nvars, unsigned degree,
                            bool homogeneous, std::uint64_t seed) {
  if (!ctx) raise(errc::invalid_argument, "null field context");
  MultiPoly out = zero(ctx, nvars);
  SplitMix64 rng(seed);
  Exponents e(nvars, 0);
  // lexicographic walk over exponent vectors with total degree <= degree
  auto emit = [&](auto&& self, unsigned var, unsigned remaining) -> void {
    if (var == nvars) {
      if (homogeneous && remaining != 0) return;
      std::uint32_t c = (std::uint32_t)rng.next_below(ctx->size());
      out.add_term(e, c);
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      e[var] = k;
      self(self, var + 1, remaining - k);
    }
    e[var] = 0;
  };
  if (nvars == 0) {
    if (!homogeneous || degree == 0)
      out.add_term(e, (std::uint32_t)rng.next_below(ctx->size()));
    return out;
  }
  emit(emit, 0, degree);
  return out;
}

// ---- parsing ----

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  FieldPtr ctx;
  unsigned nvars;

  [[noreturn]] void fail(const std::string& what) const {
    raise(errc::syntax_error, what + " at position " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::optional<char> peek() {
    skip_ws();
    if (pos >= text.size()) return std::nullopt;
    return text[pos];
  }

  std::uint64_t parse_nat(std::uint64_t mod) {
    skip_ws();
    if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
      fail("expected a number");
    std::uint64_t v = 0;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
      v = v * 10 + (std::uint64_t)(text[pos] - '0');
      if (mod) v %= mod;
      if (!mod && v > 1000000) fail("exponent too large");
      ++pos;
    }
    return v;
  }

  // returns (coefficient index in ctx, exponent deltas)
  void parse_atom(std::uint32_t& coeff, MultiPoly::Exponents& exps) {
    skip_ws();
    if (pos >= text.size()) fail("expected an atom");
    char c = text[pos];
    if (std::isdigit((unsigned char)c)) {
      std::uint64_t v = parse_nat(ctx->characteristic());
      coeff = ctx->idx_mul(coeff, (std::uint32_t)v);
      return;
    }
    if (c == 'g') {
      ++pos;
      if (ctx->base_degree() < 2)
        raise(errc::coefficient_not_in_field,
              "'g' requires a base field with m > 1 (at position " +
                  std::to_string(pos - 1) + ")");
      std::uint64_t k = 1;
      if (eat('^')) k = parse_nat(ctx->base_size() - 1 == 0 ? 0 : ctx->base_size() - 1);
      coeff = ctx->idx_mul(coeff, ctx->idx_pow((std::uint32_t)ctx->characteristic(), k));
      return;
    }
    if (c == 'y') {
      ++pos;
      if (ctx->ext_degree() < 2)
        raise(errc::coefficient_not_in_field,
              "'y' requires an extension context (at position " +
                  std::to_string(pos - 1) + ")");
      std::uint64_t k = 1;
      if (eat('^')) k = parse_nat(ctx->size() - 1);
      coeff = ctx->idx_mul(coeff, ctx->idx_pow((std::uint32_t)ctx->base_size(), k));
      return;
    }
    if (c == 'x' || c == 'z') {
      unsigned var;
      if (c == 'z') {
        ++pos;
        if (nvars == 0) raise(errc::unknown_variable, "'z' with no variables");
        var = nvars - 1;
      } else {
        ++pos;
        std::uint64_t v = parse_nat(0);
        if (v >= nvars)
          raise(errc::unknown_variable,
                "variable x" + std::to_string(v) + " out of range (nvars = " +
                    std::to_string(nvars) + ")");
        var = (unsigned)v;
      }
      std::uint64_t e = 1;
      if (eat('^')) e = parse_nat(0);
      exps[var] += (std::uint32_t)e;
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  MultiPoly run() {
    MultiPoly out = MultiPoly::zero(ctx, nvars);
    skip_ws();
    if (pos >= text.size()) fail("empty polynomial");
    bool negative = false;
    if (eat('+')) {
    } else if (eat('-')) {
      negative = true;
    }
    for (;;) {
      std::uint32_t coeff = 1;
      MultiPoly::Exponents exps(nvars, 0);
      parse_atom(coeff, exps);
      while (eat('*')) parse_atom(coeff, exps);
      if (negative) coeff = ctx->idx_neg(coeff);
      // re-add through a temporary to merge duplicates
      MultiPoly term = MultiPoly::zero(ctx, nvars);
      if (coeff) term = MultiPoly::monomial(ctx, nvars, exps, ctx->element(coeff));
      out = out + term;
      skip_ws();
      if (pos >= text.size()) break;
      if (eat('+')) {
        negative = false;
      } else if (eat('-')) {
        negative = true;
      } else {
        fail("expected '+' or '-'");
      }
    }
    return out;
  }
};

}  // namespace

MultiPoly MultiPoly::parse(std::string_view text, FieldPtr ctx, unsigned nvars) {
  if (!ctx) raise(errc::invalid_argument, "null field context");
  Parser p{text, 0, std::move(ctx), nvars};
  return p.run();
}

// ---- printing ----

std::string MultiPoly::str() const {
  require_valid();
  if (terms_.empty()) return "0";
  const std::uint64_t p = ctx_->characteristic();
  const std::uint64_t q = ctx_->base_size();
  const unsigned m = ctx_->base_degree();
  const unsigned n = ctx_->ext_degree();
  std::string out;
  auto monomial_str = [&](const Exponents& e) {
    std::string s;
    for (unsigned j = 0; j < nvars_; ++j) {
      if (e[j] == 0) continue;
      if (!s.empty()) s += "*";
      s += "x" + std::to_string(j);
      if (e[j] > 1) s += "^" + std::to_string(e[j]);
    }
    return s;
  };
  for (const auto& [e, cidx] : terms_) {
    std::string mono = monomial_str(e);
    // split the coefficient into grammar-expressible subterms d * g^l * y^i
    std::uint64_t rest = cidx;
    for (unsigned i = 0; i < n; ++i) {
      std::uint32_t ci = (std::uint32_t)(rest % q);
      rest /= q;
      for (unsigned l = 0; l < m; ++l) {
        std::uint32_t d = (std::uint32_t)(ci % p);
        ci /= (std::uint32_t)p;
        if (d == 0) continue;
        std::string piece;
        if (d > 1) piece = std::to_string(d);
        if (l > 0) {
          if (!piece.empty()) piece += "*";
          piece += "g";
          if (l > 1) piece += "^" + std::to_string(l);
        }
        if (i > 0) {
          if (!piece.empty()) piece += "*";
          piece += "y";
          if (i > 1) piece += "^" + std::to_string(i);
        }
        if (!mono.empty()) {
          if (!piece.empty()) piece += "*";
          piece += mono;
        } else if (piece.empty()) {
          piece = "1";
        }
        if (piece.empty()) piece = "1";
        if (!out.empty()) out += " + ";
        out += piece;
      }
    }
  }
  return out;
}

}  // namespace ffbias
