#include "ffbias/field.hpp"

#include <algorithm>
#include <sstream>

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

// p^m if it fits below cap, nullopt otherwise (exact required value via out).
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp,
                                         std::uint64_t cap,
                                         unsigned __int128* required) {
  unsigned __int128 v = 1;
  for (unsigned i = 0; i < exp; ++i) {
    v *= base;
    if (v > cap) {
      if (required) {
        // finish the product saturating well past cap for the message
        for (unsigned j = i + 1; j < exp && v < ((unsigned __int128)1 << 100); ++j)
          v *= base;
        *required = v;
      }
      return std::nullopt;
    }
  }
  if (required) *required = v;
  return (std::uint64_t)v;
}

// ---- univariate polynomial helpers over an abstract coefficient field ----
// Coefficients ascending by degree; Ops supplies index arithmetic and the
// field size.  Used for modulus search (Rabin) and root scans only.

template <class Ops>
void u_trim(std::vector<std::uint32_t>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

template <class Ops>
std::vector<std::uint32_t> u_mulmod(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b,
                                    const std::vector<std::uint32_t>& mod,
                                    const Ops& K) {
  // mod is monic of degree r; a, b reduced
  std::size_t r = mod.size() - 1;
  std::vector<std::uint32_t> c(2 * r, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      c[i + j] = K.add(c[i + j], K.mul(a[i], b[j]));
    }
  }
  for (std::size_t i = 2 * r; i-- > r;) {
    std::uint32_t lead = c[i];
    if (lead == 0) continue;
    c[i] = 0;
    for (std::size_t j = 0; j < r; ++j)
      c[i - r + j] = K.sub(c[i - r + j], K.mul(lead, mod[j]));
  }
  c.resize(r);
  u_trim<Ops>(c);
  return c;
}

template <class Ops>
std::vector<std::uint32_t> u_powmod_x(std::uint64_t e,
                                      const std::vector<std::uint32_t>& mod,
                                      const Ops& K) {
  std::vector<std::uint32_t> result{1};
  std::vector<std::uint32_t> base{0, 1};  // x
  if (mod.size() == 2) {
    // degree-1 modulus: x == -mod[0]
    base = {K.sub(0, mod[0])};
    u_trim<Ops>(base);
  }
  while (e > 0) {
    if (e & 1) result = u_mulmod(result, base, mod, K);
    base = u_mulmod(base, base, mod, K);
    e >>= 1;
  }
  return result;
}

template <class Ops>
std::vector<std::uint32_t> u_mod(std::vector<std::uint32_t> a,
                                 const std::vector<std::uint32_t>& b,
                                 const Ops& K) {
  // b nonzero, not necessarily monic
  u_trim<Ops>(a);
  std::size_t db = b.size() - 1;
  std::uint32_t lead_inv = K.inv(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    std::uint32_t factor = K.mul(a.back(), lead_inv);
    std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j <= db; ++j)
      a[shift + j] = K.sub(a[shift + j], K.mul(factor, b[j]));
    u_trim<Ops>(a);
  }
  return a;
}

template <class Ops>
std::vector<std::uint32_t> u_gcd(std::vector<std::uint32_t> a,
                                 std::vector<std::uint32_t> b, const Ops& K) {
  u_trim<Ops>(a);
  u_trim<Ops>(b);
  while (!b.empty()) {
    auto r = u_mod(a, b, K);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<unsigned> prime_factors(unsigned r) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= r; ++d) {
    if (r % d == 0) {
      out.push_back(d);
      while (r % d == 0) r /= d;
    }
  }
  if (r > 1) out.push_back(r);
  return out;
}

// Rabin: monic f of degree r over F_Q is irreducible iff x^{Q^r} = x mod f
// and gcd(x^{Q^{r/s}} - x, f) = 1 for every prime s | r.
template <class Ops>
bool u_is_irreducible(const std::vector<std::uint32_t>& f, const Ops& K) {
  unsigned r = (unsigned)f.size() - 1;
  if (r == 0) return false;
  if (r == 1) return true;
  for (unsigned s : prime_factors(r)) {
    std::uint64_t e = 1;
    for (unsigned i = 0; i < r / s; ++i) e *= K.q;
    auto h = u_powmod_x(e, f, K);
    // h - x
    if (h.size() < 2) h.resize(2, 0);
    h[1] = K.sub(h[1], 1);
    u_trim<Ops>(h);
    auto g = u_gcd(f, h, K);
    if (g.size() != 1) return false;
  }
  std::uint64_t e = 1;
  for (unsigned i = 0; i < r; ++i) e *= K.q;
  auto h = u_powmod_x(e, f, K);
  if (h.size() < 2) h.resize(2, 0);
  h[1] = K.sub(h[1], 1);
  u_trim<Ops>(h);
  return h.empty();
}

struct PrimeOps {
  std::uint64_t q;  // = p
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t s = (std::uint64_t)a + b;
    return (std::uint32_t)(s >= q ? s - q : s);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : (std::uint32_t)(a + q - b);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return (std::uint32_t)((std::uint64_t)a * b % q);
  }
  std::uint32_t inv(std::uint32_t a) const {
    // Fermat
    std::uint32_t r = 1, base = a;
    std::uint64_t e = q - 2;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
};

// Find the positionally least monic irreducible of degree r over the
// coefficient field described by Ops.
template <class Ops>
std::vector<std::uint32_t> least_irreducible(unsigned r, const Ops& K) {
  unsigned __int128 total = 1;
  for (unsigned i = 0; i < r; ++i) total *= K.q;
  for (unsigned __int128 code = 0; code < total; ++code) {
    std::vector<std::uint32_t> f(r + 1, 0);
    unsigned __int128 c = code;
    for (unsigned i = 0; i < r; ++i) {
      f[i] = (std::uint32_t)(c % K.q);
      c /= K.q;
    }
    f[r] = 1;
    if (u_is_irreducible(f, K)) return f;
  }
  raise(errc::invalid_argument, "no irreducible polynomial found");  // unreachable
}

}  // namespace

bool is_prime_u64(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// ---- base-level ops ----

std::uint32_t Field::b_add(std::uint32_t a, std::uint32_t b) const {
  if (m_ == 1) {
    std::uint64_t s = (std::uint64_t)a + b;
    return (std::uint32_t)(s >= p_ ? s - p_ : s);
  }
  if (!b_add_tab_.empty()) return b_add_tab_[(std::size_t)a * q_ + b];
  std::uint32_t out = 0, mult = 1;
  for (unsigned l = 0; l < m_; ++l) {
    std::uint64_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += (std::uint32_t)s * mult;
    a /= (std::uint32_t)p_;
    b /= (std::uint32_t)p_;
    mult *= (std::uint32_t)p_;
  }
  return out;
}

std::uint32_t Field::b_neg(std::uint32_t a) const {
  if (m_ == 1) return a == 0 ? 0 : (std::uint32_t)(p_ - a);
  std::uint32_t out = 0, mult = 1;
  for (unsigned l = 0; l < m_; ++l) {
    std::uint32_t d = (std::uint32_t)(a % p_);
    out += (d == 0 ? 0 : (std::uint32_t)(p_ - d)) * mult;
    a /= (std::uint32_t)p_;
    mult *= (std::uint32_t)p_;
  }
  return out;
}

std::uint32_t Field::b_sub(std::uint32_t a, std::uint32_t b) const {
  if (m_ == 1) return a >= b ? a - b : (std::uint32_t)(a + p_ - b);
  return b_add(a, b_neg(b));
}

std::uint32_t Field::b_mul(std::uint32_t a, std::uint32_t b) const {
  if (m_ == 1) return (std::uint32_t)((std::uint64_t)a * b % p_);
  if (!b_mul_tab_.empty()) return b_mul_tab_[(std::size_t)a * q_ + b];
  // polynomial multiplication over F_p, reduced mod base_mod_
  std::uint32_t A[64], B[64], C[128];
  for (unsigned i = 0; i < m_; ++i) {
    A[i] = (std::uint32_t)(a % p_); a /= (std::uint32_t)p_;
    B[i] = (std::uint32_t)(b % p_); b /= (std::uint32_t)p_;
  }
  for (unsigned i = 0; i < 2 * m_ - 1; ++i) C[i] = 0;
  for (unsigned i = 0; i < m_; ++i) {
    if (A[i] == 0) continue;
    for (unsigned j = 0; j < m_; ++j)
      C[i + j] = (std::uint32_t)((C[i + j] + (std::uint64_t)A[i] * B[j]) % p_);
  }
  for (unsigned i = 2 * m_ - 1; i-- > m_;) {
    std::uint32_t lead = C[i];
    if (lead == 0) continue;
    C[i] = 0;
    for (unsigned j = 0; j < m_; ++j) {
      std::uint64_t sub = (std::uint64_t)lead * base_mod_[j] % p_;
      C[i - m_ + j] = (std::uint32_t)((C[i - m_ + j] + p_ - sub) % p_);
    }
  }
  std::uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < m_; ++i) {
    out += C[i] * mult;
    mult *= (std::uint32_t)p_;
  }
  return out;
}

std::uint32_t Field::b_pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1;
  while (e) {
    if (e & 1) r = b_mul(r, a);
    a = b_mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t Field::b_inv(std::uint32_t a) const {
  if (a == 0) raise(errc::division_by_zero, "inverse of zero");
  return b_pow(a, q_ - 2);
}

// ---- extension-level generic ops ----

std::uint32_t Field::gen_add(std::uint32_t a, std::uint32_t b) const {
  if (n_ == 1) return b_add(a, b);
  std::uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < n_; ++i) {
    out += b_add((std::uint32_t)(a % q_), (std::uint32_t)(b % q_)) * mult;
    a /= (std::uint32_t)q_;
    b /= (std::uint32_t)q_;
    mult *= (std::uint32_t)q_;
  }
  return out;
}

std::uint32_t Field::gen_neg(std::uint32_t a) const {
  if (n_ == 1) return b_neg(a);
  std::uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < n_; ++i) {
    out += b_neg((std::uint32_t)(a % q_)) * mult;
    a /= (std::uint32_t)q_;
    mult *= (std::uint32_t)q_;
  }
  return out;
}

std::uint32_t Field::gen_sub(std::uint32_t a, std::uint32_t b) const {
  return gen_add(a, gen_neg(b));
}

std::uint32_t Field::gen_mul(std::uint32_t a, std::uint32_t b) const {
  if (n_ == 1) return b_mul(a, b);
  std::uint32_t A[64], B[64], C[128];
  for (unsigned i = 0; i < n_; ++i) {
    A[i] = (std::uint32_t)(a % q_); a /= (std::uint32_t)q_;
    B[i] = (std::uint32_t)(b % q_); b /= (std::uint32_t)q_;
  }
  for (unsigned i = 0; i < 2 * n_ - 1; ++i) C[i] = 0;
  for (unsigned i = 0; i < n_; ++i) {
    if (A[i] == 0) continue;
    for (unsigned j = 0; j < n_; ++j)
      C[i + j] = b_add(C[i + j], b_mul(A[i], B[j]));
  }
  for (unsigned i = 2 * n_ - 1; i-- > n_;) {
    std::uint32_t lead = C[i];
    if (lead == 0) continue;
    C[i] = 0;
    for (unsigned j = 0; j < n_; ++j)
      C[i - n_ + j] = b_sub(C[i - n_ + j], b_mul(lead, ext_mod_[j]));
  }
  std::uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < n_; ++i) {
    out += C[i] * mult;
    mult *= (std::uint32_t)q_;
  }
  return out;
}

std::uint32_t Field::idx_pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1;
  while (e) {
    if (e & 1) r = idx_mul(r, a);
    a = idx_mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t Field::idx_inv(std::uint32_t a) const {
  if (a == 0) raise(errc::division_by_zero, "inverse of zero");
  if (!inv_tab_.empty()) return inv_tab_[a];
  return idx_pow(a, size_ - 2);
}

void Field::build_tables() {
  if (m_ > 1 && q_ <= kTableMax) {
    b_add_tab_.resize((std::size_t)q_ * q_);
    b_mul_tab_.resize((std::size_t)q_ * q_);
    // fill via the tableless paths
    std::vector<std::uint32_t> save_add, save_mul;
    save_add.swap(b_add_tab_);
    save_mul.swap(b_mul_tab_);
    for (std::uint32_t i = 0; i < q_; ++i)
      for (std::uint32_t j = 0; j < q_; ++j) {
        save_add[(std::size_t)i * q_ + j] = b_add(i, j);
        save_mul[(std::size_t)i * q_ + j] = b_mul(i, j);
      }
    b_add_tab_.swap(save_add);
    b_mul_tab_.swap(save_mul);
  }
  if (size_ <= kTableMax) {
    std::vector<std::uint32_t> add_t((std::size_t)size_ * size_);
    std::vector<std::uint32_t> mul_t((std::size_t)size_ * size_);
    std::vector<std::uint32_t> neg_t(size_);
    for (std::uint32_t i = 0; i < size_; ++i) {
      neg_t[i] = gen_neg(i);
      for (std::uint32_t j = 0; j < size_; ++j) {
        add_t[(std::size_t)i * size_ + j] = gen_add(i, j);
        mul_t[(std::size_t)i * size_ + j] = gen_mul(i, j);
      }
    }
    std::vector<std::uint32_t> inv_t(size_, 0);
    for (std::uint32_t i = 1; i < size_; ++i) {
      // scan the row for the unit
      for (std::uint32_t j = 1; j < size_; ++j)
        if (mul_t[(std::size_t)i * size_ + j] == 1) { inv_t[i] = j; break; }
    }
    add_tab_ = std::move(add_t);
    mul_tab_ = std::move(mul_t);
    neg_tab_ = std::move(neg_t);
    inv_tab_ = std::move(inv_t);
  }
}

// ---- construction ----

struct FieldBuilder {
  static FieldPtr make(std::uint64_t p, unsigned m, std::uint64_t max_size) {
    if (m < 1) raise(errc::invalid_argument, "base degree m must be >= 1");
    if (!is_prime_u64(p))
      raise(errc::not_prime, std::to_string(p) + " is not prime");
    std::uint64_t cap = std::min(max_size, Field::kHardCap);
    unsigned __int128 required = 0;
    auto q = checked_pow(p, m, cap, &required);
    if (!q)
      raise(errc::size_overflow, "field size " + u128_str(required) +
                                     " exceeds element budget " + std::to_string(cap));
    auto f = std::make_shared<Field>(Field::Tag{});
    f->p_ = p;
    f->m_ = m;
    f->n_ = 1;
    f->q_ = *q;
    f->size_ = *q;
    f->max_size_ = max_size;
    if (m == 1) {
      f->base_mod_ = {0, 1};  // y, degenerate
    } else {
      PrimeOps K{p};
      f->base_mod_ = least_irreducible(m, K);
    }
    f->build_tables();
    return f;
  }

  struct BaseOps {
    const Field* f;
    std::uint64_t q;
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return f->b_add(a, b); }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return f->b_sub(a, b); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return f->b_mul(a, b); }
    std::uint32_t inv(std::uint32_t a) const { return f->b_inv(a); }
  };

  static FieldPtr extend(const FieldPtr& base, unsigned n) {
    if (!base) raise(errc::invalid_argument, "null base field");
    if (n < 1) raise(errc::invalid_argument, "extension degree must be >= 1");
    if (n == 1) return base;
    if (base->n_ != 1)
      raise(errc::invalid_argument,
            "cannot extend an extension context; flatten it first");
    std::uint64_t cap = std::min(base->max_size_, Field::kHardCap);
    unsigned __int128 required = 0;
    auto size = checked_pow(base->q_, n, cap, &required);
    if (!size)
      raise(errc::size_overflow, "field size " + u128_str(required) +
                                     " exceeds element budget " + std::to_string(cap));
    auto f = std::make_shared<Field>(Field::Tag{});
    f->p_ = base->p_;
    f->m_ = base->m_;
    f->n_ = n;
    f->q_ = base->q_;
    f->size_ = *size;
    f->max_size_ = base->max_size_;
    f->base_mod_ = base->base_mod_;
    f->b_add_tab_ = base->m_ > 1 && base->q_ <= Field::kTableMax
                        ? base->add_tab_  // base with n==1: full tables are base tables
                        : std::vector<std::uint32_t>{};
    f->b_mul_tab_ = base->m_ > 1 && base->q_ <= Field::kTableMax
                        ? base->mul_tab_
                        : std::vector<std::uint32_t>{};
    BaseOps K{f.get(), f->q_};
    f->ext_mod_ = least_irreducible(n, K);
    f->build_tables();
    return f;
  }
};

FieldPtr Field::make(std::uint64_t p, unsigned m, std::uint64_t max_size) {
  return FieldBuilder::make(p, m, max_size);
}

FieldPtr Field::extend(const FieldPtr& base, unsigned n) {
  return FieldBuilder::extend(base, n);
}

// ---- identity, strings, elements ----

bool Field::same_field(const Field& o) const {
  return p_ == o.p_ && m_ == o.m_ && n_ == o.n_ && base_mod_ == o.base_mod_ &&
         ext_mod_ == o.ext_mod_;
}

bool Field::extends(const Field& base) const {
  return base.n_ == 1 && p_ == base.p_ && m_ == base.m_ &&
         base_mod_ == base.base_mod_;
}

FieldElement Field::embed(const FieldElement& e) const {
  if (!e.valid()) raise(errc::invalid_argument, "embedding a null element");
  const Field& src = *e.field();
  if (same_field(src)) return FieldElement(shared_from_this(), e.index());
  if (extends(src)) return FieldElement(shared_from_this(), e.index());
  raise(errc::mixed_fields, "element of " + src.spec_string() +
                                " cannot be embedded into " + spec_string());
}

std::string Field::spec_string() const {
  std::string s = std::to_string(p_) + "^" + std::to_string(m_);
  if (n_ > 1) s += ":" + std::to_string(n_);
  return s;
}

namespace {
// ascending-degree print of a univariate poly; coeff_str("") means skip 1*
std::string poly_string(const std::vector<std::string>& coeffs, const char* var) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string& c = coeffs[i];
    if (c.empty()) continue;  // zero coefficient marked empty
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += c;
    } else {
      if (c != "1") out += c + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out.empty() ? "0" : out;
}
}  // namespace

std::string Field::base_element_string(std::uint32_t index) const {
  if (m_ == 1) return std::to_string(index);
  std::vector<std::string> cs(m_);
  std::uint32_t a = index;
  for (unsigned l = 0; l < m_; ++l) {
    std::uint32_t d = (std::uint32_t)(a % p_);
    a /= (std::uint32_t)p_;
    cs[l] = d == 0 ? std::string() : std::to_string(d);
  }
  return poly_string(cs, "g");
}

std::string Field::element_string(std::uint64_t index) const {
  if (index >= size_) raise(errc::invalid_argument, "element index out of range");
  if (n_ == 1) return base_element_string((std::uint32_t)index);
  std::vector<std::string> cs(n_);
  std::uint64_t a = index;
  for (unsigned i = 0; i < n_; ++i) {
    std::uint32_t c = (std::uint32_t)(a % q_);
    a /= q_;
    if (c == 0) {
      cs[i] = std::string();
    } else {
      std::string s = base_element_string(c);
      bool composite = s.find('+') != std::string::npos || s.find('*') != std::string::npos;
      cs[i] = composite ? "(" + s + ")" : s;
    }
  }
  return poly_string(cs, "y");
}

std::string Field::base_modulus_string() const {
  std::vector<std::string> cs(base_mod_.size());
  for (std::size_t i = 0; i < base_mod_.size(); ++i)
    cs[i] = base_mod_[i] == 0 ? std::string() : std::to_string(base_mod_[i]);
  return poly_string(cs, "y");
}

std::string Field::ext_modulus_string() const {
  if (ext_mod_.empty()) return "";
  std::vector<std::string> cs(ext_mod_.size());
  for (std::size_t i = 0; i < ext_mod_.size(); ++i) {
    if (ext_mod_[i] == 0) continue;
    std::string s = base_element_string(ext_mod_[i]);
    bool composite = s.find('+') != std::string::npos || s.find('*') != std::string::npos;
    cs[i] = composite ? "(" + s + ")" : s;
  }
  return poly_string(cs, "y");
}

std::vector<std::vector<std::uint32_t>> Field::element_coeffs(std::uint64_t index) const {
  std::vector<std::vector<std::uint32_t>> out(n_, std::vector<std::uint32_t>(m_, 0));
  for (unsigned i = 0; i < n_; ++i) {
    std::uint32_t c = (std::uint32_t)(index % q_);
    index /= q_;
    for (unsigned l = 0; l < m_; ++l) {
      out[i][l] = (std::uint32_t)(c % p_);
      c /= (std::uint32_t)p_;
    }
  }
  return out;
}

FieldElement Field::zero() const { return FieldElement(shared_from_this(), 0); }
FieldElement Field::one() const { return FieldElement(shared_from_this(), 1); }

FieldElement Field::element(std::uint64_t index) const {
  if (index >= size_)
    raise(errc::invalid_argument, "element index " + std::to_string(index) +
                                      " out of range for field of size " +
                                      std::to_string(size_));
  return FieldElement(shared_from_this(), index);
}

FieldElement Field::from_int(std::uint64_t v) const {
  return FieldElement(shared_from_this(), (std::uint32_t)(v % p_));
}

FieldElement Field::generator() const {
  if (m_ < 2)
    raise(errc::coefficient_not_in_field,
          "generator g requires a base extension degree m > 1");
  return FieldElement(shared_from_this(), (std::uint32_t)p_);
}

// ---- FieldElement ----

FieldElement::FieldElement(FieldPtr f, std::uint64_t index)
    : field_(std::move(f)), idx_((std::uint32_t)index) {
  if (!field_) raise(errc::invalid_argument, "null field context");
  if (index >= field_->size())
    raise(errc::invalid_argument, "element index out of range");
}

void FieldElement::require_valid() const {
  if (!field_) raise(errc::invalid_argument, "operation on a null element");
}

const Field& FieldElement::common_field(const FieldElement& a, const FieldElement& b) {
  a.require_valid();
  b.require_valid();
  if (a.field_.get() != b.field_.get() && !a.field_->same_field(*b.field_))
    raise(errc::mixed_fields, "operands live in different fields (" +
                                  a.field_->spec_string() + " vs " +
                                  b.field_->spec_string() + ")");
  return *a.field_;
}

std::vector<std::vector<std::uint32_t>> FieldElement::coeffs() const {
  require_valid();
  return field_->element_coeffs(idx_);
}

std::string FieldElement::str() const {
  require_valid();
  return field_->element_string(idx_);
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  const Field& f = FieldElement::common_field(a, b);
  return FieldElement(a.field_, f.idx_add(a.idx_, b.idx_));
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  const Field& f = FieldElement::common_field(a, b);
  return FieldElement(a.field_, f.idx_sub(a.idx_, b.idx_));
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const Field& f = FieldElement::common_field(a, b);
  return FieldElement(a.field_, f.idx_mul(a.idx_, b.idx_));
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  const Field& f = FieldElement::common_field(a, b);
  return FieldElement(a.field_, f.idx_mul(a.idx_, f.idx_inv(b.idx_)));
}
FieldElement FieldElement::operator-() const {
  require_valid();
  return FieldElement(field_, field_->idx_neg(idx_));
}
bool operator==(const FieldElement& a, const FieldElement& b) {
  FieldElement::common_field(a, b);
  return a.idx_ == b.idx_;
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  require_valid();
  return FieldElement(field_, field_->idx_pow(idx_, e));
}
FieldElement FieldElement::inv() const {
  require_valid();
  return FieldElement(field_, field_->idx_inv(idx_));
}
FieldElement FieldElement::frobenius() const {
  require_valid();
  return FieldElement(field_, field_->idx_frobenius(idx_));
}

// ---- enumeration ----

ElementStream::ElementStream(FieldPtr f, std::uint64_t offset)
    : field_(std::move(f)), pos_(offset) {
  if (!field_) raise(errc::invalid_argument, "null field context");
}

std::optional<FieldElement> ElementStream::next() {
  if (pos_ >= field_->size()) return std::nullopt;
  return FieldElement(field_, pos_++);
}

// ---- flattening isomorphism ----

FieldElement FlattenMap::operator()(const FieldElement& e) const {
  if (!e.valid() || !e.field()->same_field(*src))
    raise(errc::mixed_fields, "element does not belong to the source field");
  return FieldElement(dst, image[e.index()]);
}

FlattenMap flatten_field(const FieldPtr& ext) {
  if (!ext) raise(errc::invalid_argument, "null field context");
  if (ext->ext_degree() == 1) {
    FlattenMap id;
    id.src = ext;
    id.dst = ext;
    id.image.resize(ext->size());
    for (std::uint64_t i = 0; i < ext->size(); ++i)
      id.image[i] = (std::uint32_t)i;
    return id;
  }
  const std::uint64_t p = ext->characteristic();
  const unsigned m = ext->base_degree(), n = ext->ext_degree();
  FieldPtr dst = Field::make(p, m * n, ext->max_size());

  // image of the F_q generator: least root of base_modulus in dst
  std::uint32_t ghat = 0;
  if (m > 1) {
    const auto& bm = ext->base_modulus();
    bool found = false;
    for (std::uint32_t cand = 0; cand < dst->size() && !found; ++cand) {
      std::uint32_t acc = 0, po = 1;
      for (std::size_t i = 0; i < bm.size(); ++i) {
        acc = dst->idx_add(acc, dst->idx_mul(bm[i] % (std::uint32_t)p, po));
        po = dst->idx_mul(po, cand);
      }
      if (acc == 0) { ghat = cand; found = true; }
    }
    if (!found) raise(errc::invalid_argument, "flatten: base modulus has no root");
  }

  // map an F_q index into dst through ghat
  auto map_base = [&](std::uint32_t c) -> std::uint32_t {
    if (m == 1) return c % (std::uint32_t)p;
    std::uint32_t acc = 0, po = 1;
    for (unsigned l = 0; l < m; ++l) {
      std::uint32_t d = (std::uint32_t)(c % p);
      c /= (std::uint32_t)p;
      acc = dst->idx_add(acc, dst->idx_mul(d, po));
      po = dst->idx_mul(po, ghat);
    }
    return acc;
  };

  // image of y: least root of the mapped extension modulus in dst
  const auto& em = ext->ext_modulus();
  std::vector<std::uint32_t> mapped(em.size());
  for (std::size_t i = 0; i < em.size(); ++i) mapped[i] = map_base(em[i]);
  std::uint32_t yhat = 0;
  bool found = false;
  for (std::uint32_t cand = 0; cand < dst->size() && !found; ++cand) {
    std::uint32_t acc = 0, po = 1;
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      acc = dst->idx_add(acc, dst->idx_mul(mapped[i], po));
      po = dst->idx_mul(po, cand);
    }
    if (acc == 0) { yhat = cand; found = true; }
  }
  if (!found) raise(errc::invalid_argument, "flatten: extension modulus has no root");

  FlattenMap fm;
  fm.src = ext;
  fm.dst = dst;
  fm.image.resize(ext->size());
  const std::uint64_t q = ext->base_size();
  for (std::uint64_t e = 0; e < ext->size(); ++e) {
    std::uint64_t a = e;
    std::uint32_t acc = 0, po = 1;
    for (unsigned i = 0; i < n; ++i) {
      std::uint32_t c = (std::uint32_t)(a % q);
      a /= q;
      acc = dst->idx_add(acc, dst->idx_mul(map_base(c), po));
      po = dst->idx_mul(po, yhat);
    }
    fm.image[e] = acc;
  }
  return fm;
}

}  // namespace ffbias
