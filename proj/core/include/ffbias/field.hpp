#ifndef FFBIAS_FIELD_HPP
#define FFBIAS_FIELD_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffbias/error.hpp"

namespace ffbias {

class Field;
class FieldElement;
using FieldPtr = std::shared_ptr<const Field>;

// Exact arithmetic context for F_p, F_q = F_{p^m} and one extension level
// k_n = F_{q^n}.  Immutable after construction and safe to share across
// threads.  Elements are addressed by their positional index: an element
// sum c_i y^i (c_i in F_q) has index sum idx(c_i) q^i, and an F_q
// coefficient sum d_l g^l has index sum d_l p^l.  Index order is the
// enumeration order, and index 0/1 are zero/one of the field.
//
// Moduli are the lexicographically least monic irreducibles in that same
// positional order, found by ordered search with Rabin's irreducibility
// test, so every context is reproducible without tables.
class Field : public std::enable_shared_from_this<Field> {
 public:
  static constexpr std::uint64_t kDefaultMaxSize = 1ull << 20;
  static constexpr std::uint64_t kHardCap = 1ull << 30;
  // Full index op tables are built for fields up to this many elements.
  static constexpr std::uint64_t kTableMax = 1024;

  static FieldPtr make(std::uint64_t p, unsigned m,
                       std::uint64_t max_size = kDefaultMaxSize);
  static FieldPtr extend(const FieldPtr& base, unsigned n);

  std::uint64_t characteristic() const { return p_; }
  unsigned base_degree() const { return m_; }
  unsigned ext_degree() const { return n_; }
  std::uint64_t base_size() const { return q_; }  // q = p^m
  std::uint64_t size() const { return size_; }    // q^n
  std::uint64_t max_size() const { return max_size_; }
  bool is_base() const { return n_ == 1; }

  // Coefficients ascending by degree, monic.  base_modulus over F_p
  // (residues), ext_modulus over F_q (element indices; empty when n = 1).
  const std::vector<std::uint32_t>& base_modulus() const { return base_mod_; }
  const std::vector<std::uint32_t>& ext_modulus() const { return ext_mod_; }

  std::string spec_string() const;  // "p^m" or "p^m:n"
  std::string base_modulus_string() const;
  std::string ext_modulus_string() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(std::uint64_t index) const;
  FieldElement from_int(std::uint64_t v) const;  // v mod p as a constant
  FieldElement generator() const;                // class of y in F_q; m > 1 only

  bool same_field(const Field& other) const;
  // True when *this is an extension context over `base` (including base
  // itself): same p, m and base modulus, and `base` has no extension level.
  bool extends(const Field& base) const;
  // Reinterpret an element of the base field inside this extension.
  FieldElement embed(const FieldElement& e) const;

  // ---- index arithmetic (hot path) ----
  std::uint32_t idx_add(std::uint32_t a, std::uint32_t b) const {
    if (!add_tab_.empty()) return add_tab_[(std::size_t)a * size_ + b];
    if (m_ == 1 && n_ == 1) {
      std::uint64_t s = (std::uint64_t)a + b;
      return (std::uint32_t)(s >= p_ ? s - p_ : s);
    }
    return gen_add(a, b);
  }
  std::uint32_t idx_sub(std::uint32_t a, std::uint32_t b) const {
    if (!add_tab_.empty()) return add_tab_[(std::size_t)a * size_ + neg_tab_[b]];
    if (m_ == 1 && n_ == 1)
      return (std::uint32_t)(a >= b ? a - b : a + p_ - b);
    return gen_sub(a, b);
  }
  std::uint32_t idx_neg(std::uint32_t a) const {
    if (!neg_tab_.empty()) return neg_tab_[a];
    if (m_ == 1 && n_ == 1) return a == 0 ? 0 : (std::uint32_t)(p_ - a);
    return gen_neg(a);
  }
  std::uint32_t idx_mul(std::uint32_t a, std::uint32_t b) const {
    if (!mul_tab_.empty()) return mul_tab_[(std::size_t)a * size_ + b];
    if (m_ == 1 && n_ == 1) return (std::uint32_t)((std::uint64_t)a * b % p_);
    return gen_mul(a, b);
  }
  std::uint32_t idx_inv(std::uint32_t a) const;
  std::uint32_t idx_pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t idx_frobenius(std::uint32_t a) const { return idx_pow(a, q_); }

  std::vector<std::vector<std::uint32_t>> element_coeffs(std::uint64_t index) const;
  std::string element_string(std::uint64_t index) const;

  struct Tag {};
  explicit Field(Tag) {}

 private:
  std::uint64_t p_ = 0;
  unsigned m_ = 1;
  unsigned n_ = 1;
  std::uint64_t q_ = 0;
  std::uint64_t size_ = 0;
  std::uint64_t max_size_ = kDefaultMaxSize;
  std::vector<std::uint32_t> base_mod_;
  std::vector<std::uint32_t> ext_mod_;

  std::vector<std::uint32_t> add_tab_, mul_tab_, neg_tab_, inv_tab_;
  std::vector<std::uint32_t> b_add_tab_, b_mul_tab_;  // base level, m > 1 only

  // base-level ops on indices < q
  std::uint32_t b_add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t b_sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t b_neg(std::uint32_t a) const;
  std::uint32_t b_mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t b_inv(std::uint32_t a) const;
  std::uint32_t b_pow(std::uint32_t a, std::uint64_t e) const;

  // generic extension-level ops (no tables)
  std::uint32_t gen_add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t gen_sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t gen_neg(std::uint32_t a) const;
  std::uint32_t gen_mul(std::uint32_t a, std::uint32_t b) const;

  void build_tables();
  std::string base_element_string(std::uint32_t index) const;

  friend struct FieldBuilder;
};

// Value handle: shared context plus canonical index.  Structural equality;
// comparing or combining elements from different contexts throws
// MixedFields rather than answering false.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr f, std::uint64_t index);

  bool valid() const { return static_cast<bool>(field_); }
  const FieldPtr& field() const { return field_; }
  std::uint32_t index() const { return idx_; }
  bool is_zero() const { return idx_ == 0; }
  bool is_one() const { return idx_ == 1; }

  // n coefficient vectors over F_q, each m residues mod p.
  std::vector<std::vector<std::uint32_t>> coeffs() const;
  std::string str() const;

  FieldElement pow(std::uint64_t e) const;
  FieldElement inv() const;
  FieldElement frobenius() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }

 private:
  FieldPtr field_;
  std::uint32_t idx_ = 0;

  void require_valid() const;
  static const Field& common_field(const FieldElement& a, const FieldElement& b);
};

inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement sub(const FieldElement& a, const FieldElement& b) { return a - b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement inv(const FieldElement& a) { return a.inv(); }
inline FieldElement pow(const FieldElement& a, std::uint64_t e) { return a.pow(e); }
inline FieldElement frobenius(const FieldElement& a) { return a.frobenius(); }

// Restartable deterministic enumeration of all field elements in index
// order; independent streams over the same context partition work by
// offset.
class ElementStream {
 public:
  explicit ElementStream(FieldPtr f, std::uint64_t offset = 0);
  std::optional<FieldElement> next();
  std::uint64_t position() const { return pos_; }

 private:
  FieldPtr field_;
  std::uint64_t pos_;
};

// Deterministic isomorphism from a two-level context k_n = F_{(p^m)^n}
// onto the single-level context F_{p^{mn}}: the images of the two
// structure generators are the least roots of the respective moduli in
// the target.  Used when a whole extension has to serve as a new base
// field (e.g. sweeping shifts t from k_j and then extending further).
struct FlattenMap {
  FieldPtr src;
  FieldPtr dst;
  std::vector<std::uint32_t> image;  // by source index

  FieldElement operator()(const FieldElement& e) const;
};

FlattenMap flatten_field(const FieldPtr& ext);

bool is_prime_u64(std::uint64_t p);

inline FieldPtr make_field(std::uint64_t p, unsigned m,
                           std::uint64_t max_size = Field::kDefaultMaxSize) {
  return Field::make(p, m, max_size);
}
inline FieldPtr extend(const FieldPtr& base, unsigned n) {
  return Field::extend(base, n);
}

}  // namespace ffbias

#endif
