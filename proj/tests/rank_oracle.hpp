#ifndef FFBIAS_TEST_RANK_ORACLE_HPP
#define FFBIAS_TEST_RANK_ORACLE_HPP

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ffbias/poly.hpp"

namespace ffbias::test {

// Brute-force strength oracle for homogeneous quadratics in N <= 3
// variables: minimal r with Q = sum of r products of linear forms, the
// forms drawn from a quadratic extension (splitting every base quadratic,
// so the value matches the rank over the closure).  Quadratics are keyed
// by their 6 coefficients over the extension.
class QuadraticBruteForce {
 public:
  explicit QuadraticBruteForce(const FieldPtr& base)
      : ext_(base->is_base() ? Field::extend(base, 2) : base) {
    const std::uint64_t Q = ext_->size();
    // all products of two nonzero linear forms in 3 variables
    for (std::uint64_t a = 0; a < Q * Q * Q; ++a) {
      std::uint32_t f[3] = {(std::uint32_t)(a % Q), (std::uint32_t)(a / Q % Q),
                            (std::uint32_t)(a / Q / Q)};
      if (!f[0] && !f[1] && !f[2]) continue;
      forms_.push_back({f[0], f[1], f[2]});
    }
    for (const auto& u : forms_)
      for (const auto& v : forms_) {
        auto uv = product(u, v);
        if (products_.insert(key_of(uv)).second) distinct_.push_back(uv);
      }
  }

  // coefficients of (sum u_i x_i)(sum v_j x_j) in the key order
  // x0^2, x1^2, x2^2, x0x1, x0x2, x1x2
  std::array<std::uint32_t, 6> product(const std::array<std::uint32_t, 3>& u,
                                       const std::array<std::uint32_t, 3>& v) const {
    auto mul = [&](std::uint32_t a, std::uint32_t b) { return ext_->idx_mul(a, b); };
    auto add = [&](std::uint32_t a, std::uint32_t b) { return ext_->idx_add(a, b); };
    return {mul(u[0], v[0]),
            mul(u[1], v[1]),
            mul(u[2], v[2]),
            add(mul(u[0], v[1]), mul(u[1], v[0])),
            add(mul(u[0], v[2]), mul(u[2], v[0])),
            add(mul(u[1], v[2]), mul(u[2], v[1]))};
  }

  std::uint64_t key_of(const std::array<std::uint32_t, 6>& c) const {
    std::uint64_t key = 0;
    for (auto x : c) key = key * ext_->size() + x;
    return key;
  }

  std::array<std::uint32_t, 6> coeffs_of(const MultiPoly& Q) const {
    MultiPoly E = Q.embed_into(ext_);
    auto coeff = [&](std::uint32_t e0, std::uint32_t e1, std::uint32_t e2) {
      return E.coefficient({e0, e1, e2}).index();
    };
    return {coeff(2, 0, 0), coeff(0, 2, 0), coeff(0, 0, 2),
            coeff(1, 1, 0), coeff(1, 0, 1), coeff(0, 1, 1)};
  }

  // minimal r <= 3, or 0 for the zero quadratic
  unsigned min_rank(const MultiPoly& Q) const {
    auto c = coeffs_of(Q);
    bool zero = true;
    for (auto x : c) zero = zero && x == 0;
    if (zero) return 0;
    if (products_.count(key_of(c))) return 1;
    for (const auto& uv : distinct_) {
      std::array<std::uint32_t, 6> rest;
      for (int i = 0; i < 6; ++i) rest[i] = ext_->idx_sub(c[i], uv[i]);
      if (products_.count(key_of(rest))) return 2;
    }
    return 3;
  }

 private:
  FieldPtr ext_;
  std::vector<std::array<std::uint32_t, 3>> forms_;
  std::unordered_set<std::uint64_t> products_;
  std::vector<std::array<std::uint32_t, 6>> distinct_;
};

}  // namespace ffbias::test

#endif
