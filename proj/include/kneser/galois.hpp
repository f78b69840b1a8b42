#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kneser/error.hpp"

namespace kneser {

/// Element of GF(q) in the dense encoding: the little-endian radix-p digits
/// are the coefficients of the polynomial basis 1, t, t^2, ...
using Elem = std::uint8_t;

/// Table-driven GF(q) for the desk-scale orders q in {2,3,4,5,7,8,9}.
class Field {
 public:
  static constexpr int kMaxOrder = 9;

  static bool is_supported(int q) noexcept {
    return q == 2 || q == 3 || q == 4 || q == 5 || q == 7 || q == 8 || q == 9;
  }

  explicit Field(int q) : q_(q) {
    if (!is_supported(q)) throw Error(ErrorCode::UnsupportedOrder, "GF(" + std::to_string(q) + ") is not supported");
    switch (q) {
      case 4: p_ = 2; k_ = 2; poly_ = {1, 1, 1}; break;      // t^2 + t + 1
      case 8: p_ = 2; k_ = 3; poly_ = {1, 1, 0, 1}; break;   // t^3 + t + 1
      case 9: p_ = 3; k_ = 2; poly_ = {2, 1, 1}; break;      // t^2 + t + 2
      default: p_ = q; k_ = 1; break;
    }
    build_tables();
  }

  int order() const noexcept { return q_; }
  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return k_; }
  /// Coefficients of the reduction polynomial, constant term first; empty for prime fields.
  const std::vector<int>& reduction_poly() const noexcept { return poly_; }

  Elem add(Elem a, Elem b) const noexcept { return add_[a][b]; }
  Elem sub(Elem a, Elem b) const noexcept { return add_[a][neg_[b]]; }
  Elem neg(Elem a) const noexcept { return neg_[a]; }
  Elem mul(Elem a, Elem b) const noexcept { return mul_[a][b]; }
  Elem inv(Elem a) const {
    if (a == 0) throw Error(ErrorCode::ZeroInverse, "inverse of zero");
    return inv_[a];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  const auto& add_table() const noexcept { return add_; }
  const auto& mul_table() const noexcept { return mul_; }
  const auto& inv_table() const noexcept { return inv_; }

  friend bool operator==(const Field& a, const Field& b) = default;

 private:
  using Digits = std::array<int, 3>;

  Digits digits(int e) const {
    Digits d{};
    for (int i = 0; i < k_; ++i) {
      d[i] = e % p_;
      e /= p_;
    }
    return d;
  }
  int encode(const Digits& d) const {
    int e = 0;
    for (int i = k_ - 1; i >= 0; --i) e = e * p_ + d[i];
    return e;
  }

  void build_tables() {
    add_ = {};
    mul_ = {};
    neg_ = {};
    inv_ = {};
    for (int a = 0; a < q_; ++a) {
      auto da = digits(a);
      for (int b = 0; b < q_; ++b) {
        auto db = digits(b);
        Digits s{};
        for (int i = 0; i < k_; ++i) s[i] = (da[i] + db[i]) % p_;
        add_[a][b] = static_cast<Elem>(encode(s));

        // schoolbook product, then reduce by the monic polynomial from the top
        std::array<int, 5> prod{};
        for (int i = 0; i < k_; ++i)
          for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (int top = 2 * k_ - 2; top >= k_; --top) {
          int c = prod[top];
          if (c == 0) continue;
          for (int i = 0; i <= k_; ++i) prod[top - k_ + i] = ((prod[top - k_ + i] - c * poly_[i]) % p_ + p_) % p_;
        }
        Digits r{};
        for (int i = 0; i < k_; ++i) r[i] = prod[i];
        mul_[a][b] = static_cast<Elem>(encode(r));
      }
    }
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) {
        if (add_[a][b] == 0) neg_[a] = static_cast<Elem>(b);
        if (mul_[a][b] == 1) inv_[a] = static_cast<Elem>(b);
      }
  }

  int q_ = 0;
  int p_ = 0;
  int k_ = 1;
  std::vector<int> poly_;
  std::array<std::array<Elem, kMaxOrder>, kMaxOrder> add_{};
  std::array<std::array<Elem, kMaxOrder>, kMaxOrder> mul_{};
  std::array<Elem, kMaxOrder> neg_{};
  std::array<Elem, kMaxOrder> inv_{};
};

inline Field build_field(int q) { return Field(q); }

}  // namespace kneser
