#pragma once

#include <optional>
#include <span>
#include <string>

#include "qlform/polynomial.hpp"

namespace qlform {

/// Reduced fraction num/den over F2[t1..tn]. Every polynomial over the
/// two-element field is monic, so dividing out the gcd already yields a
/// unique representative and equal values compare bit-identical.
class RationalFunction {
 public:
  explicit RationalFunction(std::size_t arity = 0);
  explicit RationalFunction(Polynomial2 num);
  /// Normalizes; throws DivisionByZero if den is zero.
  RationalFunction(Polynomial2 num, Polynomial2 den);

  static RationalFunction one(std::size_t arity) { return RationalFunction(Polynomial2::one(arity)); }
  static RationalFunction variable(std::size_t arity, std::size_t index) {
    return RationalFunction(Polynomial2::variable(arity, index));
  }

  const Polynomial2& num() const noexcept { return num_; }
  const Polynomial2& den() const noexcept { return den_; }
  std::size_t arity() const noexcept { return num_.arity(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_one() const noexcept { return num_.is_one() && den_.is_one(); }

  RationalFunction with_arity(std::size_t arity) const;

  RationalFunction& operator+=(const RationalFunction& other);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction inverse() const;
  /// Frobenius; needs no gcd since squaring preserves coprimality.
  RationalFunction square() const;

  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;
  friend auto operator<=>(const RationalFunction&, const RationalFunction&) = default;

 private:
  struct Reduced {};
  RationalFunction(Polynomial2 num, Polynomial2 den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

  Polynomial2 num_;
  Polynomial2 den_;
};

/// g with g*g == f when f is a square in F2(t); every exponent of the
/// canonical numerator and denominator must then be even.
std::optional<RationalFunction> sqrt_if_square(const RationalFunction& f);

/// `num`, `num/den`, with parentheses around multi-term parts.
std::string to_string(const RationalFunction& f, std::span<const std::string> names = {});

}  // namespace qlform
