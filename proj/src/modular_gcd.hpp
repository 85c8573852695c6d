// Multivariate gcd over GF(2) by evaluation and interpolation in GF(2^31).
#pragma once

#include <cstdint>

#include "qlform/polynomial.hpp"

namespace qlform::detail {

/// Arithmetic in GF(2^31) = GF(2)[x] / (x^31 + x^3 + 1).
struct Gf31 {
  static constexpr std::uint32_t kMask = 0x7FFFFFFFu;
  static std::uint32_t mul(std::uint32_t a, std::uint32_t b) noexcept;
  static std::uint32_t inv(std::uint32_t a) noexcept;
};

/// gcd of two nonzero polynomials; the result has leading coefficient 1.
Polynomial2 modular_gcd(const Polynomial2& a, const Polynomial2& b);

}  // namespace qlform::detail
