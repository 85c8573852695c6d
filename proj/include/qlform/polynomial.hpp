/// @file polynomial.hpp
/// Sparse multivariate polynomials over the two-element field.
///
/// A polynomial is a set of exponent vectors kept in strictly descending
/// lexicographic order (t1 is the most significant variable). The presence
/// of a term means coefficient 1; adding a term twice cancels it.
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qlform {

inline constexpr std::size_t kMaxVars = 16;

/// Process-wide arithmetic caps. Exponents are stored in 16 bits, so the
/// exponent cap can only be lowered from its default.
struct ArithLimits {
  std::uint32_t max_exponent = 0xFFFF;
  std::size_t max_arity = kMaxVars;
};

ArithLimits arith_limits() noexcept;
void set_arith_limits(const ArithLimits& limits);

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

  std::uint32_t total_degree() const noexcept;
  bool divides(const Monomial& other) const noexcept;
  bool is_one() const noexcept;
};

Monomial operator*(const Monomial& a, const Monomial& b);
/// Requires a.divides(b).
Monomial monomial_quotient(const Monomial& b, const Monomial& a) noexcept;
Monomial monomial_gcd(const Monomial& a, const Monomial& b) noexcept;

class Polynomial2 {
 public:
  explicit Polynomial2(std::size_t arity = 0);

  static Polynomial2 one(std::size_t arity);
  static Polynomial2 variable(std::size_t arity, std::size_t index, std::uint32_t power = 1);
  static Polynomial2 monomial(std::size_t arity, const Monomial& m);
  /// Builds from an arbitrary term list; repeated terms cancel in pairs.
  static Polynomial2 from_terms(std::size_t arity, std::vector<Monomial> terms);

  std::size_t arity() const noexcept { return arity_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_one() const noexcept { return terms_.size() == 1 && terms_.front().is_one(); }
  bool is_constant() const noexcept { return terms_.empty() || is_one(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::span<const Monomial> terms() const noexcept { return terms_; }
  const Monomial& leading() const { return terms_.front(); }

  std::uint32_t degree_in(std::size_t var) const noexcept;
  std::uint32_t total_degree() const noexcept;
  bool uses_var(std::size_t var) const noexcept;
  /// Componentwise minimum of all exponent vectors (zero polynomial: one).
  Monomial monomial_content() const noexcept;

  /// Re-embeds into a larger (or equal) variable set; shrinking requires
  /// the dropped variables to be unused.
  Polynomial2 with_arity(std::size_t arity) const;

  Polynomial2& operator+=(const Polynomial2& other);
  friend Polynomial2 operator+(Polynomial2 a, const Polynomial2& b) { return a += b; }
  friend Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b);
  Polynomial2 times_monomial(const Monomial& m) const;
  /// Frobenius: doubles every exponent.
  Polynomial2 square() const;

  friend bool operator==(const Polynomial2&, const Polynomial2&) = default;
  /// Total order used for canonical sorting (arity, then term lists).
  friend std::strong_ordering operator<=>(const Polynomial2& a, const Polynomial2& b);

 private:
  std::size_t arity_;
  std::vector<Monomial> terms_;

  friend class PolyBuilder;
};

enum class PolyOp { Add, Mul, ExactQuotient };

/// Sum, product or exact quotient. Throws InexactDivision / ArityMismatch.
Polynomial2 poly_arith(PolyOp op, const Polynomial2& a, const Polynomial2& b);

/// Returns a/b if b divides a exactly.
std::optional<Polynomial2> try_divide(const Polynomial2& a, const Polynomial2& b);
Polynomial2 exact_quotient(const Polynomial2& a, const Polynomial2& b);

/// Greatest common divisor; gcd(a, 0) = a. Throws BothZero.
Polynomial2 poly_gcd(const Polynomial2& a, const Polynomial2& b);

/// f = even + t_var * odd, where both parts only contain even powers of t_var.
std::pair<Polynomial2, Polynomial2> even_odd_split(const Polynomial2& f, std::size_t var);

std::optional<Polynomial2> sqrt_if_square(const Polynomial2& f);

/// Text form: terms joined by '+', factors `name^e` joined by '*'. With no
/// names supplied the variables print as t1, t2, ...
std::string to_string(const Polynomial2& f, std::span<const std::string> names = {});

std::vector<std::string> default_var_names(std::size_t arity);

}  // namespace qlform
