#include "qlform/rational.hpp"

#include "qlform/error.hpp"

namespace qlform {

RationalFunction::RationalFunction(std::size_t arity) : num_(arity), den_(Polynomial2::one(arity)) {}

RationalFunction::RationalFunction(Polynomial2 num) : num_(std::move(num)), den_(Polynomial2::one(num_.arity())) {}

RationalFunction::RationalFunction(Polynomial2 num, Polynomial2 den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.arity() != den_.arity()) throw Error(ErrorCode::ArityMismatch, "numerator/denominator arity differ");
  if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial2::one(num_.arity());
    return;
  }
  if (den_.is_one()) return;
  Polynomial2 g = poly_gcd(num_, den_);
  if (!g.is_one()) {
    num_ = exact_quotient(num_, g);
    den_ = exact_quotient(den_, g);
  }
}

RationalFunction RationalFunction::with_arity(std::size_t arity) const {
  return RationalFunction(num_.with_arity(arity), den_.with_arity(arity), Reduced{});
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (den_.is_one() && other.den_.is_one()) {
    num_ += other.num_;
    return *this;
  }
  if (den_ == other.den_) {
    *this = RationalFunction(num_ + other.num_, den_);
    return *this;
  }
  // a/b + c/d with g = gcd(b, d): the result's reduction only needs gcd(num, g).
  const Polynomial2 g = poly_gcd(den_, other.den_);
  if (g.is_one()) {
    Polynomial2 n = num_ * other.den_ + other.num_ * den_;
    if (n.is_zero()) return *this = RationalFunction(num_.arity());
    *this = RationalFunction(std::move(n), den_ * other.den_, Reduced{});
    return *this;
  }
  const Polynomial2 b1 = exact_quotient(den_, g);
  const Polynomial2 d1 = exact_quotient(other.den_, g);
  Polynomial2 n = num_ * d1 + other.num_ * b1;
  if (n.is_zero()) return *this = RationalFunction(num_.arity());
  Polynomial2 d = den_ * d1;
  const Polynomial2 g2 = poly_gcd(n, g);
  if (!g2.is_one()) {
    n = exact_quotient(n, g2);
    d = exact_quotient(d, g2);
  }
  *this = RationalFunction(std::move(n), std::move(d), Reduced{});
  return *this;
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.num_.arity() != b.num_.arity()) throw Error(ErrorCode::ArityMismatch, "rational function arity differ");
  if (a.is_zero() || b.is_zero()) return RationalFunction(a.arity());
  if (a.den_.is_one() && b.den_.is_one()) return RationalFunction(a.num_ * b.num_);
  // Cross-cancel: gcd(a.num, b.den) and gcd(b.num, a.den).
  Polynomial2 an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  if (!bd.is_one()) {
    Polynomial2 g = poly_gcd(an, bd);
    if (!g.is_one()) {
      an = exact_quotient(an, g);
      bd = exact_quotient(bd, g);
    }
  }
  if (!ad.is_one()) {
    Polynomial2 g = poly_gcd(bn, ad);
    if (!g.is_one()) {
      bn = exact_quotient(bn, g);
      ad = exact_quotient(ad, g);
    }
  }
  return RationalFunction(an * bn, ad * bd, RationalFunction::Reduced{});
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return RationalFunction(den_, num_, Reduced{});
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) { return a * b.inverse(); }

RationalFunction RationalFunction::square() const { return RationalFunction(num_.square(), den_.square(), Reduced{}); }

std::optional<RationalFunction> sqrt_if_square(const RationalFunction& f) {
  auto n = sqrt_if_square(f.num());
  if (!n) return std::nullopt;
  auto d = sqrt_if_square(f.den());
  if (!d) return std::nullopt;
  return RationalFunction(std::move(*n), std::move(*d));
}

std::string to_string(const RationalFunction& f, std::span<const std::string> names) {
  std::string n = to_string(f.num(), names);
  if (f.den().is_one()) return n;
  if (f.num().size() > 1) n = "(" + n + ")";
  std::string d = to_string(f.den(), names);
  const bool single_factor = f.den().size() == 1 && d.find('*') == std::string::npos;
  if (!single_factor) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace qlform
