#include "qlform/tower.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "qlform/error.hpp"
#include "qlform/serialize.hpp"

namespace qlform {

namespace {

using Comps = std::vector<RationalFunction>;
using View = std::span<const RationalFunction>;

bool all_zero(View s) {
  return std::all_of(s.begin(), s.end(), [](const RationalFunction& r) { return r.is_zero(); });
}

View trim(View s) {
  while (s.size() > 1 && all_zero(s.subspan(s.size() / 2))) s = s.first(s.size() / 2);
  return s;
}

void trim(Comps& c) {
  std::size_t n = trim(View(c)).size();
  c.resize(n, RationalFunction(c.front().arity()));
}

std::size_t log2_size(std::size_t n) { return static_cast<std::size_t>(std::countr_zero(n)); }

Comps padded(View s, std::size_t n, std::size_t arity) {
  Comps out(s.begin(), s.end());
  out.resize(n, RationalFunction(arity));
  return out;
}

Comps add(View a, View b) {
  if (a.size() < b.size()) std::swap(a, b);
  Comps out(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

// Arithmetic of the flat representation; theta for level L is levels[L-1].
class FlatArith {
 public:
  FlatArith(const std::vector<AdjunctionLevel>& levels, std::size_t arity) : levels_(levels), arity_(arity) {}

  Comps mul(View a, View b) const {
    a = trim(a);
    b = trim(b);
    if (all_zero(a) || all_zero(b)) return Comps{RationalFunction(arity_)};
    const std::size_t n = std::max(a.size(), b.size());
    if (n == 1) return Comps{a[0] * b[0]};
    const std::size_t half = n / 2;
    const View theta = levels_[log2_size(n) - 1].theta.components();
    auto split = [half](View x) -> std::pair<View, View> {
      if (x.size() > half) return {x.first(half), x.subspan(half)};
      return {x, View{}};
    };
    auto [au, av] = split(a);
    auto [bu, bv] = split(b);
    Comps low = mul(au, bu);
    Comps high;
    if (av.empty()) {
      high = mul(au, bv);
    } else if (bv.empty()) {
      high = mul(av, bu);
    } else {
      Comps vv = mul(av, bv);
      low = add(low, mul(vv, theta));
      high = add(mul(au, bv), mul(av, bu));
    }
    Comps out = padded(low, half, arity_);
    Comps hi = padded(high, half, arity_);
    out.insert(out.end(), std::make_move_iterator(hi.begin()), std::make_move_iterator(hi.end()));
    return out;
  }

  Comps square(View a) const {
    a = trim(a);
    if (a.size() == 1) return Comps{a[0].square()};
    const std::size_t half = a.size() / 2;
    const View theta = levels_[log2_size(a.size()) - 1].theta.components();
    Comps low = square(a.first(half));
    Comps vv = square(a.subspan(half));
    return add(low, mul(vv, theta));
  }

  Comps inverse(View a) const {
    a = trim(a);
    if (a.size() == 1) return Comps{a[0].inverse()};
    const std::size_t half = a.size() / 2;
    const View theta = levels_[log2_size(a.size()) - 1].theta.components();
    // (u + v s)^-1 = (u + v s) / (u^2 + v^2 theta)
    Comps norm = add(square(a.first(half)), mul(square(a.subspan(half)), theta));
    Comps ninv = inverse(norm);
    Comps out = padded(mul(a.first(half), ninv), half, arity_);
    Comps hi = padded(mul(a.subspan(half), ninv), half, arity_);
    out.insert(out.end(), std::make_move_iterator(hi.begin()), std::make_move_iterator(hi.end()));
    return out;
  }

 private:
  const std::vector<AdjunctionLevel>& levels_;
  std::size_t arity_;
};

}  // namespace

FieldElement::FieldElement(RationalFunction value) { c_.push_back(std::move(value)); }

FieldElement::FieldElement(std::vector<RationalFunction> components) : c_(std::move(components)) {
  if (c_.empty() || !std::has_single_bit(c_.size())) {
    throw Error(ErrorCode::UsageError, "field element needs a power-of-two component count");
  }
  const std::size_t arity = c_.front().arity();
  for (const auto& r : c_) {
    if (r.arity() != arity) throw Error(ErrorCode::ArityMismatch, "field element components differ in arity");
  }
  trim(c_);
}

std::size_t FieldElement::level() const noexcept { return c_.empty() ? 0 : log2_size(c_.size()); }

FieldElement FieldElement::with_arity(std::size_t arity) const {
  std::vector<RationalFunction> out;
  out.reserve(c_.size());
  for (const auto& r : c_) out.push_back(r.with_arity(arity));
  FieldElement e;
  e.c_ = std::move(out);
  return e;
}

SquareCoordinates operator+(const SquareCoordinates& a, const SquareCoordinates& b) {
  if (a.entries.size() != b.entries.size()) throw Error(ErrorCode::FieldMismatch, "coordinate lengths differ");
  SquareCoordinates out;
  out.entries.reserve(a.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    out.entries.emplace_back(add(a.entries[i].components(), b.entries[i].components()));
  }
  return out;
}

void check_same_field(const FieldTower& a, const FieldTower& b) {
  if (!a.same_as(b)) throw Error(ErrorCode::FieldMismatch, "operands live over different field presentations");
}

FieldTower::FieldTower(Private, std::vector<std::string> vars, TowerCaps caps)
    : vars_(std::move(vars)), caps_(caps) {
  for (std::size_t i = 0; i < vars_.size(); ++i) base_basis_.push_back({BasisMember::Kind::BaseVar, i});
}

Field FieldTower::make_base_field(std::vector<std::string> vars, TowerCaps caps) {
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (v.empty()) throw Error(ErrorCode::UsageError, "empty variable name");
    if (!seen.insert(v).second) throw Error(ErrorCode::DuplicateVar, "variable '" + v + "' listed twice");
  }
  if (vars.size() > caps.max_trdeg) {
    throw Error(ErrorCode::CapExceeded, "transcendence degree " + std::to_string(vars.size()) + " exceeds cap " +
                                            std::to_string(caps.max_trdeg));
  }
  if (vars.size() > arith_limits().max_arity) throw Error(ErrorCode::CapExceeded, "too many base variables");
  auto f = std::make_shared<FieldTower>(Private{}, std::move(vars), caps);
  f->descriptor_ = field_descriptor_json(*f).dump();
  return f;
}

const std::vector<BasisMember>& FieldTower::two_basis(std::size_t level) const {
  if (level > height()) throw Error(ErrorCode::IndexOutOfRange, "tower level out of range");
  return level == 0 ? base_basis_ : levels_[level - 1].basis;
}

void FieldTower::check_member(const FieldElement& x) const {
  if (!contains(x)) throw Error(ErrorCode::FieldMismatch, "element does not belong to this field");
}

bool FieldTower::contains(const FieldElement& x) const noexcept {
  return !x.empty() && x.arity() == trdeg() && x.level() <= height();
}

FieldElement FieldTower::zero() const { return FieldElement(RationalFunction(trdeg())); }
FieldElement FieldTower::one() const { return FieldElement(RationalFunction::one(trdeg())); }

FieldElement FieldTower::variable(std::size_t index) const {
  return FieldElement(RationalFunction::variable(trdeg(), index));
}

FieldElement FieldTower::variable(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw Error(ErrorCode::UsageError, "unknown variable '" + name + "'");
  return variable(static_cast<std::size_t>(it - vars_.begin()));
}

FieldElement FieldTower::root(std::size_t level) const {
  if (level == 0 || level > height()) throw Error(ErrorCode::IndexOutOfRange, "no such adjunction level");
  std::vector<RationalFunction> c(std::size_t{1} << level, RationalFunction(trdeg()));
  c[std::size_t{1} << (level - 1)] = RationalFunction::one(trdeg());
  return FieldElement(std::move(c));
}

FieldElement FieldTower::from_rational(const RationalFunction& f) const {
  if (f.arity() != trdeg()) throw Error(ErrorCode::ArityMismatch, "rational function arity differs from trdeg");
  return FieldElement(f);
}

FieldElement FieldTower::embed(const FieldElement& x) const {
  if (x.arity() > trdeg() || x.level() > height()) {
    throw Error(ErrorCode::NotAnExtension, "element does not come from a subfield");
  }
  return x.arity() == trdeg() ? x : x.with_arity(trdeg());
}

FieldElement FieldTower::member_value(const BasisMember& m) const {
  return m.kind == BasisMember::Kind::BaseVar ? variable(m.index) : root(m.index);
}

FieldElement FieldTower::add(const FieldElement& a, const FieldElement& b) const {
  check_member(a);
  check_member(b);
  return FieldElement(qlform::add(a.components(), b.components()));
}

FieldElement FieldTower::mul(const FieldElement& a, const FieldElement& b) const {
  check_member(a);
  check_member(b);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return FieldElement(FlatArith(levels_, trdeg()).mul(a.components(), b.components()));
}

FieldElement FieldTower::square(const FieldElement& a) const {
  check_member(a);
  return FieldElement(FlatArith(levels_, trdeg()).square(a.components()));
}

FieldElement FieldTower::inverse(const FieldElement& a) const {
  check_member(a);
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return FieldElement(FlatArith(levels_, trdeg()).inverse(a.components()));
}

FieldElement FieldTower::div(const FieldElement& a, const FieldElement& b) const {
  if (b.is_one()) return a;
  return mul(a, inverse(b));
}

FieldElement elem_arith(const FieldTower& field, ElemOp op, const FieldElement& x, const FieldElement& y) {
  switch (op) {
    case ElemOp::Add:
      return field.add(x, y);
    case ElemOp::Mul:
      return field.mul(x, y);
    case ElemOp::Div:
      return field.div(x, y);
    case ElemOp::Inverse:
      return field.inverse(x);
    case ElemOp::Square:
      return field.square(x);
  }
  throw Error(ErrorCode::UsageError, "unknown element operation");
}

SquareCoordinates FieldTower::expand(const FieldElement& y) const {
  check_member(y);
  return expand_at(height(), y);
}

SquareCoordinates FieldTower::expand_at(std::size_t level, const FieldElement& y) const {
  const std::size_t d = trdeg();
  const std::size_t n = std::size_t{1} << d;
  SquareCoordinates out;
  out.entries.assign(n, zero());
  if (y.is_zero()) return out;

  if (level == 0) {
    // y = f/g = (f g) / g^2; split f g by exponent parity.
    const RationalFunction& r = y.components()[0];
    const Polynomial2 fg = r.den().is_one() ? r.num() : r.num() * r.den();
    std::vector<std::vector<Monomial>> buckets(n);
    for (const auto& m : fg.terms()) {
      std::size_t mask = 0;
      Monomial half;
      for (std::size_t v = 0; v < d; ++v) {
        if (m.exp[v] % 2 != 0) mask |= std::size_t{1} << v;
        half.exp[v] = static_cast<std::uint16_t>(m.exp[v] / 2);
      }
      buckets[mask].push_back(half);
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (buckets[s].empty()) continue;
      out.entries[s] = FieldElement(RationalFunction(Polynomial2::from_terms(d, std::move(buckets[s])), r.den()));
    }
    return out;
  }

  const AdjunctionLevel& lvl = levels_[level - 1];
  const std::size_t j = lvl.replaced_index;
  const std::size_t jbit = std::size_t{1} << j;
  const std::size_t half = std::size_t{1} << (level - 1);
  View comps = y.components();
  View u = comps.size() > half ? comps.first(half) : comps;
  View v = comps.size() > half ? comps.subspan(half) : View{};

  auto handle = [&](View part, std::size_t offset) {
    FieldElement w(Comps(part.begin(), part.end()));
    if (w.is_zero()) return;
    const SquareCoordinates c = expand_at(level - 1, w);
    // w = w0 + w1 b with w0, w1 in K^2(B \ b); rewrite as A + B theta.
    FieldElement w1 = zero();
    for (std::size_t s = 0; s < n; ++s) {
      if (!(s & jbit) || c.entries[s].is_zero()) continue;
      w1 = add(w1, mul(square(c.entries[s]), lvl.monomials_below[s & ~jbit]));
    }
    const FieldElement bcoef = mul(w1, lvl.e1_inv);
    const FieldElement acoef = add(add(w, mul(w1, lvl.replaced_value)), mul(bcoef, lvl.e0));
    const SquareCoordinates a = expand_at(level - 1, acoef);
    const SquareCoordinates b = expand_at(level - 1, bcoef);
    for (std::size_t t = 0; t < n; ++t) {
      if (t & jbit) continue;
      if (a.entries[t].is_zero() && b.entries[t].is_zero()) continue;
      // a_T + b_T sqrt(theta_level)
      Comps entry = padded(a.entries[t].components(), half, d);
      Comps hi = padded(b.entries[t].components(), half, d);
      entry.insert(entry.end(), std::make_move_iterator(hi.begin()), std::make_move_iterator(hi.end()));
      out.entries[t | offset] = FieldElement(std::move(entry));
    }
  };
  handle(u, 0);
  if (!v.empty()) handle(v, jbit);
  return out;
}

FieldElement FieldTower::basis_monomial(std::size_t mask) const {
  FieldElement m = one();
  const auto& basis = two_basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (mask & (std::size_t{1} << i)) m = mul(m, member_value(basis[i]));
  }
  return m;
}

FieldElement FieldTower::reconstruct(const SquareCoordinates& coords) const {
  if (coords.entries.size() != (std::size_t{1} << trdeg())) {
    throw Error(ErrorCode::FieldMismatch, "coordinate vector has the wrong length");
  }
  FieldElement y = zero();
  for (std::size_t s = 0; s < coords.entries.size(); ++s) {
    if (coords.entries[s].is_zero()) continue;
    y = add(y, mul(square(coords.entries[s]), basis_monomial(s)));
  }
  return y;
}

std::optional<FieldElement> FieldTower::sqrt_if_square(const FieldElement& y) const {
  check_member(y);
  if (y.level() == 0) {
    auto r = qlform::sqrt_if_square(y.components()[0]);
    if (r) return FieldElement(std::move(*r));
    if (height() == 0) return std::nullopt;
  }
  SquareCoordinates c = expand(y);
  for (std::size_t s = 1; s < c.entries.size(); ++s) {
    if (!c.entries[s].is_zero()) return std::nullopt;
  }
  return c.entries[0];
}

Field FieldTower::adjoin_sqrt(const FieldElement& theta) const {
  check_member(theta);
  if (theta.is_zero()) throw Error(ErrorCode::ThetaIsSquare, "cannot adjoin the square root of zero");
  if (height() + 1 > caps_.max_levels) {
    throw Error(ErrorCode::CapExceeded, "tower height would exceed level cap " + std::to_string(caps_.max_levels));
  }
  const std::size_t d = trdeg();
  const std::size_t n = std::size_t{1} << d;
  const SquareCoordinates tau = expand(theta);

  // Replace the lowest-index basis member occurring in an odd monomial.
  std::size_t j = d;
  for (std::size_t s = 1; s < n; ++s) {
    if (tau.entries[s].is_zero()) continue;
    j = std::min(j, static_cast<std::size_t>(std::countr_zero(s)));
  }
  if (j == d) throw Error(ErrorCode::ThetaIsSquare, "theta is a square: " + to_string(theta));
  const std::size_t jbit = std::size_t{1} << j;

  AdjunctionLevel lvl;
  lvl.theta = theta;
  lvl.replaced_index = j;
  lvl.basis = two_basis();
  lvl.replaced_value = member_value(lvl.basis[j]);
  lvl.basis[j] = {BasisMember::Kind::Root, height() + 1};

  lvl.monomials_below.assign(n, FieldElement{});
  const auto& below = two_basis();
  for (std::size_t s = 0; s < n; ++s) {
    if (s & jbit) continue;
    if (s == 0) {
      lvl.monomials_below[s] = one();
      continue;
    }
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
    lvl.monomials_below[s] = mul(lvl.monomials_below[s & (s - 1)], member_value(below[low]));
  }
  FieldElement e0 = zero(), e1 = zero();
  for (std::size_t s = 0; s < n; ++s) {
    if (tau.entries[s].is_zero()) continue;
    const FieldElement term = mul(square(tau.entries[s]), lvl.monomials_below[s & ~jbit]);
    if (s & jbit) {
      e1 = add(e1, term);
    } else {
      e0 = add(e0, term);
    }
  }
  lvl.e0 = std::move(e0);
  lvl.e1_inv = inverse(e1);

  auto f = std::make_shared<FieldTower>(Private{}, vars_, caps_);
  f->levels_ = levels_;
  f->levels_.push_back(std::move(lvl));
  f->descriptor_ = field_descriptor_json(*f).dump();
  return f;
}

Field FieldTower::with_fresh_vars(const std::vector<std::string>& names) const {
  std::vector<std::string> vars = vars_;
  vars.insert(vars.end(), names.begin(), names.end());
  Field f = make_base_field(std::move(vars), caps_);
  for (const auto& lvl : levels_) {
    Field next = f->adjoin_sqrt(lvl.theta.with_arity(f->trdeg()));
    if (next->levels().back().replaced_index != lvl.replaced_index) {
      throw Error(ErrorCode::InternalInconsistency, "fresh variables changed a replacement index");
    }
    f = std::move(next);
  }
  return f;
}

bool FieldTower::is_extension_of(const FieldTower& sub) const {
  if (sub.trdeg() > trdeg() || sub.height() > height()) return false;
  if (!std::equal(sub.vars_.begin(), sub.vars_.end(), vars_.begin())) return false;
  for (std::size_t i = 0; i < sub.height(); ++i) {
    if (sub.levels_[i].theta.with_arity(trdeg()) != levels_[i].theta) return false;
  }
  return true;
}

std::string FieldTower::to_string(const FieldElement& x) const { return element_expr_json(*this, x).dump(); }

}  // namespace qlform
