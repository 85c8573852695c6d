/// @file tower.hpp
/// Towers F2(t1..tm)(sqrt theta_1)...(sqrt theta_r) together with their
/// maintained 2-bases and the Frobenius coordinate map.
///
/// An element of level r is stored flat as 2^r base rational functions: the
/// component at index k multiplies the product of sqrt(theta_l) over the set
/// bits l-1 of k. The upper half is therefore the `v` of u + v*sqrt(theta_r).
/// Elements are always trimmed to the lowest level they live in.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlform/rational.hpp"

namespace qlform {

class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(RationalFunction value);
  /// Component count must be a power of two; the result is trimmed.
  explicit FieldElement(std::vector<RationalFunction> components);

  std::size_t level() const noexcept;
  std::span<const RationalFunction> components() const noexcept { return c_; }
  std::size_t arity() const noexcept { return c_.empty() ? 0 : c_.front().arity(); }
  bool is_zero() const noexcept { return c_.size() == 1 && c_.front().is_zero(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_.front().is_one(); }
  bool empty() const noexcept { return c_.empty(); }

  FieldElement with_arity(std::size_t arity) const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;

 private:
  std::vector<RationalFunction> c_;
};

/// Coordinates of y over the 2-basis B: y = sum_S c_S^2 * prod_{b in S} b.
/// Indexed by the subset bitmask over basis positions; absent entries are zero.
struct SquareCoordinates {
  std::vector<FieldElement> entries;
};

struct TowerCaps {
  std::size_t max_trdeg = 8;
  std::size_t max_levels = 8;
};

/// A 2-basis member: either a base variable or sqrt(theta_level).
struct BasisMember {
  enum class Kind { BaseVar, Root } kind = Kind::BaseVar;
  std::size_t index = 0;  // variable index, or 1-based level

  friend bool operator==(const BasisMember&, const BasisMember&) = default;
};

struct AdjunctionLevel {
  FieldElement theta;
  std::size_t replaced_index = 0;
  std::vector<BasisMember> basis;

  // Change of basis relative to the level below, with b = replaced member:
  // theta = e0 + e1 * b where e0, e1 lie in K^2(B \ {b}).
  FieldElement e0;
  FieldElement e1_inv;
  FieldElement replaced_value;
  // Products of the level-below basis over masks avoiding replaced_index.
  std::vector<FieldElement> monomials_below;
};

class FieldTower;
using Field = std::shared_ptr<const FieldTower>;

class FieldTower {
  struct Private {};

 public:
  FieldTower(Private, std::vector<std::string> vars, TowerCaps caps);

  /// Level-0 field F2(vars). Throws DuplicateVar, CapExceeded.
  static Field make_base_field(std::vector<std::string> vars, TowerCaps caps = {});

  /// This field with sqrt(theta) adjoined. Throws ThetaIsSquare when theta
  /// is a square (including zero), CapExceeded on the level cap.
  Field adjoin_sqrt(const FieldElement& theta) const;

  /// Purely transcendental extension by fresh base variables, appended
  /// after the existing ones; existing levels are carried over.
  Field with_fresh_vars(const std::vector<std::string>& names) const;

  const std::vector<std::string>& base_vars() const noexcept { return vars_; }
  std::size_t trdeg() const noexcept { return vars_.size(); }
  std::size_t height() const noexcept { return levels_.size(); }
  const std::vector<AdjunctionLevel>& levels() const noexcept { return levels_; }
  const TowerCaps& caps() const noexcept { return caps_; }
  /// 2-basis of level `level` (0 = base variables).
  const std::vector<BasisMember>& two_basis(std::size_t level) const;
  const std::vector<BasisMember>& two_basis() const { return two_basis(height()); }

  /// Canonical JSON text of the presentation; equal text means equal field.
  const std::string& descriptor() const noexcept { return descriptor_; }
  bool same_as(const FieldTower& other) const noexcept { return descriptor_ == other.descriptor_; }
  /// True when `sub`'s base variables are a prefix of ours and its levels a
  /// prefix of ours (after re-embedding).
  bool is_extension_of(const FieldTower& sub) const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement variable(std::size_t index) const;
  FieldElement variable(const std::string& name) const;
  /// sqrt(theta_level), 1-based level.
  FieldElement root(std::size_t level) const;
  FieldElement from_rational(const RationalFunction& f) const;
  /// Re-embeds an element of a subfield (fewer base variables).
  FieldElement embed(const FieldElement& x) const;
  /// Arity and level fit this tower.
  bool contains(const FieldElement& x) const noexcept;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement square(const FieldElement& a) const;
  FieldElement inverse(const FieldElement& a) const;
  FieldElement div(const FieldElement& a, const FieldElement& b) const;

  /// Frobenius coordinates over the top-level 2-basis.
  SquareCoordinates expand(const FieldElement& y) const;
  /// sum_S c_S^2 * basis monomial S, the inverse of expand.
  FieldElement reconstruct(const SquareCoordinates& coords) const;
  /// Product of the top-level basis members selected by mask.
  FieldElement basis_monomial(std::size_t mask) const;
  std::optional<FieldElement> sqrt_if_square(const FieldElement& y) const;

  std::string to_string(const FieldElement& x) const;

 private:
  SquareCoordinates expand_at(std::size_t level, const FieldElement& y) const;
  FieldElement member_value(const BasisMember& m) const;
  void check_member(const FieldElement& x) const;

  std::vector<std::string> vars_;
  TowerCaps caps_;
  std::vector<AdjunctionLevel> levels_;
  std::vector<BasisMember> base_basis_;
  std::string descriptor_;
};

enum class ElemOp { Add, Mul, Div, Inverse, Square };
/// Dispatch form of the element arithmetic; `y` is ignored for unary ops.
FieldElement elem_arith(const FieldTower& field, ElemOp op, const FieldElement& x, const FieldElement& y = {});

/// Sum of the coordinate vectors, entrywise.
SquareCoordinates operator+(const SquareCoordinates& a, const SquareCoordinates& b);

void check_same_field(const FieldTower& a, const FieldTower& b);

}  // namespace qlform
