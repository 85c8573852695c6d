/// @file square_subspace.hpp
/// Linear algebra over the square subfield K^2.
///
/// The coordinate map y -> (c_S) is additive with expand(l^2 y) = l expand(y),
/// so K^2-linear relations among elements are exactly K-linear relations
/// among their coordinate vectors. Everything here eliminates over K.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qlform/tower.hpp"

namespace qlform {

/// Semi-echelon form of coordinate vectors with provenance. Pivots follow
/// the first nonzero coordinate (mask order) of each vector, vectors are
/// taken in insertion order, and every stored row is scaled to pivot 1.
class CoordinateEchelon {
 public:
  explicit CoordinateEchelon(Field field) : field_(std::move(field)) {}

  /// Returns nothing when `coords` is independent of earlier insertions;
  /// otherwise the relation l with sum_k l_k * coords_k = 0, l_new = 1.
  /// A dependent vector is forgotten (not counted) unless keep_dependent.
  std::optional<std::vector<FieldElement>> insert(SquareCoordinates coords, bool keep_dependent = true);
  /// Coefficients l over inserted vectors with sum l_k coords_k = v, if any.
  std::optional<std::vector<FieldElement>> solve(SquareCoordinates v) const;

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t inserted() const noexcept { return inserted_; }

 private:
  struct Row {
    std::size_t pivot;
    std::vector<FieldElement> v;
    std::vector<FieldElement> combo;
  };
  void reduce(std::vector<FieldElement>& v, std::vector<FieldElement>& combo) const;

  Field field_;
  std::vector<Row> rows_;
  std::size_t inserted_ = 0;
};

struct RankResult {
  std::size_t rank = 0;
  /// Indices of the elements that start a new pivot, ascending.
  std::vector<std::size_t> pivots;
  /// One relation per dependent element: sum_i l_i^2 elems_i = 0.
  std::vector<std::vector<FieldElement>> kernel;
};

/// Rank of the K^2-span of `elems`, memoized per (field, elements).
RankResult rank_over_squares(const Field& field, std::span<const FieldElement> elems);

void clear_rank_memo();

/// A finite-dimensional K^2-subspace of K.
class SquareSubspace {
 public:
  static SquareSubspace span(Field field, std::vector<FieldElement> generators);

  const Field& field() const noexcept { return field_; }
  const std::vector<FieldElement>& generators() const noexcept { return generators_; }
  /// The independent generators at pivot positions.
  const std::vector<FieldElement>& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.size(); }

  bool contains(const FieldElement& y) const;
  /// l with y = sum l_i^2 basis_i when y is a member.
  std::optional<std::vector<FieldElement>> coefficients(const FieldElement& y) const;
  bool is_subspace_of(const SquareSubspace& other) const;

  SquareSubspace scaled(const FieldElement& a) const;
  SquareSubspace intersect(const SquareSubspace& other) const;
  SquareSubspace sum(const SquareSubspace& other) const;

 private:
  explicit SquareSubspace(Field field) : field_(field), echelon_(std::move(field)) {}

  Field field_;
  std::vector<FieldElement> generators_;
  std::vector<FieldElement> basis_;
  std::vector<SquareCoordinates> basis_coords_;
  CoordinateEchelon echelon_;
};

}  // namespace qlform
