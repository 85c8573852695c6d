#include "qlform/square_subspace.hpp"

#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "qlform/error.hpp"

namespace qlform {

namespace {

std::size_t first_nonzero(const std::vector<FieldElement>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) return i;
  }
  return v.size();
}

struct RankMemo {
  std::shared_mutex mutex;
  std::unordered_map<std::string, RankResult> entries;
};

RankMemo& rank_memo() {
  static RankMemo memo;
  return memo;
}

constexpr std::size_t kRankMemoLimit = 1 << 14;

std::string memo_key(const FieldTower& field, std::span<const FieldElement> elems) {
  std::string key = field.descriptor();
  for (const auto& e : elems) {
    key += '\x1f';
    for (const auto& c : e.components()) {
      key += to_string(c);
      key += '|';
    }
  }
  return key;
}

}  // namespace

void CoordinateEchelon::reduce(std::vector<FieldElement>& v, std::vector<FieldElement>& combo) const {
  const FieldTower& k = *field_;
  for (const auto& row : rows_) {
    const FieldElement c = v[row.pivot];
    if (c.is_zero()) continue;
    for (std::size_t i = row.pivot; i < v.size(); ++i) {
      if (!row.v[i].is_zero()) v[i] = k.add(v[i], k.mul(c, row.v[i]));
    }
    for (std::size_t i = 0; i < row.combo.size(); ++i) {
      if (!row.combo[i].is_zero()) combo[i] = k.add(combo[i], k.mul(c, row.combo[i]));
    }
  }
}

std::optional<std::vector<FieldElement>> CoordinateEchelon::insert(SquareCoordinates coords, bool keep_dependent) {
  const FieldTower& k = *field_;
  const std::size_t index = inserted_++;
  std::vector<FieldElement> v = std::move(coords.entries);
  std::vector<FieldElement> combo(index + 1, k.zero());
  combo[index] = k.one();
  reduce(v, combo);
  const std::size_t p = first_nonzero(v);
  if (p == v.size()) {
    if (!keep_dependent) --inserted_;
    return combo;
  }
  const FieldElement inv = k.inverse(v[p]);
  if (!inv.is_one()) {
    for (auto& x : v) {
      if (!x.is_zero()) x = k.mul(x, inv);
    }
    for (auto& x : combo) {
      if (!x.is_zero()) x = k.mul(x, inv);
    }
  }
  rows_.push_back({p, std::move(v), std::move(combo)});
  return std::nullopt;
}

std::optional<std::vector<FieldElement>> CoordinateEchelon::solve(SquareCoordinates coords) const {
  const FieldTower& k = *field_;
  std::vector<FieldElement> v = std::move(coords.entries);
  std::vector<FieldElement> combo(inserted_, k.zero());
  reduce(v, combo);
  if (first_nonzero(v) != v.size()) return std::nullopt;
  // v - sum c_r row_r = 0 was accumulated into combo with the sign-free
  // char-2 convention, so combo already expresses v.
  return combo;
}

RankResult rank_over_squares(const Field& field, std::span<const FieldElement> elems) {
  for (const auto& e : elems) {
    if (!field->contains(e)) throw Error(ErrorCode::FieldMismatch, "element outside the field");
  }
  RankMemo& memo = rank_memo();
  const std::string key = memo_key(*field, elems);
  {
    std::shared_lock lock(memo.mutex);
    if (auto it = memo.entries.find(key); it != memo.entries.end()) return it->second;
  }
  RankResult result;
  CoordinateEchelon ech(field);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    auto rel = ech.insert(field->expand(elems[i]));
    if (!rel) {
      result.pivots.push_back(i);
    } else {
      rel->resize(elems.size(), field->zero());
      result.kernel.push_back(std::move(*rel));
    }
  }
  result.rank = result.pivots.size();
  {
    std::unique_lock lock(memo.mutex);
    if (memo.entries.size() >= kRankMemoLimit) memo.entries.clear();
    memo.entries.insert_or_assign(key, result);
  }
  return result;
}

void clear_rank_memo() {
  RankMemo& memo = rank_memo();
  std::unique_lock lock(memo.mutex);
  memo.entries.clear();
}

SquareSubspace SquareSubspace::span(Field field, std::vector<FieldElement> generators) {
  SquareSubspace s(field);
  for (const auto& g : generators) {
    if (!field->contains(g)) throw Error(ErrorCode::FieldMismatch, "generator outside the field");
  }
  s.generators_ = std::move(generators);
  // The echelon only keeps independent generators so that relations are
  // expressed over the basis.
  for (const auto& g : s.generators_) {
    SquareCoordinates c = field->expand(g);
    if (s.echelon_.insert(c, false)) continue;
    s.basis_.push_back(g);
    s.basis_coords_.push_back(std::move(c));
  }
  return s;
}

bool SquareSubspace::contains(const FieldElement& y) const {
  if (y.is_zero()) return true;
  return coefficients(y).has_value();
}

std::optional<std::vector<FieldElement>> SquareSubspace::coefficients(const FieldElement& y) const {
  if (!field_->contains(y)) throw Error(ErrorCode::FieldMismatch, "element outside the subspace's field");
  return echelon_.solve(field_->expand(y));
}

bool SquareSubspace::is_subspace_of(const SquareSubspace& other) const {
  check_same_field(*field_, *other.field_);
  for (const auto& b : basis_) {
    if (!other.contains(b)) return false;
  }
  return true;
}

SquareSubspace SquareSubspace::scaled(const FieldElement& a) const {
  std::vector<FieldElement> gens;
  gens.reserve(basis_.size());
  for (const auto& b : basis_) gens.push_back(field_->mul(a, b));
  return span(field_, std::move(gens));
}

SquareSubspace SquareSubspace::intersect(const SquareSubspace& other) const {
  check_same_field(*field_, *other.field_);
  // Relations between the two juxtaposed bases give the common elements.
  CoordinateEchelon ech(field_);
  for (const auto& c : basis_coords_) ech.insert(c);
  std::vector<FieldElement> common;
  for (std::size_t k = 0; k < other.basis_.size(); ++k) {
    auto rel = ech.insert(other.basis_coords_[k]);
    if (!rel) continue;
    FieldElement x = field_->zero();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if ((*rel)[i].is_zero()) continue;
      x = field_->add(x, field_->mul(field_->square((*rel)[i]), basis_[i]));
    }
    common.push_back(std::move(x));
  }
  return span(field_, std::move(common));
}

SquareSubspace SquareSubspace::sum(const SquareSubspace& other) const {
  check_same_field(*field_, *other.field_);
  std::vector<FieldElement> gens = basis_;
  gens.insert(gens.end(), other.basis_.begin(), other.basis_.end());
  return span(field_, std::move(gens));
}

}  // namespace qlform
