/// @file splitting.hpp
/// Function fields of quasilinear quadrics, the Knebusch splitting tower
/// and the bound verifiers built on top of them.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qlform/form.hpp"

namespace qlform {

/// F(p) = F(s_2..s_{n-1})(sqrt theta), theta = a0^-1 (a1 + sum_i a_i s_i^2).
struct FunctionFieldPresentation {
  QuasilinearForm source;
  std::vector<std::string> fresh_vars;
  FieldElement theta;
  Field result;
};

/// p anisotropic of dimension at least 2. Fresh variables are named
/// s{r}_2 .. s{r}_{n-1} with r one more than the height of p's field.
/// Throws DimTooSmall, SplitForm, RequiresAnisotropic, CapExceeded.
FunctionFieldPresentation function_field(const QuasilinearForm& p);

struct TowerLevel {
  Field field;             // F_r
  QuasilinearForm kernel;  // q_r
  std::size_t j = 0;       // i0(q over F_r)
  std::size_t i = 0;       // j_r - j_{r-1}; 0 at r = 0
  std::size_t lndeg = 0;
  std::size_t d = 0;       // divisibility index of q_r
};

struct TowerReport {
  std::vector<TowerLevel> levels;
  std::size_t height() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
};

/// Iterates F_r = F_{r-1}(q_{r-1}) until the kernel has dimension <= 1.
TowerReport knebusch_tower(const QuasilinearForm& q);

struct HigherInvariants {
  std::vector<std::size_t> i;  // i_1 .. i_h
  std::vector<std::size_t> d;  // d_0 .. d_h
  std::size_t s = 0;           // 2-adic order of dim(q_1) = dim(q_an) - i_1
};
/// Throws SplitInput for a tower of height 0.
HigherInvariants higher_invariants(const TowerReport& report);

/// i0 of q over F(p).
std::size_t isotropy_over_function_field(const QuasilinearForm& q, const QuasilinearForm& p);

/// A single checked inequality with the values on both sides.
struct VerdictEntry {
  bool pass = true;
  bool vacuous = false;
  /// Equality holds; only set for the inequalities kmt, main, refined, d1.
  bool tight = false;
  std::vector<std::pair<std::string, long long>> values;
  std::string relation;
};

struct BoundQuantities {
  std::size_t i0_qFp = 0;
  std::size_t i1_p = 0;
  std::size_t d1_p = 0;
  std::size_t s = 0;
  std::size_t lndeg_p = 0;
  std::size_t eps = 0;
  std::size_t dim_p = 0;
  std::size_t dim_q = 0;
};

struct BoundReport {
  QuasilinearForm p;
  QuasilinearForm q;
  BoundQuantities quantities;
  /// Fixed order: kmt, main, refined, d1, then whichever of p1_subform,
  /// near_maximal, ndeg_drop were requested.
  std::vector<std::pair<std::string, VerdictEntry>> verdicts;
  /// Similarity factor placing p_1 inside (q over F(p))_an, when found.
  std::optional<FieldElement> p1_witness;
  Field function_field;
  /// i0 attains the main bound max(dim q - dim p, 2^d1).
  bool main_tight = false;

  bool all_pass() const;
  const VerdictEntry* verdict(const std::string& name) const;
};

/// Quantities plus the kmt, main, refined and d1 verdicts.
BoundReport verify_bounds(const QuasilinearForm& p, const QuasilinearForm& q);
/// Throws NotIsotropic when q stays anisotropic over F(p).
VerdictEntry verify_p1_subform(const QuasilinearForm& p, const QuasilinearForm& q,
                               std::optional<FieldElement>* witness = nullptr);
VerdictEntry verify_near_maximal(const QuasilinearForm& p, const QuasilinearForm& q);
VerdictEntry verify_ndeg_drop(const QuasilinearForm& q);
/// Every verdict, sharing one F(p) presentation; p1_subform is a vacuous
/// pass when q stays anisotropic over F(p). ndeg_drop runs on p.
BoundReport verify_all(const QuasilinearForm& p, const QuasilinearForm& q);

Json verdict_json(const VerdictEntry& v);
Json bound_report_json(const BoundReport& r);
Json tower_report_json(const TowerReport& t);

}  // namespace qlform
