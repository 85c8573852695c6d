/// @file form.hpp
/// Quasilinear (diagonal) quadratic forms <a1,...,an> in characteristic 2
/// and their invariants: isotropy index, anisotropic part, value sets,
/// similarity factors, norm form and divisibility by quasi-Pfister forms.
#pragma once

#include <optional>
#include <vector>

#include "qlform/serialize.hpp"
#include "qlform/square_subspace.hpp"

namespace qlform {

class QuasilinearForm {
 public:
  /// Coefficients must lie in `field`; zero coefficients are allowed.
  QuasilinearForm(Field field, std::vector<FieldElement> coeffs);

  const Field& field() const noexcept { return field_; }
  const std::vector<FieldElement>& coeffs() const noexcept { return coeffs_; }
  std::size_t dim() const noexcept { return coeffs_.size(); }
  /// Every coefficient is zero (includes the empty form).
  bool is_zero_form() const noexcept;
  /// D(q), the K^2-span of the coefficients.
  SquareSubspace values() const;

 private:
  Field field_;
  std::vector<FieldElement> coeffs_;
};

/// <<a1,...,an>> = <1,a1> (x) ... (x) <1,an>; the last slot varies fastest.
struct QuasiPfister {
  std::vector<FieldElement> slots;
  QuasilinearForm expanded;

  static QuasiPfister make(const Field& field, std::vector<FieldElement> slots);
  std::size_t fold() const noexcept { return slots.size(); }
};

std::size_t isotropy_index(const QuasilinearForm& q);
bool is_anisotropic(const QuasilinearForm& q);
/// The coefficients at the pivot positions of the rank computation, i.e.
/// the earliest K^2-independent coefficients.
QuasilinearForm anisotropic_part(const QuasilinearForm& q);
bool represents(const QuasilinearForm& q, const FieldElement& c);
/// p_an is a subform of q_an, decided by D(p) within D(q).
bool subform_up_to_iso(const QuasilinearForm& p, const QuasilinearForm& q);

/// G(q_an) = { a : a D(q) = D(q) } union {0}. Throws ZeroForm.
SquareSubspace similarity_field(const QuasilinearForm& q);

struct Divisibility {
  std::size_t index = 0;
  /// Anisotropic quasi-Pfister form with D equal to G(q_an).
  QuasiPfister witness;
};
/// Largest s such that q_an is divisible by an s-fold quasi-Pfister form.
Divisibility divisibility_index(const QuasilinearForm& q);
/// Both arguments anisotropic; true iff D(pi) lies in G(q).
bool is_divisible_by(const QuasilinearForm& q, const QuasiPfister& pi);

struct NormForm {
  QuasiPfister form;
  std::size_t lndeg = 0;
};
NormForm norm_form(const QuasilinearForm& q);

/// The smallest K^2-subspace containing every product of a subset of
/// `generators`; a subfield when the generators square into K^2.
SquareSubspace generated_subfield(const Field& field, const std::vector<FieldElement>& generators);

QuasilinearForm orth_sum(const QuasilinearForm& p, const QuasilinearForm& q);
QuasilinearForm tensor(const QuasilinearForm& p, const QuasilinearForm& q);
QuasilinearForm scale(const FieldElement& a, const QuasilinearForm& q);

/// Nonzero a with a*p a subform of q_an, if one exists. p anisotropic.
std::optional<FieldElement> similar_subform_witness(const QuasilinearForm& p, const QuasilinearForm& q);

/// Whether q is divisible by the norm form of p, computed both through
/// G(q) and through similarity of (q (x) p)_an with q; a disagreement
/// raises InternalInconsistency.
bool check_normform_divisibility(const QuasilinearForm& q, const QuasilinearForm& p);

/// Subform q' of q (over q's field) with i0(q'_K) = i0(q_K) - i, obtained
/// by repeatedly dropping the last coefficient of the first relation.
QuasilinearForm reduce_isotropy_subform(const QuasilinearForm& q, const Field& extension, std::size_t i);

struct QuadraticExtDecomposition {
  Field extension;  // K(sqrt a)
  QuasilinearForm r;
  std::vector<FieldElement> b;
};
/// q = r + a<b1..bn> with r a subsequence of q such that r over K(sqrt a)
/// is the anisotropic part of q there. Throws AIsSquare, RequiresAnisotropic.
QuadraticExtDecomposition quadratic_ext_decomposition(const QuasilinearForm& q, const FieldElement& a);

/// Same coefficients over an extension field. Throws NotAnExtension.
QuasilinearForm extend_scalars(const QuasilinearForm& q, const Field& extension);

Json form_json(const QuasilinearForm& q);
/// Field presentation is re-parsed unless `field` is supplied and matches.
QuasilinearForm parse_form_json(const Json& j, TowerCaps caps = {});

}  // namespace qlform
