#include "qlform/form.hpp"

#include <bit>

#include "qlform/error.hpp"

namespace qlform {

namespace {

void require_anisotropic(const QuasilinearForm& q, const char* what) {
  if (!is_anisotropic(q)) throw Error(ErrorCode::RequiresAnisotropic, std::string(what) + " must be anisotropic");
}

void require_same_field(const QuasilinearForm& p, const QuasilinearForm& q) {
  check_same_field(*p.field(), *q.field());
}

// log2 of a dimension that must be a power of two.
std::size_t exact_log2(std::size_t n, const char* what) {
  if (!std::has_single_bit(n)) {
    throw Error(ErrorCode::InternalInconsistency, std::string(what) + " has dimension " + std::to_string(n) +
                                                      ", not a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(n));
}

// Greedy generators: keep each candidate outside the subfield built so far.
std::vector<FieldElement> subfield_generators(const Field& field, const std::vector<FieldElement>& candidates) {
  std::vector<FieldElement> kept;
  SquareSubspace current = SquareSubspace::span(field, {field->one()});
  for (const auto& c : candidates) {
    if (c.is_zero() || current.contains(c)) continue;
    kept.push_back(c);
    current = generated_subfield(field, kept);
  }
  return kept;
}

}  // namespace

QuasilinearForm::QuasilinearForm(Field field, std::vector<FieldElement> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!field_->contains(c)) throw Error(ErrorCode::FieldMismatch, "coefficient outside the form's field");
  }
}

bool QuasilinearForm::is_zero_form() const noexcept {
  for (const auto& c : coeffs_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

SquareSubspace QuasilinearForm::values() const { return SquareSubspace::span(field_, coeffs_); }

QuasiPfister QuasiPfister::make(const Field& field, std::vector<FieldElement> slots) {
  std::vector<FieldElement> coeffs{field->one()};
  for (const auto& a : slots) {
    std::vector<FieldElement> next;
    next.reserve(coeffs.size() * 2);
    for (const auto& c : coeffs) {
      next.push_back(c);
      next.push_back(field->mul(c, a));
    }
    coeffs = std::move(next);
  }
  return QuasiPfister{std::move(slots), QuasilinearForm(field, std::move(coeffs))};
}

std::size_t isotropy_index(const QuasilinearForm& q) {
  return q.dim() - rank_over_squares(q.field(), q.coeffs()).rank;
}

bool is_anisotropic(const QuasilinearForm& q) { return isotropy_index(q) == 0; }

QuasilinearForm anisotropic_part(const QuasilinearForm& q) {
  const RankResult r = rank_over_squares(q.field(), q.coeffs());
  if (r.rank == q.dim()) return q;
  std::vector<FieldElement> kept;
  kept.reserve(r.rank);
  for (std::size_t i : r.pivots) kept.push_back(q.coeffs()[i]);
  return QuasilinearForm(q.field(), std::move(kept));
}

bool represents(const QuasilinearForm& q, const FieldElement& c) {
  if (c.is_zero()) return true;
  return q.values().contains(c);
}

bool subform_up_to_iso(const QuasilinearForm& p, const QuasilinearForm& q) {
  require_same_field(p, q);
  const SquareSubspace dq = q.values();
  for (const auto& c : p.coeffs()) {
    if (!c.is_zero() && !dq.contains(c)) return false;
  }
  return true;
}

SquareSubspace similarity_field(const QuasilinearForm& q) {
  const QuasilinearForm an = anisotropic_part(q);
  if (an.dim() == 0) throw Error(ErrorCode::ZeroForm, "similarity factors of the zero form");
  const Field& k = q.field();
  const SquareSubspace d = an.values();
  // a D = D for a basis of D suffices: a b_i in D for all i gives a D in D
  // by K^2-linearity, and equality follows from finite dimension.
  SquareSubspace g = d.scaled(k->inverse(an.coeffs()[0]));
  for (std::size_t i = 1; i < an.dim() && g.dim() > 1; ++i) {
    g = g.intersect(d.scaled(k->inverse(an.coeffs()[i])));
  }
  // Put 1 first so greedy generator selection starts from the squares.
  std::vector<FieldElement> gens{k->one()};
  gens.insert(gens.end(), g.basis().begin(), g.basis().end());
  return SquareSubspace::span(k, std::move(gens));
}

SquareSubspace generated_subfield(const Field& field, const std::vector<FieldElement>& generators) {
  std::vector<FieldElement> products{field->one()};
  for (const auto& g : generators) {
    const std::size_t n = products.size();
    for (std::size_t i = 0; i < n; ++i) products.push_back(field->mul(products[i], g));
  }
  return SquareSubspace::span(field, std::move(products));
}

Divisibility divisibility_index(const QuasilinearForm& q) {
  // q_an is divisible by an anisotropic quasi-Pfister pi iff D(pi) lies in
  // G(q_an), and G(q_an) is itself D of an anisotropic quasi-Pfister form
  // because it is a subfield containing K^2. So the largest divisor is the
  // one whose value set is G(q_an).
  const SquareSubspace g = similarity_field(q);
  Divisibility out{exact_log2(g.dim(), "similarity field"),
                   QuasiPfister::make(q.field(), subfield_generators(q.field(), g.basis()))};
  if (out.witness.fold() != out.index) {
    throw Error(ErrorCode::InternalInconsistency, "similarity field generators disagree with its dimension");
  }
  return out;
}

bool is_divisible_by(const QuasilinearForm& q, const QuasiPfister& pi) {
  require_same_field(q, pi.expanded);
  require_anisotropic(q, "form");
  require_anisotropic(pi.expanded, "quasi-Pfister form");
  return pi.expanded.values().is_subspace_of(similarity_field(q));
}

NormForm norm_form(const QuasilinearForm& q) {
  const Field& k = q.field();
  std::size_t first = q.dim();
  for (std::size_t i = 0; i < q.dim(); ++i) {
    if (!q.coeffs()[i].is_zero()) {
      first = i;
      break;
    }
  }
  if (first == q.dim()) throw Error(ErrorCode::ZeroForm, "norm form of the zero form");
  const FieldElement a0_inv = k->inverse(q.coeffs()[first]);
  std::vector<FieldElement> ratios;
  for (std::size_t i = first + 1; i < q.dim(); ++i) {
    if (!q.coeffs()[i].is_zero()) ratios.push_back(k->mul(q.coeffs()[i], a0_inv));
  }
  std::vector<FieldElement> kept = subfield_generators(k, ratios);
  const std::size_t lndeg = kept.size();
  return NormForm{QuasiPfister::make(k, std::move(kept)), lndeg};
}

QuasilinearForm orth_sum(const QuasilinearForm& p, const QuasilinearForm& q) {
  require_same_field(p, q);
  std::vector<FieldElement> c = p.coeffs();
  c.insert(c.end(), q.coeffs().begin(), q.coeffs().end());
  return QuasilinearForm(p.field(), std::move(c));
}

QuasilinearForm tensor(const QuasilinearForm& p, const QuasilinearForm& q) {
  require_same_field(p, q);
  std::vector<FieldElement> c;
  c.reserve(p.dim() * q.dim());
  for (const auto& a : p.coeffs()) {
    for (const auto& b : q.coeffs()) c.push_back(p.field()->mul(a, b));
  }
  return QuasilinearForm(p.field(), std::move(c));
}

QuasilinearForm scale(const FieldElement& a, const QuasilinearForm& q) {
  std::vector<FieldElement> c;
  c.reserve(q.dim());
  for (const auto& b : q.coeffs()) c.push_back(q.field()->mul(a, b));
  return QuasilinearForm(q.field(), std::move(c));
}

std::optional<FieldElement> similar_subform_witness(const QuasilinearForm& p, const QuasilinearForm& q) {
  require_same_field(p, q);
  if (p.dim() == 0 || p.is_zero_form()) throw Error(ErrorCode::ZeroForm, "witness for the zero form");
  require_anisotropic(p, "form to embed");
  const Field& k = p.field();
  const SquareSubspace dq = q.values();
  if (dq.dim() == 0) return std::nullopt;
  // a D(p) in D(q) iff a b in D(q) for a basis b of D(p).
  SquareSubspace w = dq.scaled(k->inverse(p.coeffs()[0]));
  for (std::size_t i = 1; i < p.dim() && w.dim() > 0; ++i) {
    w = dq.scaled(k->inverse(p.coeffs()[i])).intersect(w);
  }
  if (w.dim() == 0) return std::nullopt;
  return w.basis().front();
}

bool check_normform_divisibility(const QuasilinearForm& q, const QuasilinearForm& p) {
  require_same_field(p, q);
  if (q.is_zero_form() || p.is_zero_form()) throw Error(ErrorCode::ZeroForm, "forms must be nonzero");
  require_anisotropic(q, "q");
  require_anisotropic(p, "p");
  const bool via_similarity_field = is_divisible_by(q, norm_form(p).form);
  const QuasilinearForm tp = anisotropic_part(tensor(q, p));
  const bool via_tensor = tp.dim() == q.dim() && similar_subform_witness(q, tp).has_value();
  if (via_similarity_field != via_tensor) {
    throw Error(ErrorCode::InternalInconsistency, "norm-form divisibility routes disagree");
  }
  return via_tensor;
}

QuasilinearForm reduce_isotropy_subform(const QuasilinearForm& q, const Field& extension, std::size_t i) {
  QuasilinearForm current = q;
  const std::size_t available = isotropy_index(extend_scalars(q, extension));
  if (i > available) {
    throw Error(ErrorCode::IndexOutOfRange,
                "requested " + std::to_string(i) + " but i0 over the extension is " + std::to_string(available));
  }
  for (std::size_t step = 0; step < i; ++step) {
    const QuasilinearForm ext = extend_scalars(current, extension);
    const RankResult r = rank_over_squares(extension, ext.coeffs());
    const auto& rel = r.kernel.front();
    std::size_t drop = rel.size();
    for (std::size_t k = rel.size(); k-- > 0;) {
      if (!rel[k].is_zero()) {
        drop = k;
        break;
      }
    }
    std::vector<FieldElement> c = current.coeffs();
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(drop));
    current = QuasilinearForm(q.field(), std::move(c));
  }
  return current;
}

QuadraticExtDecomposition quadratic_ext_decomposition(const QuasilinearForm& q, const FieldElement& a) {
  const Field& k = q.field();
  require_anisotropic(q, "form");
  Field ext;
  try {
    ext = k->adjoin_sqrt(a);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ThetaIsSquare) throw Error(ErrorCode::AIsSquare, "a is a square in the base field");
    throw;
  }
  const RankResult over_ext = rank_over_squares(ext, q.coeffs());
  std::vector<FieldElement> r;
  std::vector<FieldElement> dropped;
  std::size_t next_pivot = 0;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    if (next_pivot < over_ext.pivots.size() && over_ext.pivots[next_pivot] == i) {
      r.push_back(q.coeffs()[i]);
      ++next_pivot;
    } else {
      dropped.push_back(q.coeffs()[i]);
    }
  }
  // D(q over K(sqrt a)) = D(q) + a D(q): each dropped c splits as d0 + a d1.
  std::vector<FieldElement> gens = r;
  for (const auto& x : r) gens.push_back(k->mul(a, x));
  const SquareSubspace combined = SquareSubspace::span(k, gens);
  if (combined.dim() != gens.size()) {
    throw Error(ErrorCode::InternalInconsistency, "r and a*r are not independent");
  }
  std::vector<FieldElement> b;
  for (const auto& c : dropped) {
    auto lambda = combined.coefficients(c);
    if (!lambda) throw Error(ErrorCode::InternalInconsistency, "dropped coefficient not in D(r) + aD(r)");
    FieldElement d1 = k->zero();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const FieldElement& l = (*lambda)[r.size() + i];
      if (!l.is_zero()) d1 = k->add(d1, k->mul(k->square(l), r[i]));
    }
    b.push_back(std::move(d1));
  }
  QuasilinearForm rform(k, std::move(r));
  std::vector<FieldElement> ab;
  for (const auto& x : b) ab.push_back(k->mul(a, x));
  const QuasilinearForm rebuilt = orth_sum(rform, QuasilinearForm(k, std::move(ab)));
  if (!subform_up_to_iso(rebuilt, q) || !subform_up_to_iso(q, rebuilt)) {
    throw Error(ErrorCode::InternalInconsistency, "decomposition does not reproduce D(q)");
  }
  return QuadraticExtDecomposition{std::move(ext), std::move(rform), std::move(b)};
}

QuasilinearForm extend_scalars(const QuasilinearForm& q, const Field& extension) {
  if (extension->same_as(*q.field())) return q;
  if (!extension->is_extension_of(*q.field())) {
    throw Error(ErrorCode::NotAnExtension, "target field does not extend the form's field");
  }
  std::vector<FieldElement> c;
  c.reserve(q.dim());
  for (const auto& x : q.coeffs()) c.push_back(extension->embed(x));
  return QuasilinearForm(extension, std::move(c));
}

Json form_json(const QuasilinearForm& q) {
  Json j = Json::object();
  j["field"] = field_descriptor_json(*q.field());
  Json coeffs = Json::array();
  for (const auto& c : q.coeffs()) coeffs.push_back(element_expr_json(*q.field(), c));
  j["coeffs"] = std::move(coeffs);
  return j;
}

QuasilinearForm parse_form_json(const Json& j, TowerCaps caps) {
  require_known_keys(j, {"field", "coeffs"}, "form");
  if (!j.contains("field") || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw Error(ErrorCode::ParseError, "form needs field and coeffs");
  }
  Field f = parse_field_descriptor(j["field"], caps);
  std::vector<FieldElement> coeffs;
  for (const auto& c : j["coeffs"]) coeffs.push_back(parse_element_expr(*f, c));
  return QuasilinearForm(std::move(f), std::move(coeffs));
}

}  // namespace qlform
