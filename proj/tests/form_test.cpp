#include <gtest/gtest.h>

#include <bit>

#include "qlform/error.hpp"
#include "test_support.hpp"

using namespace qlform;
using qlform::testing::base;
using qlform::testing::code_of;
using qlform::testing::el;
using qlform::testing::form;
using qlform::testing::Gen;
using qlform::testing::pfister;
using qlform::testing::same_values;

namespace {

Field f2() { return base({"t1", "t2"}); }
Field f3() { return base({"t1", "t2", "t3"}); }

// a*D(q) within D(q), tested coefficient by coefficient.
bool scales_into(const FieldElement& a, const QuasilinearForm& q) {
  const Field& f = q.field();
  for (const auto& c : q.coeffs()) {
    if (!represents(q, f->mul(a, c))) return false;
  }
  return true;
}

QuasilinearForm random_form(Gen& gen, const Field& f, std::size_t max_dim) {
  std::vector<FieldElement> c;
  const std::size_t n = 1 + gen.below(max_dim);
  for (std::size_t i = 0; i < n; ++i) c.push_back(gen.element(f, 2, 1));
  return QuasilinearForm(f, std::move(c));
}

QuasilinearForm random_anisotropic(Gen& gen, const Field& f, std::size_t max_dim) {
  for (;;) {
    QuasilinearForm q = anisotropic_part(random_form(gen, f, max_dim));
    if (!q.is_zero_form()) return q;
  }
}

}  // namespace

TEST(IsotropyIndex, Examples) {
  const Field k = f2();
  EXPECT_EQ(isotropy_index(form(k, {"0"})), 1u);
  EXPECT_EQ(isotropy_index(form(k, {"1", "t1", "t2", "t1+t2"})), 1u);
  EXPECT_EQ(isotropy_index(form(k, {"0", "0", "0"})), 3u);
  EXPECT_EQ(isotropy_index(QuasilinearForm(k, {})), 0u);

  // Over F(<1,t1,t2>) = F2(t1,t2,s)(sqrt(t1 + t2 s^2)), the relation
  // (sqrt theta)^2 * 1 + 1^2 * t1 + s^2 * t2 = 0 makes the form isotropic.
  const Field k3 = base({"t1", "t2", "s"});
  const Field fp = k3->adjoin_sqrt(el(k3, "t1+t2*s^2"));
  const QuasilinearForm q = extend_scalars(form(k3, {"1", "t1", "t2"}), fp);
  const FieldElement r = fp->root(1);
  const FieldElement witness =
      fp->add(fp->add(fp->square(r), q.coeffs()[1]), fp->mul(fp->square(fp->variable("s")), q.coeffs()[2]));
  EXPECT_TRUE(witness.is_zero());
  EXPECT_EQ(isotropy_index(q), 1u);
}

TEST(AnisotropicPart, Examples) {
  const Field k = f2();
  EXPECT_EQ(anisotropic_part(form(k, {"1", "t1", "t2", "t1+t2"})).coeffs(), form(k, {"1", "t1", "t2"}).coeffs());
  const QuasilinearForm an = form(k, {"t1", "t2", "t1*t2"});
  EXPECT_EQ(anisotropic_part(an).coeffs(), an.coeffs());
  EXPECT_EQ(anisotropic_part(form(k, {"t1", "t1", "t1"})).coeffs(), form(k, {"t1"}).coeffs());
  EXPECT_EQ(anisotropic_part(form(k, {"0", "t1", "0"})).coeffs(), form(k, {"t1"}).coeffs());
}

TEST(Represents, Examples) {
  const Field k = f2();
  const QuasilinearForm q = form(k, {"1", "t1"});
  EXPECT_TRUE(represents(q, el(k, "1+t1")));
  EXPECT_FALSE(represents(q, el(k, "t2")));
  EXPECT_TRUE(represents(q, el(k, "t1^3")));
  EXPECT_TRUE(represents(q, k->zero()));
  EXPECT_TRUE(represents(q, el(k, "(t1^2+t1)/(t2^2+1)")));
}

TEST(SubformUpToIso, Examples) {
  const Field k = f2();
  const QuasilinearForm q = form(k, {"1", "t1"});
  EXPECT_TRUE(subform_up_to_iso(form(k, {"1+t1"}), q));
  EXPECT_FALSE(subform_up_to_iso(form(k, {"t2"}), q));
  EXPECT_TRUE(subform_up_to_iso(q, q));
  EXPECT_EQ(code_of([&] { subform_up_to_iso(form(f3(), {"1"}), q); }), ErrorCode::FieldMismatch);
}

TEST(SimilarityField, Examples) {
  const Field k = f2();
  const QuasilinearForm pi = pfister(k, {"t1", "t2"}).expanded;
  const SquareSubspace g = similarity_field(pi);
  EXPECT_EQ(g.dim(), 4u);
  EXPECT_TRUE(g.is_subspace_of(pi.values()) && pi.values().is_subspace_of(g));

  // Each candidate outside the squares fails a*D within D by an explicit membership test.
  const QuasilinearForm q = form(k, {"1", "t1", "t2"});
  EXPECT_EQ(similarity_field(q).dim(), 1u);
  for (const char* a : {"t1", "t2", "t1+t2", "t1*t2", "1+t1", "t2/t1"}) {
    EXPECT_FALSE(scales_into(el(k, a), q)) << a;
  }

  const QuasilinearForm r = form(k, {"t1", "t2"});
  const SquareSubspace gr = similarity_field(r);
  EXPECT_EQ(gr.dim(), 2u);
  EXPECT_TRUE(gr.contains(k->one()));
  EXPECT_TRUE(gr.contains(el(k, "t2/t1")));
  EXPECT_TRUE(scales_into(el(k, "t2/t1"), r));

  EXPECT_EQ(code_of([&] { similarity_field(form(k, {"0", "0"})); }), ErrorCode::ZeroForm);
}

TEST(DivisibilityIndex, Examples) {
  const Field k = f2();
  EXPECT_EQ(divisibility_index(pfister(k, {"t1", "t2"}).expanded).index, 2u);
  EXPECT_EQ(divisibility_index(form(k, {"1", "t1", "t2"})).index, 0u);

  const QuasilinearForm r = form(k, {"t1", "t2"});
  const Divisibility d = divisibility_index(r);
  EXPECT_EQ(d.index, 1u);
  // t1 * <<t2/t1>> = <t1, t2>; compare by D-sets.
  EXPECT_TRUE(same_values(d.witness.expanded, pfister(k, {"t2/t1"}).expanded));
  EXPECT_TRUE(same_values(scale(el(k, "t1"), pfister(k, {"t2/t1"}).expanded), r));
  EXPECT_EQ(code_of([&] { divisibility_index(QuasilinearForm(k, {})); }), ErrorCode::ZeroForm);
}

TEST(IsDivisibleBy, Examples) {
  const Field k = f2();
  EXPECT_TRUE(is_divisible_by(pfister(k, {"t1", "t2"}).expanded, pfister(k, {"t1"})));
  EXPECT_FALSE(is_divisible_by(form(k, {"1", "t1", "t2"}), pfister(k, {"t1"})));
  EXPECT_TRUE(is_divisible_by(form(k, {"t1", "t2"}), pfister(k, {"t2/t1"})));
  EXPECT_EQ(code_of([&] { is_divisible_by(form(k, {"1", "1"}), pfister(k, {"t1"})); }),
            ErrorCode::RequiresAnisotropic);
  EXPECT_EQ(code_of([&] { is_divisible_by(form(k, {"1"}), pfister(k, {"t1", "t1"})); }),
            ErrorCode::RequiresAnisotropic);
}

TEST(NormForm, Examples) {
  const Field k = f2();
  const NormForm a = norm_form(form(k, {"t1", "t2"}));
  EXPECT_EQ(a.lndeg, 1u);
  EXPECT_TRUE(same_values(a.form.expanded, pfister(k, {"t2/t1"}).expanded));

  const NormForm b = norm_form(form(k, {"1", "t1", "t2"}));
  EXPECT_EQ(b.lndeg, 2u);
  EXPECT_TRUE(same_values(b.form.expanded, pfister(k, {"t1", "t2"}).expanded));

  // The third ratio t1 t2 (1+t1)^2 already lies in F^2(t1, t2).
  const QuasilinearForm c = form(k, {"1", "t1", "t2", "t1*t2*(1+t1)^2"});
  EXPECT_TRUE(generated_subfield(k, {el(k, "t1"), el(k, "t2")}).contains(c.coeffs()[3]));
  const NormForm n = norm_form(c);
  EXPECT_EQ(n.lndeg, 2u);
  EXPECT_TRUE(same_values(n.form.expanded, pfister(k, {"t1", "t2"}).expanded));

  EXPECT_EQ(code_of([&] { norm_form(form(k, {"0"})); }), ErrorCode::ZeroForm);
}

TEST(FormAlgebra, Examples) {
  const Field k = f2();
  const QuasilinearForm q = form(k, {"t1", "t2", "1+t1*t2"});
  EXPECT_EQ(tensor(form(k, {"1"}), q).coeffs(), q.coeffs());
  EXPECT_EQ(tensor(form(k, {"1", "t1"}), form(k, {"1", "t2"})).coeffs(), pfister(k, {"t1", "t2"}).expanded.coeffs());
  EXPECT_EQ(pfister(k, {"t1", "t2"}).expanded.coeffs(), form(k, {"1", "t2", "t1", "t1*t2"}).coeffs());
  EXPECT_EQ(isotropy_index(orth_sum(q, q)), q.dim());
  EXPECT_EQ(orth_sum(q, form(k, {"1"})).dim(), 4u);
  EXPECT_EQ(tensor(q, q).dim(), 9u);
  EXPECT_EQ(scale(el(k, "t1"), form(k, {"1", "t2"})).coeffs(), form(k, {"t1", "t1*t2"}).coeffs());
  EXPECT_EQ(code_of([&] { orth_sum(q, form(f3(), {"1"})); }), ErrorCode::FieldMismatch);
  EXPECT_EQ(code_of([&] { tensor(q, form(f3(), {"1"})); }), ErrorCode::FieldMismatch);
}

TEST(CheckNormformDivisibility, Examples) {
  const Field k = f2();
  EXPECT_TRUE(check_normform_divisibility(pfister(k, {"t1", "t2"}).expanded, form(k, {"1", "t1"})));
  EXPECT_FALSE(check_normform_divisibility(form(k, {"1", "t1", "t2"}), form(k, {"1", "t1"})));
  EXPECT_TRUE(check_normform_divisibility(form(k, {"1"}), form(k, {"1"})));
}

TEST(SimilarSubformWitness, Examples) {
  const Field k = f3();
  const QuasilinearForm q = form(k, {"t1", "t2", "t3"});
  const auto w = similar_subform_witness(form(k, {"1", "t2/t1"}), q);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(subform_up_to_iso(scale(*w, form(k, {"1", "t2/t1"})), q));
  // t1 itself is a valid witness: t1 * 1 and t1 * t2/t1 lie in D(q).
  EXPECT_TRUE(represents(q, el(k, "t1")) && represents(q, el(k, "t2")));
  EXPECT_EQ(*w, el(k, "t1"));

  const QuasilinearForm an = form(k, {"1", "t1", "t1*t3"});
  const auto self = similar_subform_witness(an, an);
  ASSERT_TRUE(self.has_value());
  EXPECT_TRUE(subform_up_to_iso(scale(*self, an), an));

  EXPECT_FALSE(similar_subform_witness(form(k, {"1", "t3"}), form(k, {"1", "t1", "t2"})).has_value());
  EXPECT_EQ(code_of([&] { similar_subform_witness(form(k, {"1", "1"}), q); }), ErrorCode::RequiresAnisotropic);
}

TEST(ReduceIsotropySubform, Examples) {
  const Field k = f2();
  const QuasilinearForm q = form(k, {"1", "t1", "t2", "t1+t2"});
  EXPECT_EQ(reduce_isotropy_subform(q, k, 0).coeffs(), q.coeffs());
  EXPECT_EQ(reduce_isotropy_subform(q, k, 1).coeffs(), form(k, {"1", "t1", "t2"}).coeffs());
  EXPECT_EQ(code_of([&] { reduce_isotropy_subform(q, k, 2); }), ErrorCode::IndexOutOfRange);
}

TEST(ReduceIsotropySubform, RandomFullReduction) {
  Gen gen(7);
  const Field k = f3();
  for (int n = 0; n < 20; ++n) {
    const QuasilinearForm q = random_form(gen, k, 5);
    FieldElement a = gen.element(k, 2, 1);
    if (k->sqrt_if_square(a)) continue;
    const Field ext = k->adjoin_sqrt(a);
    const std::size_t i = isotropy_index(extend_scalars(q, ext));
    const QuasilinearForm r = reduce_isotropy_subform(q, ext, i);
    EXPECT_GE(r.dim() + i, q.dim());
    EXPECT_EQ(isotropy_index(extend_scalars(r, ext)), 0u);
    EXPECT_TRUE(subform_up_to_iso(r, q));
  }
}

TEST(QuadraticExtDecomposition, Examples) {
  const Field k = f2();
  const auto a = quadratic_ext_decomposition(form(k, {"1", "t1"}), el(k, "t1"));
  EXPECT_EQ(a.r.coeffs(), form(k, {"1"}).coeffs());
  ASSERT_EQ(a.b.size(), 1u);
  EXPECT_TRUE(a.b[0].is_one());

  const QuasilinearForm q = form(k, {"1", "t1", "t2"});
  const auto d = quadratic_ext_decomposition(q, el(k, "t1"));
  EXPECT_EQ(d.r.coeffs(), form(k, {"1", "t2"}).coeffs());
  ASSERT_EQ(d.b.size(), 1u);
  EXPECT_TRUE(d.b[0].is_one());
  const QuasilinearForm rebuilt = orth_sum(d.r, scale(el(k, "t1"), QuasilinearForm(k, d.b)));
  EXPECT_TRUE(same_values(rebuilt, q));
  EXPECT_TRUE(is_anisotropic(extend_scalars(d.r, d.extension)));

  const auto e = quadratic_ext_decomposition(form(k, {"1", "t1"}), el(k, "t2"));
  EXPECT_EQ(e.r.coeffs(), form(k, {"1", "t1"}).coeffs());
  EXPECT_TRUE(e.b.empty());

  EXPECT_EQ(code_of([&] { quadratic_ext_decomposition(q, el(k, "t1^2")); }), ErrorCode::AIsSquare);
  EXPECT_EQ(code_of([&] { quadratic_ext_decomposition(form(k, {"1", "1"}), el(k, "t1")); }),
            ErrorCode::RequiresAnisotropic);
}

TEST(ExtendScalars, Examples) {
  const Field k = f2();
  const QuasilinearForm q = form(k, {"1", "t1", "t2", "t1+t2*t1^2"});
  const Field wider = k->with_fresh_vars({"u"});
  EXPECT_EQ(isotropy_index(extend_scalars(q, wider)), isotropy_index(q));

  EXPECT_EQ(isotropy_index(extend_scalars(form(k, {"1", "t1"}), k->adjoin_sqrt(el(k, "t1")))), 1u);

  const QuasilinearForm r = form(k, {"t1", "t2"});
  EXPECT_EQ(divisibility_index(extend_scalars(r, wider)).index, divisibility_index(r).index);

  const Field over_t1 = k->adjoin_sqrt(el(k, "t1"));
  EXPECT_EQ(code_of([&] { extend_scalars(extend_scalars(q, over_t1), k->adjoin_sqrt(el(k, "t2"))); }),
            ErrorCode::NotAnExtension);
  EXPECT_EQ(code_of([&] { extend_scalars(q, base({"t1"})); }), ErrorCode::NotAnExtension);
  EXPECT_EQ(code_of([&] { extend_scalars(q, base({"t2", "t1"})); }), ErrorCode::NotAnExtension);
}

TEST(FormJson, RoundTrip) {
  const Field k = f2()->adjoin_sqrt(el(f2(), "t1"));
  const QuasilinearForm q(k, {k->one(), k->root(1), el(k, "t2/(t1+1)")});
  const QuasilinearForm back = parse_form_json(form_json(q));
  EXPECT_TRUE(back.field()->same_as(*k));
  EXPECT_EQ(back.coeffs(), q.coeffs());
  EXPECT_EQ(code_of([] { parse_form_json(Json::parse(R"({"coeffs": ["1"]})")); }), ErrorCode::ParseError);
}

TEST(FormProperties, Randomized) {
  Gen gen(2024);
  const Field k = f3();
  for (int n = 0; n < 40; ++n) {
    const QuasilinearForm q = random_form(gen, k, 5);
    const QuasilinearForm an = anisotropic_part(q);
    EXPECT_EQ(an.dim() + isotropy_index(q), q.dim());
    EXPECT_TRUE(is_anisotropic(an));
    EXPECT_TRUE(same_values(an, q));
    if (an.is_zero_form()) continue;

    const SquareSubspace g = similarity_field(q);
    EXPECT_TRUE(std::has_single_bit(g.dim()));
    EXPECT_TRUE(g.contains(k->one()));
    for (const auto& x : g.basis()) {
      EXPECT_TRUE(scales_into(x, an));
      for (const auto& y : g.basis()) EXPECT_TRUE(g.contains(k->mul(x, y)));
    }

    const Divisibility d = divisibility_index(q);
    EXPECT_EQ(std::size_t{1} << d.index, g.dim());
    EXPECT_TRUE(is_divisible_by(an, d.witness));
    // A larger quasi-Pfister divisor would need a larger G.
    EXPECT_LE(d.witness.expanded.dim(), an.dim());

    const NormForm nf = norm_form(q);
    EXPECT_LE(an.dim(), std::size_t{1} << nf.lndeg);
    EXPECT_TRUE(is_anisotropic(nf.form.expanded));
    EXPECT_TRUE(subform_up_to_iso(scale(k->inverse(an.coeffs()[0]), an), nf.form.expanded));
    EXPECT_EQ(check_normform_divisibility(an, an), is_divisible_by(an, nf.form));
  }
}

TEST(FormProperties, Roundness) {
  Gen gen(31);
  const Field k = f3();
  for (int n = 0; n < 10; ++n) {
    std::vector<FieldElement> slots;
    for (std::size_t i = 0, m = 1 + gen.below(2); i < m; ++i) slots.push_back(gen.element(k, 2, 1));
    const QuasiPfister pi = QuasiPfister::make(k, slots);
    if (!is_anisotropic(pi.expanded)) continue;
    const SquareSubspace g = similarity_field(pi.expanded);
    EXPECT_TRUE(g.is_subspace_of(pi.expanded.values()));
    EXPECT_TRUE(pi.expanded.values().is_subspace_of(g));
  }
}

TEST(FormProperties, SimilarWitnessIsSubform) {
  Gen gen(99);
  const Field k = f3();
  int found = 0;
  for (int n = 0; n < 30; ++n) {
    const QuasilinearForm q = random_anisotropic(gen, k, 4);
    // Build p inside a scaled copy of q half of the time.
    QuasilinearForm p = random_anisotropic(gen, k, 2);
    if (gen.coin()) {
      const FieldElement c = gen.element(k, 2, 1);
      if (c.is_zero()) continue;
      std::vector<FieldElement> sub(q.coeffs().begin(), q.coeffs().begin() + std::min<std::size_t>(2, q.dim()));
      p = scale(c, QuasilinearForm(k, sub));
    }
    const auto w = similar_subform_witness(p, q);
    if (w) {
      ++found;
      EXPECT_FALSE(w->is_zero());
      EXPECT_TRUE(subform_up_to_iso(scale(*w, p), q));
    }
  }
  EXPECT_GT(found, 0);
}

TEST(FormProperties, ValuesOverQuadraticExtension) {
  Gen gen(5);
  const Field k = f2();
  for (int n = 0; n < 15; ++n) {
    const QuasilinearForm q = random_form(gen, k, 3);
    const FieldElement a = gen.element(k, 2, 1);
    if (k->sqrt_if_square(a)) continue;
    const Field ext = k->adjoin_sqrt(a);
    const QuasilinearForm qk = extend_scalars(q, ext);
    // sum x_i^2 q_i with x_i = y_i + z_i sqrt(a) lands in F.
    FieldElement c = ext->zero();
    for (const auto& qi : qk.coeffs()) {
      const FieldElement x = ext->add(ext->embed(gen.element(k, 2, 1)), ext->mul(ext->embed(gen.element(k, 2, 1)), ext->root(1)));
      c = ext->add(c, ext->mul(ext->square(x), qi));
    }
    ASSERT_EQ(c.level(), 0u);
    const FieldElement c0(c.components()[0]);
    EXPECT_TRUE(q.values().sum(q.values().scaled(a)).contains(c0));
    EXPECT_TRUE(represents(qk, c));
  }
}

TEST(FormProperties, SubformInsensitiveToTranscendental) {
  Gen gen(17);
  const Field k = f2();
  const Field wide = k->with_fresh_vars({"u"});
  for (int n = 0; n < 20; ++n) {
    const QuasilinearForm q = random_anisotropic(gen, k, 3);
    const QuasilinearForm p = random_anisotropic(gen, k, 2);
    const bool below = similar_subform_witness(p, q).has_value();
    const bool above = similar_subform_witness(extend_scalars(p, wide), extend_scalars(q, wide)).has_value();
    EXPECT_EQ(below, above);
  }
}
