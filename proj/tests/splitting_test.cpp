#include <gtest/gtest.h>

#include "qlform/error.hpp"
#include "qlform/splitting.hpp"
#include "test_support.hpp"

using namespace qlform;
using qlform::testing::base;
using qlform::testing::code_of;
using qlform::testing::el;
using qlform::testing::form;
using qlform::testing::Gen;
using qlform::testing::pfister;

namespace {

Field f2() { return base({"t1", "t2"}); }

std::vector<std::size_t> js(const TowerReport& t) {
  std::vector<std::size_t> out;
  for (const auto& l : t.levels) out.push_back(l.j);
  return out;
}

std::vector<std::size_t> lndegs(const TowerReport& t) {
  std::vector<std::size_t> out;
  for (const auto& l : t.levels) out.push_back(l.lndeg);
  return out;
}

void expect_tower_shape(const QuasilinearForm& q, const TowerReport& t) {
  ASSERT_FALSE(t.levels.empty());
  EXPECT_EQ(t.levels.front().j, isotropy_index(q));
  for (std::size_t r = 0; r < t.levels.size(); ++r) {
    const TowerLevel& l = t.levels[r];
    EXPECT_EQ(l.kernel.dim(), q.dim() - l.j);
    EXPECT_EQ(l.lndeg + r, t.levels.front().lndeg);
    if (r > 0) {
      EXPECT_GT(l.j, t.levels[r - 1].j);
      EXPECT_EQ(l.i, l.j - t.levels[r - 1].j);
    }
  }
  EXPECT_LE(t.levels.back().kernel.dim(), 1u);
  EXPECT_LE(t.height(), t.levels.front().lndeg);
}

}  // namespace

TEST(FunctionField, Examples) {
  const Field k = f2();
  const FunctionFieldPresentation a = function_field(form(k, {"1", "t1"}));
  EXPECT_TRUE(a.fresh_vars.empty());
  EXPECT_EQ(a.theta, el(k, "t1"));
  EXPECT_EQ(a.result->height(), 1u);
  EXPECT_EQ(a.result->trdeg(), 2u);

  const FunctionFieldPresentation b = function_field(form(k, {"1", "t1", "t2"}));
  EXPECT_EQ(b.fresh_vars, std::vector<std::string>{"s1_2"});
  const Field wide = base({"t1", "t2", "s1_2"});
  EXPECT_EQ(b.theta, el(wide, "t1+t2*s1_2^2"));
  EXPECT_TRUE(b.result->same_as(*wide->adjoin_sqrt(el(wide, "t1+t2*s1_2^2"))));

  // Leading coefficient divides through.
  const FunctionFieldPresentation c = function_field(form(k, {"t1", "t2"}));
  EXPECT_EQ(c.theta, el(k, "t2/t1"));

  EXPECT_EQ(code_of([&] { function_field(form(k, {"t1", "t2", "t1+t2"})); }), ErrorCode::RequiresAnisotropic);
  EXPECT_EQ(code_of([&] { function_field(form(k, {"1"})); }), ErrorCode::DimTooSmall);
  EXPECT_EQ(code_of([&] { function_field(form(k, {"t1", "t1"})); }), ErrorCode::SplitForm);
}

TEST(FunctionField, NamesFollowDepth) {
  const Field k = f2();
  const Field k1 = k->adjoin_sqrt(el(k, "t1"));
  const FieldElement r = k1->root(1), t2 = k1->variable("t2");
  const FunctionFieldPresentation p = function_field(QuasilinearForm(k1, {k1->one(), t2, r, k1->mul(r, t2)}));
  EXPECT_EQ(p.fresh_vars, (std::vector<std::string>{"s2_2", "s2_3"}));
}

TEST(KnebuschTower, Examples) {
  const Field k = f2();
  const QuasilinearForm a = form(k, {"1", "t1"});
  const TowerReport ta = knebusch_tower(a);
  EXPECT_EQ(ta.height(), 1u);
  EXPECT_EQ(js(ta), (std::vector<std::size_t>{0, 1}));
  expect_tower_shape(a, ta);

  const QuasilinearForm b = form(k, {"1", "t1", "t2"});
  const TowerReport tb = knebusch_tower(b);
  EXPECT_EQ(tb.height(), 2u);
  EXPECT_EQ(js(tb), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(lndegs(tb), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(tb.levels[1].i, 1u);
  EXPECT_EQ(tb.levels[2].i, 1u);
  expect_tower_shape(b, tb);

  const QuasilinearForm c = pfister(k, {"t1", "t2"}).expanded;
  const TowerReport tc = knebusch_tower(c);
  EXPECT_EQ(tc.height(), 2u);
  EXPECT_EQ(js(tc), (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(lndegs(tc), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(tc.levels[1].i, 2u);
  EXPECT_EQ(tc.levels[1].d, 1u);
  expect_tower_shape(c, tc);

  // Cross-check level 1 of <1,t1,t2> by a rank computation over F(s)(sqrt(t1 + t2 s^2)).
  const Field k3 = base({"t1", "t2", "s1_2"});
  const Field fp = k3->adjoin_sqrt(el(k3, "t1+t2*s1_2^2"));
  EXPECT_EQ(isotropy_index(extend_scalars(form(k3, {"1", "t1", "t2"}), fp)), 1u);

  EXPECT_EQ(code_of([&] { knebusch_tower(form(k, {"0"})); }), ErrorCode::ZeroForm);
}

TEST(KnebuschTower, IsotropicInput) {
  const Field k = f2();
  const QuasilinearForm q = form(k, {"1", "t1", "t2", "t1+t2"});
  const TowerReport t = knebusch_tower(q);
  EXPECT_EQ(js(t), (std::vector<std::size_t>{1, 2, 3}));
  expect_tower_shape(q, t);
}

TEST(KnebuschTower, TrdegCap) {
  const Field k = FieldTower::make_base_field({"t1", "t2"}, TowerCaps{3, 8});
  const QuasilinearForm q(k, {k->one(), el(k, "t1"), el(k, "t2"), el(k, "t1*t2")});
  EXPECT_EQ(code_of([&] { knebusch_tower(q); }), ErrorCode::CapExceeded);
}

TEST(HigherInvariants, Examples) {
  const Field k = f2();
  const HigherInvariants a = higher_invariants(knebusch_tower(pfister(k, {"t1", "t2"}).expanded));
  EXPECT_EQ(a.i.front(), 2u);
  EXPECT_EQ(a.s, 1u);
  const HigherInvariants b = higher_invariants(knebusch_tower(form(k, {"1", "t1", "t2"})));
  EXPECT_EQ(b.i, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(b.s, 1u);
  EXPECT_EQ(b.d.size(), 3u);
  const HigherInvariants c = higher_invariants(knebusch_tower(form(k, {"t1", "1+t2"})));
  EXPECT_EQ(c.i, std::vector<std::size_t>{1});
  EXPECT_EQ(c.s, 0u);
  EXPECT_EQ(code_of([&] { higher_invariants(knebusch_tower(form(k, {"t1"}))); }), ErrorCode::SplitInput);
}

TEST(IsotropyOverFunctionField, Examples) {
  const Field k = f2();
  const QuasilinearForm p = form(k, {"1", "t1", "t2"});
  EXPECT_EQ(isotropy_over_function_field(p, p), 1u);
  EXPECT_EQ(isotropy_over_function_field(pfister(k, {"t1", "t2"}).expanded, form(k, {"1", "t1"})), 2u);
  EXPECT_EQ(isotropy_over_function_field(form(k, {"1", "t2"}), form(k, {"1", "t1"})), 0u);

  // Over F(sqrt t1): 1 ~ t1 and t2 ~ t1 t2, so span{1,t1,t2,t1t2} has dimension 2.
  const Field e = k->adjoin_sqrt(el(k, "t1"));
  EXPECT_EQ(rank_over_squares(e, extend_scalars(pfister(k, {"t1", "t2"}).expanded, e).coeffs()).rank, 2u);
}

TEST(VerifyBounds, Examples) {
  const Field k = f2();
  const QuasilinearForm pi = pfister(k, {"t1", "t2"}).expanded;
  const BoundReport a = verify_bounds(pi, pi);
  EXPECT_EQ(a.quantities.i0_qFp, 2u);
  EXPECT_EQ(a.quantities.d1_p, 1u);
  EXPECT_EQ(a.quantities.i1_p, 2u);
  EXPECT_TRUE(a.all_pass());
  EXPECT_TRUE(a.main_tight);
  // d1 agrees with the divisibility index of the computed q_1.
  EXPECT_EQ(knebusch_tower(pi).levels[1].d, a.quantities.d1_p);

  const BoundReport b = verify_bounds(form(k, {"1", "t1", "t2"}), pi);
  EXPECT_TRUE(b.all_pass());
  ASSERT_NE(b.verdict("kmt"), nullptr);
  EXPECT_TRUE(b.verdict("kmt")->pass);
  EXPECT_LE(b.quantities.i0_qFp, 2u);
  EXPECT_EQ(b.quantities.i0_qFp, isotropy_over_function_field(pi, form(k, {"1", "t1", "t2"})));

  const QuasilinearForm d2 = form(k, {"1", "t1"});
  const BoundReport c = verify_bounds(d2, d2);
  EXPECT_EQ(c.quantities.i0_qFp, 1u);
  EXPECT_TRUE(c.all_pass());
  EXPECT_TRUE(c.main_tight);

  std::vector<std::string> names;
  for (const auto& [name, v] : a.verdicts) names.push_back(name);
  EXPECT_EQ(names, (std::vector<std::string>{"kmt", "main", "refined", "d1"}));
}

TEST(VerifyBounds, VacuousKmt) {
  const Field k = f2();
  const BoundReport r = verify_bounds(form(k, {"1", "t1"}), form(k, {"1", "t2"}));
  EXPECT_EQ(r.quantities.i0_qFp, 0u);
  EXPECT_TRUE(r.verdict("kmt")->vacuous);
  EXPECT_TRUE(r.all_pass());
}

TEST(VerifyP1Subform, Examples) {
  const Field k = f2();
  const QuasilinearForm pi = pfister(k, {"t1", "t2"}).expanded;
  std::optional<FieldElement> w;
  EXPECT_TRUE(verify_p1_subform(pi, pi, &w).pass);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->is_one());

  const QuasilinearForm p = form(k, {"1", "t1", "t2"});
  const BoundReport r = verify_all(p, pi);
  ASSERT_TRUE(r.p1_witness.has_value());
  EXPECT_TRUE(r.verdict("p1_subform")->pass);
  const TowerReport tp = knebusch_tower(p);
  const Field& fp = r.function_field;
  const QuasilinearForm p1 = anisotropic_part(extend_scalars(p, fp));
  const QuasilinearForm qk = anisotropic_part(extend_scalars(pi, fp));
  EXPECT_EQ(p1.dim(), tp.levels[1].kernel.dim());
  EXPECT_TRUE(subform_up_to_iso(scale(*r.p1_witness, p1), qk));

  EXPECT_TRUE(verify_p1_subform(form(k, {"1", "t1"}), pi).pass);
  EXPECT_EQ(code_of([&] { verify_p1_subform(form(k, {"1", "t1"}), form(k, {"1", "t2"})); }),
            ErrorCode::NotIsotropic);
}

TEST(VerifyNearMaximal, Examples) {
  const Field k = f2();
  const QuasilinearForm pi = pfister(k, {"t1", "t2"}).expanded;
  EXPECT_TRUE(verify_near_maximal(pi, pi).pass);
  const QuasilinearForm q = orth_sum(pfister(k, {"t1"}).expanded, scale(el(k, "t2"), pfister(k, {"t1"}).expanded));
  EXPECT_TRUE(verify_near_maximal(form(k, {"1", "t1", "t2"}), q).pass);
  EXPECT_TRUE(verify_near_maximal(form(k, {"1", "t1"}), form(k, {"1", "t2"})).pass);
}

TEST(VerifyNdegDrop, Examples) {
  const Field k = f2();
  for (const auto& q : {pfister(k, {"t1", "t2"}).expanded, form(k, {"1", "t1", "t2"}), form(k, {"1", "t1"})}) {
    const VerdictEntry v = verify_ndeg_drop(q);
    EXPECT_TRUE(v.pass) << v.relation;
  }
}

TEST(VerifyAll, JsonLayout) {
  const Field k = f2();
  const BoundReport r = verify_all(form(k, {"1", "t1"}), pfister(k, {"t1", "t2"}).expanded);
  const Json j = bound_report_json(r);
  for (const char* key : {"i0_qFp", "i1_p", "d1_p", "s", "lndeg_p", "eps", "dim_p", "dim_q"}) {
    EXPECT_TRUE(j["quantities"].contains(key)) << key;
  }
  for (const char* key : {"kmt", "main", "refined", "d1", "p1_subform", "near_maximal", "ndeg_drop"}) {
    EXPECT_EQ(j["verdicts"][key]["status"], "PASS") << key;
  }
  EXPECT_EQ(parse_form_json(j["instance"]["q"]).coeffs(), pfister(k, {"t1", "t2"}).expanded.coeffs());
  const Json t = tower_report_json(knebusch_tower(form(k, {"1", "t1", "t2"})));
  EXPECT_EQ(t["h"], 2);
  EXPECT_EQ(t["j"], Json::parse("[0,1,2]"));
}

TEST(VerifyAll, FreshVariableInvariance) {
  const Field k = f2();
  const Field wide = k->with_fresh_vars({"u"});
  const std::vector<std::pair<QuasilinearForm, QuasilinearForm>> cases = {
      {form(k, {"1", "t1", "t2"}), pfister(k, {"t1", "t2"}).expanded},
      {form(k, {"1", "t1"}), form(k, {"1", "t1", "t2"})},
      {form(k, {"t1", "t2"}), form(k, {"1", "t1*t2", "t2"})},
  };
  for (const auto& [p, q] : cases) {
    const BoundReport a = verify_all(p, q);
    const BoundReport b = verify_all(extend_scalars(p, wide), extend_scalars(q, wide));
    EXPECT_EQ(bound_report_json(a)["quantities"], bound_report_json(b)["quantities"]);
    ASSERT_EQ(a.verdicts.size(), b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
      EXPECT_EQ(a.verdicts[i].first, b.verdicts[i].first);
      EXPECT_EQ(a.verdicts[i].second.pass, b.verdicts[i].second.pass);
      EXPECT_EQ(a.verdicts[i].second.values, b.verdicts[i].second.values);
    }
  }
}

TEST(VerifyAll, RandomInstancesPass) {
  Gen gen(12);
  const Field k = f2();
  int run = 0;
  for (int n = 0; n < 12; ++n) {
    auto pick = [&](std::size_t max_dim) {
      std::vector<FieldElement> c;
      for (std::size_t i = 0, m = 2 + gen.below(max_dim - 1); i < m; ++i) c.push_back(gen.element(k, 2, 1));
      return anisotropic_part(QuasilinearForm(k, c));
    };
    const QuasilinearForm p = pick(3), q = pick(4);
    if (p.dim() < 2 || q.dim() < 2) continue;
    const BoundReport r = verify_all(p, q);
    EXPECT_TRUE(r.all_pass()) << bound_report_json(r).dump();
    ++run;
  }
  EXPECT_GT(run, 4);
}
