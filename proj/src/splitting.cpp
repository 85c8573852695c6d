#include "qlform/splitting.hpp"

#include <algorithm>
#include <bit>

#include "qlform/error.hpp"

namespace qlform {

namespace {

std::size_t two_adic_order(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(std::countr_zero(n)); }

long long as_ll(std::size_t n) { return static_cast<long long>(n); }

// Everything the verifiers derive from one (p, q) pair over one F(p).
struct PairContext {
  QuasilinearForm p;
  QuasilinearForm q;
  FunctionFieldPresentation ffp;
  QuasilinearForm q_ext;
  std::size_t i0 = 0;
  QuasilinearForm p1;
  std::size_t i1 = 0;
  std::size_t d1 = 0;
  std::size_t lndeg_p = 0;
};

void require_verifier_input(const QuasilinearForm& f, const char* name) {
  if (f.dim() < 2) throw Error(ErrorCode::DimTooSmall, std::string(name) + " needs dimension at least 2");
  if (!is_anisotropic(f)) throw Error(ErrorCode::RequiresAnisotropic, std::string(name) + " must be anisotropic");
}

PairContext make_context(const QuasilinearForm& p, const QuasilinearForm& q) {
  require_verifier_input(p, "p");
  require_verifier_input(q, "q");
  check_same_field(*p.field(), *q.field());
  FunctionFieldPresentation ffp = function_field(p);
  QuasilinearForm q_ext = extend_scalars(q, ffp.result);
  QuasilinearForm p_ext = extend_scalars(p, ffp.result);
  const std::size_t i0 = isotropy_index(q_ext);
  QuasilinearForm p1 = anisotropic_part(p_ext);
  const std::size_t i1 = p.dim() - p1.dim();
  const std::size_t d1 = divisibility_index(p1).index;
  const std::size_t lndeg = norm_form(p).lndeg;
  return PairContext{p, q, std::move(ffp), std::move(q_ext), i0, std::move(p1), i1, d1, lndeg};
}

VerdictEntry p1_subform_entry(const PairContext& c, std::optional<FieldElement>* witness) {
  VerdictEntry v;
  v.relation = "p_1 similar to a subform of (q over F(p))_an";
  v.values = {{"i0_qFp", as_ll(c.i0)}, {"dim_p1", as_ll(c.p1.dim())}};
  if (c.i0 == 0) {
    v.vacuous = true;
    return v;
  }
  auto a = similar_subform_witness(c.p1, anisotropic_part(c.q_ext));
  v.pass = a.has_value();
  if (witness) *witness = std::move(a);
  return v;
}

VerdictEntry near_maximal_entry(const PairContext& c) {
  const std::size_t m = std::size_t{1} << c.d1;
  const std::size_t eps = m - c.i0 % m;
  const std::size_t divisor = c.lndeg_p == 0 ? 1 : std::size_t{1} << (c.lndeg_p - 1);
  VerdictEntry v;
  v.relation = "2*i0 <= dim_q - eps or 2^(lndeg_p-1) | i0";
  v.values = {{"twice_i0", as_ll(2 * c.i0)},
              {"dim_q_minus_eps", as_ll(c.q.dim()) - as_ll(eps)},
              {"i0", as_ll(c.i0)},
              {"divisor", as_ll(divisor)}};
  const bool first = as_ll(2 * c.i0) <= as_ll(c.q.dim()) - as_ll(eps);
  const bool second = c.i0 % divisor == 0;
  v.pass = first || second;
  return v;
}

BoundReport bounds_from_context(const PairContext& c) {
  BoundReport r{c.p, c.q, {}, {}, std::nullopt, c.ffp.result, false};
  const std::size_t dp = c.p.dim();
  const std::size_t dq = c.q.dim();
  const std::size_t m = std::size_t{1} << c.d1;
  BoundQuantities& k = r.quantities;
  k.i0_qFp = c.i0;
  k.i1_p = c.i1;
  k.d1_p = c.d1;
  k.s = two_adic_order(dp - c.i1);
  k.lndeg_p = c.lndeg_p;
  k.eps = m - c.i0 % m;
  k.dim_p = dp;
  k.dim_q = dq;

  const long long i0 = as_ll(c.i0);
  const long long diff = as_ll(dq) - as_ll(dp);

  VerdictEntry kmt;
  kmt.relation = "i0 <= dim_q - dim_p + i1";
  kmt.values = {{"lhs", i0}, {"rhs", diff + as_ll(c.i1)}};
  kmt.vacuous = c.i0 == 0;
  kmt.pass = kmt.vacuous || i0 <= diff + as_ll(c.i1);
  kmt.tight = !kmt.vacuous && i0 == diff + as_ll(c.i1);
  r.verdicts.emplace_back("kmt", std::move(kmt));

  VerdictEntry main;
  const long long main_rhs = std::max(diff, as_ll(m));
  const long long main_rhs_s = std::max(diff, as_ll(std::size_t{1} << k.s));
  main.relation = "i0 <= max(dim_q - dim_p, 2^d1) and i0 <= max(dim_q - dim_p, 2^s)";
  main.values = {{"lhs", i0}, {"rhs", main_rhs}, {"rhs_s", main_rhs_s}};
  main.pass = i0 <= main_rhs && i0 <= main_rhs_s;
  r.main_tight = i0 == main_rhs;
  main.tight = r.main_tight;
  r.verdicts.emplace_back("main", std::move(main));

  VerdictEntry refined;
  const long long refined_rhs = std::max(diff + as_ll(c.i1) - as_ll(m), as_ll(m));
  refined.relation = "i0 <= max(dim_q - dim_p + i1 - 2^d1, 2^d1)";
  refined.values = {{"lhs", i0}, {"rhs", refined_rhs}};
  refined.pass = i0 <= refined_rhs;
  refined.tight = i0 == refined_rhs;
  r.verdicts.emplace_back("refined", std::move(refined));

  VerdictEntry d1;
  d1.relation = "2^d1 >= i1";
  d1.values = {{"lhs", as_ll(m)}, {"rhs", as_ll(c.i1)}};
  d1.pass = m >= c.i1;
  d1.tight = m == c.i1;
  r.verdicts.emplace_back("d1", std::move(d1));
  return r;
}

}  // namespace

FunctionFieldPresentation function_field(const QuasilinearForm& p) {
  if (p.dim() < 2) throw Error(ErrorCode::DimTooSmall, "function field needs dimension at least 2");
  const QuasilinearForm an = anisotropic_part(p);
  if (an.dim() <= 1) throw Error(ErrorCode::SplitForm, "form is split");
  if (an.dim() != p.dim()) throw Error(ErrorCode::RequiresAnisotropic, "function field of an isotropic form");

  const Field& base = p.field();
  const std::size_t r = base->height() + 1;
  std::vector<std::string> fresh;
  for (std::size_t i = 2; i < p.dim(); ++i) fresh.push_back("s" + std::to_string(r) + "_" + std::to_string(i));
  Field extended = fresh.empty() ? base : base->with_fresh_vars(fresh);

  const auto& a = p.coeffs();
  FieldElement sum = extended->embed(a[1]);
  for (std::size_t i = 2; i < p.dim(); ++i) {
    const FieldElement s = extended->variable(base->trdeg() + i - 2);
    sum = extended->add(sum, extended->mul(extended->embed(a[i]), extended->square(s)));
  }
  FieldElement theta = extended->div(sum, extended->embed(a[0]));
  Field result = extended->adjoin_sqrt(theta);
  return FunctionFieldPresentation{p, std::move(fresh), std::move(theta), std::move(result)};
}

TowerReport knebusch_tower(const QuasilinearForm& q) {
  if (q.dim() == 0 || q.is_zero_form()) throw Error(ErrorCode::ZeroForm, "tower of the zero form");
  TowerReport report;
  QuasilinearForm current = q;
  std::size_t previous_j = 0;
  for (;;) {
    const std::size_t j = isotropy_index(current);
    QuasilinearForm kernel = anisotropic_part(current);
    TowerLevel level{current.field(), kernel, j, report.levels.empty() ? 0 : j - previous_j, 0, 0};
    level.lndeg = norm_form(kernel).lndeg;
    level.d = divisibility_index(kernel).index;
    previous_j = j;
    report.levels.push_back(std::move(level));
    if (kernel.dim() <= 1) break;
    const FunctionFieldPresentation next = function_field(kernel);
    current = extend_scalars(q, next.result);
  }
  return report;
}

HigherInvariants higher_invariants(const TowerReport& report) {
  if (report.height() == 0) throw Error(ErrorCode::SplitInput, "tower of a split form has no higher invariants");
  HigherInvariants out;
  for (std::size_t r = 1; r < report.levels.size(); ++r) out.i.push_back(report.levels[r].i);
  for (const auto& lvl : report.levels) out.d.push_back(lvl.d);
  out.s = two_adic_order(report.levels[1].kernel.dim());
  return out;
}

std::size_t isotropy_over_function_field(const QuasilinearForm& q, const QuasilinearForm& p) {
  check_same_field(*p.field(), *q.field());
  const FunctionFieldPresentation ffp = function_field(p);
  return isotropy_index(extend_scalars(q, ffp.result));
}

bool BoundReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second.pass; });
}

const VerdictEntry* BoundReport::verdict(const std::string& name) const {
  for (const auto& [n, v] : verdicts) {
    if (n == name) return &v;
  }
  return nullptr;
}

BoundReport verify_bounds(const QuasilinearForm& p, const QuasilinearForm& q) {
  return bounds_from_context(make_context(p, q));
}

VerdictEntry verify_p1_subform(const QuasilinearForm& p, const QuasilinearForm& q,
                               std::optional<FieldElement>* witness) {
  const PairContext c = make_context(p, q);
  if (c.i0 == 0) throw Error(ErrorCode::NotIsotropic, "q stays anisotropic over F(p)");
  return p1_subform_entry(c, witness);
}

VerdictEntry verify_near_maximal(const QuasilinearForm& p, const QuasilinearForm& q) {
  return near_maximal_entry(make_context(p, q));
}

VerdictEntry verify_ndeg_drop(const QuasilinearForm& q) {
  require_verifier_input(q, "q");
  const TowerReport t = knebusch_tower(q);
  VerdictEntry v;
  v.relation = "lndeg_r = lndeg_0 - r";
  const std::size_t l0 = t.levels.front().lndeg;
  for (std::size_t r = 0; r < t.levels.size(); ++r) {
    const std::size_t l = t.levels[r].lndeg;
    v.values.emplace_back("lndeg_" + std::to_string(r), as_ll(l));
    if (r > l0 || l != l0 - r) v.pass = false;
  }
  return v;
}

BoundReport verify_all(const QuasilinearForm& p, const QuasilinearForm& q) {
  const PairContext c = make_context(p, q);
  BoundReport r = bounds_from_context(c);
  r.verdicts.emplace_back("p1_subform", p1_subform_entry(c, &r.p1_witness));
  r.verdicts.emplace_back("near_maximal", near_maximal_entry(c));
  r.verdicts.emplace_back("ndeg_drop", verify_ndeg_drop(p));
  return r;
}

Json verdict_json(const VerdictEntry& v) {
  Json j = Json::object();
  j["status"] = v.pass ? "PASS" : "FAIL";
  j["vacuous"] = v.vacuous;
  j["tight"] = v.tight;
  j["relation"] = v.relation;
  Json values = Json::object();
  for (const auto& [k, x] : v.values) values[k] = x;
  j["values"] = std::move(values);
  return j;
}

Json bound_report_json(const BoundReport& r) {
  Json j = Json::object();
  Json inst = Json::object();
  inst["p"] = form_json(r.p);
  inst["q"] = form_json(r.q);
  j["instance"] = std::move(inst);
  const BoundQuantities& k = r.quantities;
  j["quantities"] = Json{{"i0_qFp", k.i0_qFp}, {"i1_p", k.i1_p}, {"d1_p", k.d1_p}, {"s", k.s},
                         {"lndeg_p", k.lndeg_p}, {"eps", k.eps}, {"dim_p", k.dim_p}, {"dim_q", k.dim_q}};
  Json verdicts = Json::object();
  for (const auto& [name, v] : r.verdicts) verdicts[name] = verdict_json(v);
  j["verdicts"] = std::move(verdicts);
  j["main_tight"] = r.main_tight;
  j["function_field"] = field_descriptor_json(*r.function_field);
  j["p1_witness"] = r.p1_witness ? element_expr_json(*r.function_field, *r.p1_witness) : Json(nullptr);
  return j;
}

Json tower_report_json(const TowerReport& t) {
  Json j = Json::object();
  j["h"] = t.height();
  Json js = Json::array(), is = Json::array(), ls = Json::array(), ds = Json::array(), levels = Json::array();
  for (const auto& lvl : t.levels) {
    js.push_back(lvl.j);
    ls.push_back(lvl.lndeg);
    ds.push_back(lvl.d);
    Json l = Json::object();
    l["field"] = field_descriptor_json(*lvl.field);
    Json kernel = Json::array();
    for (const auto& c : lvl.kernel.coeffs()) kernel.push_back(element_expr_json(*lvl.field, c));
    l["kernel"] = std::move(kernel);
    levels.push_back(std::move(l));
  }
  for (std::size_t r = 1; r < t.levels.size(); ++r) is.push_back(t.levels[r].i);
  j["j"] = std::move(js);
  j["i"] = std::move(is);
  j["lndeg"] = std::move(ls);
  j["d"] = std::move(ds);
  j["levels"] = std::move(levels);
  return j;
}

}  // namespace qlform
