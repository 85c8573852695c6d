#include "modular_gcd.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <vector>

#include "qlform/error.hpp"

namespace qlform::detail {

std::uint32_t Gf31::mul(std::uint32_t a, std::uint32_t b) noexcept {
  // Four bits of b at a time against a table of small multiples of a.
  std::uint64_t table[16];
  table[0] = 0;
  table[1] = a;
  for (int i = 2; i < 16; i += 2) {
    table[i] = table[i / 2] << 1;
    table[i + 1] = table[i] ^ a;
  }
  std::uint64_t r = 0;
  for (int shift = 28; shift >= 0; shift -= 4) r = (r << 4) ^ table[(b >> shift) & 0xFu];
  // x^31 = x^3 + 1; two folds bring a 62-bit product below 2^31.
  for (int k = 0; k < 2; ++k) {
    const std::uint64_t hi = r >> 31;
    r = (r & kMask) ^ hi ^ (hi << 3);
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t Gf31::inv(std::uint32_t a) noexcept {
  // Extended Euclid on bit-packed polynomials; a must be nonzero.
  std::uint64_t u = a, v = 0x80000009u, g1 = 1, g2 = 0;
  while (u != 1) {
    int j = std::bit_width(u) - std::bit_width(v);
    if (j < 0) {
      std::swap(u, v);
      std::swap(g1, g2);
      j = -j;
    }
    u ^= v << j;
    g1 ^= g2 << j;
  }
  return static_cast<std::uint32_t>(g1);
}

namespace {

using F = Gf31;

// ---- univariate F[x], coefficients low to high -----------------------------

using UPoly = std::vector<std::uint32_t>;

void utrim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int udeg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

std::uint32_t ueval(const UPoly& p, std::uint32_t x) {
  std::uint32_t acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = F::mul(acc, x) ^ p[i];
  return acc;
}

UPoly umul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= F::mul(a[i], b[j]);
  }
  utrim(r);
  return r;
}

void uscale(UPoly& p, std::uint32_t c) {
  for (auto& x : p) x = F::mul(x, c);
}

// Quotient and remainder; b nonzero.
std::pair<UPoly, UPoly> udivmod(UPoly a, const UPoly& b) {
  utrim(a);
  const int db = udeg(b);
  const std::uint32_t lc_inv = F::inv(b.back());
  UPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (udeg(a) >= db) {
    const std::size_t shift = a.size() - b.size();
    const std::uint32_t c = F::mul(a.back(), lc_inv);
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] ^= F::mul(c, b[i]);
    utrim(a);
  }
  return {q, a};
}

UPoly umonic(UPoly p) {
  utrim(p);
  if (!p.empty()) uscale(p, F::inv(p.back()));
  return p;
}

UPoly ugcd(UPoly a, UPoly b) {
  utrim(a);
  utrim(b);
  while (!b.empty()) {
    UPoly r = udivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(std::move(a));
}

// ---- sparse multivariate over F, terms strictly descending ----------------

struct Term {
  Monomial m;
  std::uint32_t c;
};
using QPoly = std::vector<Term>;

void normalize(QPoly& p) {
  std::sort(p.begin(), p.end(), [](const Term& x, const Term& y) { return x.m > y.m; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < p.size();) {
    Term t = p[i++];
    while (i < p.size() && p[i].m == t.m) t.c ^= p[i++].c;
    if (t.c != 0) p[w++] = t;
  }
  p.resize(w);
}

QPoly from_gf2(const Polynomial2& f) {
  QPoly p;
  p.reserve(f.size());
  for (const auto& m : f.terms()) p.push_back({m, 1});
  return p;
}

bool uses(const QPoly& p, std::size_t v) {
  return std::any_of(p.begin(), p.end(), [v](const Term& t) { return t.m.exp[v] != 0; });
}

std::uint32_t degree_in(const QPoly& p, std::size_t v) {
  std::uint32_t d = 0;
  for (const auto& t : p) d = std::max<std::uint32_t>(d, t.m.exp[v]);
  return d;
}

// Coefficients in F[x_v] keyed by the monomial with x_v removed, descending.
std::vector<std::pair<Monomial, UPoly>> split_on(const QPoly& p, std::size_t v) {
  std::map<Monomial, UPoly, std::greater<>> groups;
  for (const auto& t : p) {
    Monomial rest = t.m;
    const std::uint16_t e = rest.exp[v];
    rest.exp[v] = 0;
    UPoly& u = groups[rest];
    if (u.size() <= e) u.resize(e + 1u, 0);
    u[e] ^= t.c;
  }
  std::vector<std::pair<Monomial, UPoly>> out(groups.begin(), groups.end());
  for (auto& [m, u] : out) utrim(u);
  return out;
}

QPoly join_on(const std::vector<std::pair<Monomial, UPoly>>& groups, std::size_t v) {
  QPoly p;
  for (const auto& [rest, u] : groups) {
    for (std::size_t e = 0; e < u.size(); ++e) {
      if (u[e] == 0) continue;
      Monomial m = rest;
      m.exp[v] = static_cast<std::uint16_t>(e);
      p.push_back({m, u[e]});
    }
  }
  normalize(p);
  return p;
}

UPoly content_on(const QPoly& p, std::size_t v) {
  const auto groups = split_on(p, v);
  for (const auto& [m, u] : groups) {
    if (u.size() == 1) return UPoly{1};
  }
  UPoly g;
  for (const auto& [m, u] : groups) {
    g = g.empty() ? umonic(u) : ugcd(g, u);
    if (g.size() == 1) break;
  }
  return g;
}

QPoly divide_content(const QPoly& p, std::size_t v, const UPoly& c) {
  if (c.size() == 1) return p;
  auto groups = split_on(p, v);
  for (auto& [m, u] : groups) u = udivmod(u, c).first;
  return join_on(groups, v);
}

QPoly eval_at(const QPoly& p, std::size_t v, std::uint32_t alpha) {
  std::vector<std::uint32_t> powers{1};
  QPoly out;
  out.reserve(p.size());
  for (const auto& t : p) {
    const std::uint16_t e = t.m.exp[v];
    while (powers.size() <= e) powers.push_back(F::mul(powers.back(), alpha));
    Monomial m = t.m;
    m.exp[v] = 0;
    out.push_back({m, F::mul(t.c, powers[e])});
  }
  normalize(out);
  return out;
}

QPoly times_upoly(const QPoly& p, std::size_t v, const UPoly& u) {
  QPoly out;
  for (const auto& t : p) {
    for (std::size_t e = 0; e < u.size(); ++e) {
      if (u[e] == 0) continue;
      Monomial m = t.m;
      const std::uint32_t ne = m.exp[v] + e;
      if (ne > arith_limits().max_exponent) throw Error(ErrorCode::CapExceeded, "exponent cap in gcd");
      m.exp[v] = static_cast<std::uint16_t>(ne);
      out.push_back({m, F::mul(t.c, u[e])});
    }
  }
  normalize(out);
  return out;
}

QPoly add(QPoly a, const QPoly& b) {
  a.insert(a.end(), b.begin(), b.end());
  normalize(a);
  return a;
}

void scale(QPoly& p, std::uint32_t c) {
  for (auto& t : p) t.c = F::mul(t.c, c);
}

QPoly monic(QPoly p) {
  if (!p.empty() && p.front().c != 1) scale(p, F::inv(p.front().c));
  return p;
}

bool divides(const QPoly& d, const QPoly& a) {
  // Leading-term division with a descending map as the remainder.
  std::map<Monomial, std::uint32_t, std::greater<>> r;
  for (const auto& t : a) r.emplace(t.m, t.c);
  const Term& lead = d.front();
  const std::uint32_t lead_inv = F::inv(lead.c);
  while (!r.empty()) {
    const auto [m, c] = *r.begin();
    if (!lead.m.divides(m)) return false;
    const Monomial q = monomial_quotient(m, lead.m);
    const std::uint32_t qc = F::mul(c, lead_inv);
    for (const auto& t : d) {
      const Monomial pm = t.m * q;
      const std::uint32_t pc = F::mul(t.c, qc);
      auto it = r.find(pm);
      if (it == r.end()) {
        r.emplace(pm, pc);
      } else if ((it->second ^= pc) == 0) {
        r.erase(it);
      }
    }
  }
  return true;
}

UPoly univariate(const QPoly& p, std::size_t v) {
  UPoly u(degree_in(p, v) + 1u, 0);
  for (const auto& t : p) u[t.m.exp[v]] ^= t.c;
  utrim(u);
  return u;
}

QPoly from_univariate(const UPoly& u, std::size_t v) {
  QPoly p;
  for (std::size_t e = u.size(); e-- > 0;) {
    if (u[e] == 0) continue;
    Monomial m{};
    m.exp[v] = static_cast<std::uint16_t>(e);
    p.push_back({m, u[e]});
  }
  return p;
}

QPoly constant_one() { return QPoly{Term{Monomial{}, 1}}; }

// Monic gcd of nonzero a, b whose variables lie in `vars`.
QPoly gcd_rec(const QPoly& a, const QPoly& b, std::vector<std::size_t> vars) {
  std::erase_if(vars, [&](std::size_t v) { return !uses(a, v) && !uses(b, v); });
  if (vars.empty()) return constant_one();
  if (vars.size() == 1) {
    const std::size_t v = vars.front();
    return from_univariate(ugcd(univariate(a, v), univariate(b, v)), v);
  }

  // Interpolate in the variable of least degree.
  std::size_t v = vars.front();
  std::uint32_t best = ~0u;
  for (std::size_t w : vars) {
    const std::uint32_t d = std::max(degree_in(a, w), degree_in(b, w));
    if (d < best) {
      best = d;
      v = w;
    }
  }
  std::vector<std::size_t> rest = vars;
  std::erase(rest, v);

  const UPoly ca = content_on(a, v), cb = content_on(b, v);
  const UPoly c = ugcd(ca, cb);
  const QPoly pa = divide_content(a, v, ca), pb = divide_content(b, v, cb);
  const UPoly lca = split_on(pa, v).front().second;
  const UPoly lcb = split_on(pb, v).front().second;
  const UPoly g = ugcd(lca, lcb);
  const std::uint32_t bound = std::min(degree_in(pa, v), degree_in(pb, v)) + static_cast<std::uint32_t>(udeg(g));

  QPoly h;
  Monomial lead;
  UPoly modulus{1};
  std::uint32_t points = 0;
  for (std::uint32_t alpha = 2;; ++alpha) {
    if (ueval(lca, alpha) == 0 || ueval(lcb, alpha) == 0) continue;
    QPoly ga = gcd_rec(eval_at(pa, v, alpha), eval_at(pb, v, alpha), rest);
    if (ga.size() == 1 && ga.front().m.is_one()) return from_univariate(c, v);
    scale(ga, ueval(g, alpha));
    if (points == 0 || ga.front().m < lead) {
      // First point, or every earlier point was unlucky.
      lead = ga.front().m;
      h = std::move(ga);
      modulus = UPoly{alpha, 1};
      points = 1;
      continue;
    }
    if (lead < ga.front().m) continue;  // unlucky point
    const QPoly h_at = eval_at(h, v, alpha);
    const bool stable = std::equal(h_at.begin(), h_at.end(), ga.begin(), ga.end(),
                                   [](const Term& x, const Term& y) { return x.m == y.m && x.c == y.c; });
    if (!stable) {
      QPoly diff = add(ga, h_at);
      scale(diff, F::inv(ueval(modulus, alpha)));
      h = add(h, times_upoly(diff, v, modulus));
      modulus = umul(modulus, UPoly{alpha, 1});
      ++points;
    }
    if (stable || points > bound) {
      const QPoly candidate = divide_content(h, v, content_on(h, v));
      if (divides(candidate, pa) && divides(candidate, pb)) {
        return monic(times_upoly(candidate, v, c));
      }
      if (stable) {
        // Agreement was accidental; keep interpolating.
        modulus = umul(modulus, UPoly{alpha, 1});
        ++points;
      }
    }
  }
}

// True when some variable certifies that the gcd has degree zero in every
// variable: the images in F[x_v] keep their degree and are coprime.
bool images_coprime(const QPoly& a, const QPoly& b, const std::vector<std::size_t>& vars) {
  std::uint32_t point[kMaxVars];
  std::uint32_t seed = 0x2545F491u;
  for (auto& x : point) {
    seed = seed * 1664525u + 1013904223u;
    x = (seed & Gf31::kMask) | 2u;
  }
  auto image = [&](const QPoly& p, std::size_t v) {
    UPoly u(degree_in(p, v) + 1u, 0);
    for (const auto& t : p) {
      std::uint32_t c = t.c;
      for (std::size_t w : vars) {
        if (w == v) continue;
        for (std::uint16_t e = 0; e < t.m.exp[w]; ++e) c = F::mul(c, point[w]);
      }
      u[t.m.exp[v]] ^= c;
    }
    return u;
  };
  for (std::size_t v : vars) {
    if (!uses(a, v) || !uses(b, v)) continue;
    const UPoly ua = image(a, v);
    if (ua.back() == 0) return false;
    if (ugcd(ua, image(b, v)).size() > 1) return false;
  }
  return true;
}

}  // namespace

Polynomial2 modular_gcd(const Polynomial2& a, const Polynomial2& b) {
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < a.arity(); ++v) vars.push_back(v);
  const QPoly qa = from_gf2(a), qb = from_gf2(b);
  if (images_coprime(qa, qb, vars)) return Polynomial2::one(a.arity());
  const QPoly g = gcd_rec(qa, qb, std::move(vars));
  std::vector<Monomial> terms;
  terms.reserve(g.size());
  for (const auto& t : g) {
    if (t.c != 1) throw Error(ErrorCode::InternalInconsistency, "gcd left the prime field");
    terms.push_back(t.m);
  }
  return Polynomial2::from_terms(a.arity(), std::move(terms));
}

}  // namespace qlform::detail
