#include "qlform/polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>

#include "qlform/error.hpp"
#include "modular_gcd.hpp"

namespace qlform {

namespace {

std::atomic<std::uint32_t> g_max_exponent{0xFFFF};
std::atomic<std::size_t> g_max_arity{kMaxVars};

void check_arity(std::size_t arity) {
  if (arity > g_max_arity.load(std::memory_order_relaxed)) {
    throw Error(ErrorCode::CapExceeded, "variable count " + std::to_string(arity) + " exceeds arity cap");
  }
}

void check_same_arity(const Polynomial2& a, const Polynomial2& b) {
  if (a.arity() != b.arity()) {
    throw Error(ErrorCode::ArityMismatch,
                "arity " + std::to_string(a.arity()) + " vs " + std::to_string(b.arity()));
  }
}

// Merge two strictly descending term lists; equal terms cancel.
std::vector<Monomial> merge_add(std::span<const Monomial> a, std::span<const Monomial> b) {
  std::vector<Monomial> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    auto c = a[i] <=> b[j];
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

void sort_and_cancel(std::vector<Monomial>& terms) {
  std::sort(terms.begin(), terms.end(), std::greater<>());
  std::size_t w = 0;
  for (std::size_t r = 0; r < terms.size();) {
    std::size_t run = r + 1;
    while (run < terms.size() && terms[run] == terms[r]) ++run;
    if ((run - r) % 2 == 1) terms[w++] = terms[r];
    r = run;
  }
  terms.resize(w);
}

std::uint32_t used_vars_mask(const Polynomial2& f) {
  std::uint32_t mask = 0;
  for (const auto& m : f.terms()) {
    for (std::size_t v = 0; v < f.arity(); ++v) {
      if (m.exp[v] != 0) mask |= 1u << v;
    }
  }
  return mask;
}

// ---- univariate GF(2)[x] on packed bits ----------------------------------

using Bits = std::vector<std::uint64_t>;

int bits_degree(const Bits& a) {
  for (std::size_t w = a.size(); w-- > 0;) {
    if (a[w] != 0) return static_cast<int>(w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(a[w])));
  }
  return -1;
}

Bits to_bits(const Polynomial2& f, std::size_t var) {
  Bits b(f.degree_in(var) / 64 + 1, 0);
  for (const auto& m : f.terms()) b[m.exp[var] / 64] ^= std::uint64_t{1} << (m.exp[var] % 64);
  return b;
}

Polynomial2 from_bits(const Bits& b, std::size_t arity, std::size_t var) {
  std::vector<Monomial> terms;
  for (int d = bits_degree(b); d >= 0; --d) {
    if ((b[static_cast<std::size_t>(d) / 64] >> (d % 64)) & 1u) {
      Monomial m;
      m.exp[var] = static_cast<std::uint16_t>(d);
      terms.push_back(m);
    }
  }
  return Polynomial2::from_terms(arity, std::move(terms));
}

void bits_xor_shifted(Bits& a, const Bits& b, int shift) {
  const std::size_t ws = static_cast<std::size_t>(shift) / 64;
  const unsigned bs = static_cast<unsigned>(shift) % 64;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    if (i + ws < a.size()) a[i + ws] ^= b[i] << bs;
    if (bs != 0 && i + ws + 1 < a.size()) a[i + ws + 1] ^= b[i] >> (64 - bs);
  }
}

Bits bits_gcd(Bits a, Bits b) {
  int da = bits_degree(a), db = bits_degree(b);
  if (da < db) {
    std::swap(a, b);
    std::swap(da, db);
  }
  while (db >= 0) {
    while (da >= db) {
      bits_xor_shifted(a, b, da - db);
      da = bits_degree(a);
    }
    std::swap(a, b);
    std::swap(da, db);
  }
  return a;
}

// ---- recursive (dense in one variable) view ------------------------------

using Dense = std::vector<Polynomial2>;

Dense coefficients_in(const Polynomial2& f, std::size_t var) {
  std::vector<std::vector<Monomial>> buckets(f.degree_in(var) + 1);
  for (const auto& m : f.terms()) {
    Monomial c = m;
    c.exp[var] = 0;
    buckets[m.exp[var]].push_back(c);
  }
  Dense out;
  out.reserve(buckets.size());
  // Each bucket is already descending because t_var is zeroed uniformly
  // within a bucket.
  for (auto& b : buckets) out.push_back(Polynomial2::from_terms(f.arity(), std::move(b)));
  return out;
}

Polynomial2 gcd_impl(const Polynomial2& a, const Polynomial2& b);

Polynomial2 dense_content(const Dense& a, Polynomial2 seed) {
  Polynomial2 g = std::move(seed);
  for (const auto& c : a) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd_impl(g, c);
    if (g.is_one()) break;
  }
  return g;
}

Polynomial2 gcd_monomial_free(const Polynomial2& a, const Polynomial2& b) {
  const std::size_t n = a.arity();
  if (a.is_one() || b.is_one()) return Polynomial2::one(n);
  if (a == b) return a;

  const std::uint32_t ua = used_vars_mask(a), ub = used_vars_mask(b);
  if ((ua & ~ub) != 0 || (ub & ~ua) != 0) {
    // A variable occurring in only one operand cannot occur in the gcd.
    const bool in_a = (ua & ~ub) != 0;
    const Polynomial2& f = in_a ? a : b;
    const Polynomial2& other = in_a ? b : a;
    const std::size_t var = static_cast<std::size_t>(std::countr_zero(in_a ? (ua & ~ub) : (ub & ~ua)));
    return dense_content(coefficients_in(f, var), other);
  }
  if (std::popcount(ua) == 1) {
    const std::size_t var = static_cast<std::size_t>(std::countr_zero(ua));
    return from_bits(bits_gcd(to_bits(a, var), to_bits(b, var)), n, var);
  }

  return detail::modular_gcd(a, b);
}

Polynomial2 gcd_impl(const Polynomial2& a, const Polynomial2& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::size_t n = a.arity();
  if (a.is_one() || b.is_one()) return Polynomial2::one(n);
  if (a == b) return a;
  const Monomial ma = a.monomial_content(), mb = b.monomial_content();
  const Monomial m = monomial_gcd(ma, mb);
  auto strip = [&](const Polynomial2& f, const Monomial& mc) {
    if (mc.is_one()) return f;
    std::vector<Monomial> t(f.terms().begin(), f.terms().end());
    for (auto& x : t) x = monomial_quotient(x, mc);
    return Polynomial2::from_terms(n, std::move(t));
  };
  Polynomial2 g = gcd_monomial_free(strip(a, ma), strip(b, mb));
  return m.is_one() ? g : g.times_monomial(m);
}

}  // namespace

ArithLimits arith_limits() noexcept {
  return {g_max_exponent.load(std::memory_order_relaxed), g_max_arity.load(std::memory_order_relaxed)};
}

void set_arith_limits(const ArithLimits& limits) {
  if (limits.max_exponent > 0xFFFF || limits.max_arity > kMaxVars) {
    throw Error(ErrorCode::CapExceeded, "arithmetic caps cannot exceed the storage limits");
  }
  g_max_exponent.store(limits.max_exponent, std::memory_order_relaxed);
  g_max_arity.store(limits.max_arity, std::memory_order_relaxed);
}

std::uint32_t Monomial::total_degree() const noexcept {
  std::uint32_t d = 0;
  for (auto e : exp) d += e;
  return d;
}

bool Monomial::divides(const Monomial& other) const noexcept {
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (exp[i] > other.exp[i]) return false;
  }
  return true;
}

bool Monomial::is_one() const noexcept {
  for (auto e : exp) {
    if (e != 0) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  const std::uint32_t cap = g_max_exponent.load(std::memory_order_relaxed);
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    const std::uint32_t e = std::uint32_t{a.exp[i]} + b.exp[i];
    if (e > cap) throw Error(ErrorCode::CapExceeded, "exponent " + std::to_string(e) + " exceeds cap");
    m.exp[i] = static_cast<std::uint16_t>(e);
  }
  return m;
}

Monomial monomial_quotient(const Monomial& b, const Monomial& a) noexcept {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint16_t>(b.exp[i] - a.exp[i]);
  return m;
}

Monomial monomial_gcd(const Monomial& a, const Monomial& b) noexcept {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = std::min(a.exp[i], b.exp[i]);
  return m;
}

Polynomial2::Polynomial2(std::size_t arity) : arity_(arity) { check_arity(arity); }

Polynomial2 Polynomial2::one(std::size_t arity) {
  Polynomial2 p(arity);
  p.terms_.emplace_back();
  return p;
}

Polynomial2 Polynomial2::variable(std::size_t arity, std::size_t index, std::uint32_t power) {
  if (index >= arity) throw Error(ErrorCode::ArityMismatch, "variable index out of range");
  if (power > g_max_exponent.load(std::memory_order_relaxed)) {
    throw Error(ErrorCode::CapExceeded, "exponent " + std::to_string(power) + " exceeds cap");
  }
  Polynomial2 p(arity);
  Monomial m;
  m.exp[index] = static_cast<std::uint16_t>(power);
  p.terms_.push_back(m);
  return p;
}

Polynomial2 Polynomial2::monomial(std::size_t arity, const Monomial& m) {
  Polynomial2 p(arity);
  for (std::size_t i = arity; i < kMaxVars; ++i) {
    if (m.exp[i] != 0) throw Error(ErrorCode::ArityMismatch, "monomial uses variable beyond arity");
  }
  p.terms_.push_back(m);
  return p;
}

Polynomial2 Polynomial2::from_terms(std::size_t arity, std::vector<Monomial> terms) {
  Polynomial2 p(arity);
  const bool sorted = std::adjacent_find(terms.begin(), terms.end(),
                                         [](const Monomial& x, const Monomial& y) { return !(x > y); }) == terms.end();
  if (!sorted) sort_and_cancel(terms);
  p.terms_ = std::move(terms);
  return p;
}

std::uint32_t Polynomial2::degree_in(std::size_t var) const noexcept {
  std::uint32_t d = 0;
  for (const auto& m : terms_) d = std::max<std::uint32_t>(d, m.exp[var]);
  return d;
}

std::uint32_t Polynomial2::total_degree() const noexcept {
  std::uint32_t d = 0;
  for (const auto& m : terms_) d = std::max(d, m.total_degree());
  return d;
}

bool Polynomial2::uses_var(std::size_t var) const noexcept {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Monomial& m) { return m.exp[var] != 0; });
}

Monomial Polynomial2::monomial_content() const noexcept {
  if (terms_.empty()) return {};
  Monomial m = terms_.front();
  for (const auto& t : terms_) m = monomial_gcd(m, t);
  return m;
}

Polynomial2 Polynomial2::with_arity(std::size_t arity) const {
  for (std::size_t v = arity; v < arity_; ++v) {
    if (uses_var(v)) throw Error(ErrorCode::ArityMismatch, "cannot drop a variable in use");
  }
  Polynomial2 p(arity);
  p.terms_ = terms_;
  return p;
}

Polynomial2& Polynomial2::operator+=(const Polynomial2& other) {
  check_same_arity(*this, other);
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = other.terms_;
    return *this;
  }
  terms_ = merge_add(terms_, other.terms_);
  return *this;
}

Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b) {
  check_same_arity(a, b);
  if (a.is_zero() || b.is_zero()) return Polynomial2(a.arity());
  if (a.size() == 1) return b.times_monomial(a.terms_.front());
  if (b.size() == 1) return a.times_monomial(b.terms_.front());
  std::vector<Monomial> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) prod.push_back(x * y);
  }
  sort_and_cancel(prod);
  Polynomial2 p(a.arity());
  p.terms_ = std::move(prod);
  return p;
}

Polynomial2 Polynomial2::times_monomial(const Monomial& m) const {
  Polynomial2 p(arity_);
  p.terms_.reserve(terms_.size());
  // Multiplying by a fixed monomial preserves lexicographic order.
  for (const auto& t : terms_) p.terms_.push_back(t * m);
  return p;
}

Polynomial2 Polynomial2::square() const {
  Polynomial2 p(arity_);
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back(t * t);
  return p;
}

std::strong_ordering operator<=>(const Polynomial2& a, const Polynomial2& b) {
  if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                                                b.terms_.end());
}

std::optional<Polynomial2> try_divide(const Polynomial2& a, const Polynomial2& b) {
  check_same_arity(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (a.is_zero() || b.is_one()) return a;
  const auto bt = b.terms();
  if (!bt.front().divides(a.leading()) || !bt.back().divides(a.terms().back())) return std::nullopt;
  if (b.size() == 1) {
    std::vector<Monomial> q;
    q.reserve(a.size());
    for (const auto& t : a.terms()) {
      if (!bt.front().divides(t)) return std::nullopt;
      q.push_back(monomial_quotient(t, bt.front()));
    }
    return Polynomial2::from_terms(a.arity(), std::move(q));
  }
  for (std::size_t v = 0; v < a.arity(); ++v) {
    if (b.degree_in(v) > a.degree_in(v)) return std::nullopt;
  }
  std::vector<Monomial> rem(a.terms().begin(), a.terms().end());
  std::vector<Monomial> quot;
  std::vector<Monomial> shifted(bt.size());
  while (!rem.empty()) {
    if (!bt.front().divides(rem.front())) return std::nullopt;
    const Monomial q = monomial_quotient(rem.front(), bt.front());
    quot.push_back(q);
    for (std::size_t i = 0; i < bt.size(); ++i) shifted[i] = bt[i] * q;
    rem = merge_add(rem, shifted);
  }
  return Polynomial2::from_terms(a.arity(), std::move(quot));
}

Polynomial2 exact_quotient(const Polynomial2& a, const Polynomial2& b) {
  auto q = try_divide(a, b);
  if (!q) throw Error(ErrorCode::InexactDivision, "divisor does not divide dividend");
  return std::move(*q);
}

Polynomial2 poly_arith(PolyOp op, const Polynomial2& a, const Polynomial2& b) {
  switch (op) {
    case PolyOp::Add:
      return a + b;
    case PolyOp::Mul:
      return a * b;
    case PolyOp::ExactQuotient:
      return exact_quotient(a, b);
  }
  throw Error(ErrorCode::UsageError, "unknown polynomial operation");
}

Polynomial2 poly_gcd(const Polynomial2& a, const Polynomial2& b) {
  check_same_arity(a, b);
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::BothZero, "gcd(0, 0) is undefined");
  return gcd_impl(a, b);
}

std::pair<Polynomial2, Polynomial2> even_odd_split(const Polynomial2& f, std::size_t var) {
  if (var >= f.arity()) throw Error(ErrorCode::ArityMismatch, "split variable out of range");
  std::vector<Monomial> even, odd;
  for (const auto& m : f.terms()) {
    if (m.exp[var] % 2 == 0) {
      even.push_back(m);
    } else {
      Monomial o = m;
      --o.exp[var];
      odd.push_back(o);
    }
  }
  return {Polynomial2::from_terms(f.arity(), std::move(even)), Polynomial2::from_terms(f.arity(), std::move(odd))};
}

std::optional<Polynomial2> sqrt_if_square(const Polynomial2& f) {
  std::vector<Monomial> roots;
  roots.reserve(f.size());
  for (const auto& m : f.terms()) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (m.exp[i] % 2 != 0) return std::nullopt;
      r.exp[i] = static_cast<std::uint16_t>(m.exp[i] / 2);
    }
    roots.push_back(r);
  }
  return Polynomial2::from_terms(f.arity(), std::move(roots));
}

std::vector<std::string> default_var_names(std::size_t arity) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < arity; ++i) names.push_back("t" + std::to_string(i + 1));
  return names;
}

std::string to_string(const Polynomial2& f, std::span<const std::string> names) {
  if (f.is_zero()) return "0";
  std::vector<std::string> fallback;
  if (names.size() < f.arity()) {
    fallback = default_var_names(f.arity());
    names = fallback;
  }
  std::string out;
  for (const auto& m : f.terms()) {
    if (!out.empty()) out += '+';
    if (m.is_one()) {
      out += '1';
      continue;
    }
    bool first = true;
    for (std::size_t v = 0; v < f.arity(); ++v) {
      if (m.exp[v] == 0) continue;
      if (!first) out += '*';
      first = false;
      out += names[v];
      if (m.exp[v] != 1) out += '^' + std::to_string(m.exp[v]);
    }
  }
  return out;
}

}  // namespace qlform
