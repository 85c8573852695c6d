#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>
#include <sys/wait.h>

#include "qlform/error.hpp"
#include "qlform/form.hpp"
#include "qlform/harness.hpp"
#include "qlform/text.hpp"

namespace qlform::testing {

// The code of the Error thrown by f; InternalInconsistency if none is.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalInconsistency;
}

struct ToolRun {
  int exit_code = -1;
  std::string out;
};

// Runs the qlform binary with the cache disabled; stderr is dropped.
inline ToolRun run_tool(const std::string& bin, const std::string& args) {
  const std::string cmd = "env -u QLFORM_CACHE_DIR " + bin + " " + args + " 2>/dev/null";
  ToolRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string masked(const std::string& json_text) {
  return mask_timing(Json::parse(json_text)).dump(2) + "\n";
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Field base(std::vector<std::string> vars) { return FieldTower::make_base_field(std::move(vars)); }

inline FieldElement el(const Field& f, std::string_view text) {
  return f->from_rational(parse_rational(text, f->base_vars()));
}

inline QuasilinearForm form(const Field& f, std::vector<std::string_view> coeffs) {
  std::vector<FieldElement> c;
  for (auto s : coeffs) c.push_back(el(f, s));
  return QuasilinearForm(f, std::move(c));
}

inline QuasiPfister pfister(const Field& f, std::vector<std::string_view> slots) {
  std::vector<FieldElement> c;
  for (auto s : slots) c.push_back(el(f, s));
  return QuasiPfister::make(f, std::move(c));
}

inline bool same_values(const QuasilinearForm& a, const QuasilinearForm& b) {
  return subform_up_to_iso(a, b) && subform_up_to_iso(b, a);
}

// Seeded generator of small random polynomials and rational functions.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 1; }

  Polynomial2 poly(std::size_t arity, std::size_t max_terms, std::uint32_t max_deg) {
    std::vector<Monomial> terms;
    const std::size_t n = 1 + below(max_terms);
    for (std::size_t k = 0; k < n; ++k) {
      Monomial m{};
      for (std::size_t v = 0; v < arity; ++v) m.exp[v] = static_cast<std::uint16_t>(below(max_deg + 1));
      terms.push_back(m);
    }
    return Polynomial2::from_terms(arity, std::move(terms));
  }

  Polynomial2 nonzero_poly(std::size_t arity, std::size_t max_terms, std::uint32_t max_deg) {
    for (;;) {
      Polynomial2 p = poly(arity, max_terms, max_deg);
      if (!p.is_zero()) return p;
    }
  }

  RationalFunction rational(std::size_t arity, std::size_t max_terms, std::uint32_t max_deg) {
    return RationalFunction(poly(arity, max_terms, max_deg), nonzero_poly(arity, max_terms, max_deg));
  }

  // Random element of any level of `f`.
  FieldElement element(const Field& f, std::size_t max_terms = 2, std::uint32_t max_deg = 2) {
    FieldElement x = f->from_rational(rational(f->trdeg(), max_terms, max_deg));
    for (std::size_t l = 1; l <= f->height(); ++l) {
      if (coin()) {
        const FieldElement c = f->from_rational(rational(f->trdeg(), max_terms, max_deg));
        x = f->add(x, f->mul(c, f->root(l)));
      }
    }
    return x;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qlform::testing
