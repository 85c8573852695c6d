#include "qlform/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "qlform/error.hpp"

namespace qlform {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Modular reduction keeps the stream identical across standard libraries,
// unlike std::uniform_int_distribution.
class InstanceRng {
 public:
  InstanceRng(std::uint64_t seed, std::size_t index) : engine_(splitmix64(seed ^ splitmix64(index))) {}
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

Polynomial2 random_poly(InstanceRng& rng, const SuiteConfig& c) {
  for (;;) {
    std::vector<Monomial> terms;
    const std::size_t n = rng.between(1, c.max_terms);
    while (terms.size() < n) {
      Monomial m{};
      std::uint32_t total = 0;
      for (std::size_t v = 0; v < c.base_vars; ++v) {
        m.exp[v] = static_cast<std::uint16_t>(rng.below(c.max_deg + 1));
        total += m.exp[v];
      }
      if (total <= c.max_deg) terms.push_back(m);
    }
    Polynomial2 f = Polynomial2::from_terms(c.base_vars, std::move(terms));
    if (!f.is_zero()) return f;
  }
}

// Rejection sampling; the attempt bound only guards degenerate budgets.
QuasilinearForm random_anisotropic(InstanceRng& rng, const SuiteConfig& c, const Field& k, std::size_t lo,
                                   std::size_t hi) {
  constexpr int kAttempts = 10000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::size_t dim = rng.between(lo, hi);
    std::vector<FieldElement> coeffs;
    for (std::size_t i = 0; i < dim; ++i) coeffs.push_back(k->from_rational(RationalFunction(random_poly(rng, c))));
    QuasilinearForm q(k, std::move(coeffs));
    if (is_anisotropic(q)) return q;
  }
  throw Error(ErrorCode::UsageError, "coefficient budget yields no anisotropic forms");
}

Field suite_field(const SuiteConfig& c) {
  std::vector<std::string> vars;
  for (std::size_t v = 1; v <= c.base_vars; ++v) vars.push_back("t" + std::to_string(v));
  return FieldTower::make_base_field(std::move(vars), c.caps);
}

Json coeffs_json(const QuasilinearForm& q) { return form_json(q)["coeffs"]; }

Json verify_key(const QuasilinearForm& p, const QuasilinearForm& q) {
  return Json{{"command", "verify"}, {"field", field_descriptor_json(*p.field())}, {"p", coeffs_json(p)},
              {"q", coeffs_json(q)}};
}

Json counterexample(const QuasilinearForm& p, const QuasilinearForm& q, const Json& report) {
  InstanceSpec spec;
  spec.command = "verify";
  spec.field = p.field();
  spec.p = p;
  spec.q = q;
  return Json{{"instance", instance_spec_json(spec)}, {"report", report}};
}

const char* status_of(bool pass) { return pass ? "PASS" : "FAIL"; }

// The timing-free part of one suite record.
Json verify_record(const QuasilinearForm& p, const QuasilinearForm& q, const ResultCache* cache, bool* failed) {
  const Json key = verify_key(p, q);
  if (cache) {
    if (auto hit = cache->get(key)) {
      *failed = (*hit)["status"] == "FAIL";
      return *hit;
    }
  }
  Json rec = Json::object();
  try {
    const BoundReport r = verify_all(p, q);
    const Json full = bound_report_json(r);
    rec["status"] = status_of(r.all_pass());
    rec["quantities"] = full["quantities"];
    Json verdicts = Json::object();
    Json tight = Json::array();
    for (const auto& [name, v] : r.verdicts) {
      verdicts[name] = status_of(v.pass);
      if (v.tight) tight.push_back(name);
    }
    rec["verdicts"] = std::move(verdicts);
    rec["tight"] = std::move(tight);
    if (!r.all_pass()) rec["report"] = full;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CapExceeded) throw;
    rec["status"] = "SKIPPED";
    rec["error"] = error_json(e.code(), e.what())["error"];
  }
  *failed = rec["status"] == "FAIL";
  if (cache) cache->put(key, rec);
  return rec;
}

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const auto i = static_cast<std::size_t>(q * static_cast<double>(xs.size() - 1) + 0.5);
  return xs[std::min(i, xs.size() - 1)];
}

const QuasilinearForm& require_form(const std::optional<QuasilinearForm>& f, const char* name) {
  if (!f) throw Error(ErrorCode::UsageError, std::string("instance needs form ") + name);
  return *f;
}

// q when given, otherwise p.
const QuasilinearForm& subject(const InstanceSpec& spec) {
  if (spec.q) return *spec.q;
  return require_form(spec.p, "q");
}

Json invariants_report(const QuasilinearForm& q) {
  Json j = Json::object();
  j["form"] = form_json(q);
  j["dim"] = q.dim();
  j["i0"] = isotropy_index(q);
  const QuasilinearForm an = anisotropic_part(q);
  j["dim_an"] = an.dim();
  j["q_an"] = coeffs_json(an);
  const NormForm nf = norm_form(q);
  j["lndeg"] = nf.lndeg;
  j["norm_form"] = coeffs_json(QuasilinearForm(q.field(), nf.form.slots));
  const Divisibility d = divisibility_index(q);
  j["d0"] = d.index;
  j["g_dim"] = std::size_t{1} << d.index;
  j["divisor"] = coeffs_json(QuasilinearForm(q.field(), d.witness.slots));
  return j;
}

CommandResult dispatch(const InstanceSpec& spec, const RunOptions& options) {
  CommandResult out;
  const std::string& cmd = spec.command;
  Json body;
  if (cmd == "suite") {
    SuiteConfig config = options.suite;
    if (spec.seed) config.seed = *spec.seed;
    if (spec.trdeg_cap) config.caps.max_trdeg = *spec.trdeg_cap;
    out.report = random_suite(config, options, &out.counterexamples);
    out.exit_code = out.counterexamples.empty() ? 0 : 2;
    return out;
  }

  if (std::find(std::begin(kCommands), std::end(kCommands), cmd) == std::end(kCommands) || cmd == "replay") {
    throw Error(ErrorCode::UsageError, "unknown command '" + cmd + "'");
  }
  InstanceSpec bare = spec;
  bare.seed.reset();
  bare.out.reset();
  const Json key = instance_spec_json(bare);
  if (options.cache) {
    if (auto hit = options.cache->get(key)) {
      out.report = *hit;
      if (cmd == "verify" && out.report["status"] == "FAIL") {
        out.exit_code = 2;
        out.counterexamples.push_back(counterexample(*spec.p, *spec.q, out.report));
      }
      return out;
    }
  }

  if (cmd == "invariants") {
    body = invariants_report(subject(spec));
  } else if (cmd == "tower") {
    const QuasilinearForm& q = subject(spec);
    const TowerReport t = knebusch_tower(q);
    body = tower_report_json(t);
    if (t.height() > 0) body["s"] = higher_invariants(t).s;
  } else if (cmd == "ffield-index") {
    const QuasilinearForm& p = require_form(spec.p, "p");
    const QuasilinearForm& q = require_form(spec.q, "q");
    const FunctionFieldPresentation ff = function_field(p);
    body["i0_qFp"] = isotropy_index(extend_scalars(q, ff.result));
    body["function_field"] = field_descriptor_json(*ff.result);
  } else {
    const QuasilinearForm& p = require_form(spec.p, "p");
    const QuasilinearForm& q = require_form(spec.q, "q");
    const BoundReport r = verify_all(p, q);
    body["status"] = status_of(r.all_pass());
    const Json full = bound_report_json(r);
    for (const auto& [k, v] : full.items()) body[k] = v;
    if (!r.all_pass()) {
      out.exit_code = 2;
      out.counterexamples.push_back(counterexample(p, q, body));
    }
  }
  out.report = Json{{"command", cmd}};
  for (auto& [k, v] : body.items()) out.report[k] = v;
  if (options.cache) options.cache->put(key, out.report);
  return out;
}

}  // namespace

SuiteConfig effective_config(const SuiteConfig& config) {
  SuiteConfig c = config;
  if (c.base_vars > kMaxVars) throw Error(ErrorCode::UsageError, "too many base variables");
  if (c.max_terms == 0) throw Error(ErrorCode::UsageError, "max_terms must be positive");
  const std::size_t cap = std::size_t{1} << c.base_vars;
  c.p_dim_max = std::min(c.p_dim_max, cap);
  c.q_dim_max = std::min(c.q_dim_max, cap);
  if (c.p_dim_min < 2 || c.q_dim_min < 2) throw Error(ErrorCode::UsageError, "dimensions start at 2");
  if (c.p_dim_min > c.p_dim_max || c.q_dim_min > c.q_dim_max) {
    throw Error(ErrorCode::UsageError, "dimension range is empty after clipping to 2^base_vars = " +
                                           std::to_string(cap));
  }
  return c;
}

Json suite_config_json(const SuiteConfig& config) {
  return Json{{"seed", config.seed},
              {"count", config.count},
              {"p_dims", Json::array({config.p_dim_min, config.p_dim_max})},
              {"q_dims", Json::array({config.q_dim_min, config.q_dim_max})},
              {"max_terms", config.max_terms},
              {"max_deg", config.max_deg},
              {"base_vars", config.base_vars},
              {"trdeg_cap", config.caps.max_trdeg}};
}

std::vector<SuiteInstance> suite_instances(const SuiteConfig& config) {
  const SuiteConfig c = effective_config(config);
  std::vector<SuiteInstance> out;
  if (c.count == 0) return out;
  const Field k = suite_field(c);
  std::size_t first = 0;
  if (c.base_vars >= 2) {
    const QuasilinearForm pi = QuasiPfister::make(k, {k->variable(0), k->variable(1)}).expanded;
    out.push_back({0, pi, pi});
    first = 1;
  }
  for (std::size_t i = first; i < c.count; ++i) {
    InstanceRng rng(c.seed, i);
    QuasilinearForm p = random_anisotropic(rng, c, k, c.p_dim_min, c.p_dim_max);
    QuasilinearForm q = random_anisotropic(rng, c, k, c.q_dim_min, c.q_dim_max);
    out.push_back({i, std::move(p), std::move(q)});
  }
  return out;
}

Json random_suite(const SuiteConfig& config, const RunOptions& options, std::vector<Json>* counterexamples) {
  const auto start = Clock::now();
  const SuiteConfig c = effective_config(config);
  const std::vector<SuiteInstance> instances = suite_instances(c);

  std::vector<Json> records(instances.size());
  std::vector<double> elapsed(instances.size(), 0.0);
  std::vector<char> failed(instances.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < instances.size();) {
      const auto t0 = Clock::now();
      try {
        bool f = false;
        records[i] = verify_record(instances[i].p, instances[i].q, options.cache, &f);
        failed[i] = f;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
      elapsed[i] = ms_since(t0);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, instances.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);

  Json list = Json::array();
  std::size_t pass = 0, fail = 0, skipped = 0;
  Json tight = Json{{"kmt", 0}, {"main", 0}, {"refined", 0}, {"d1", 0}};
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Json rec = Json{{"index", instances[i].index},
                    {"p", coeffs_json(instances[i].p)},
                    {"q", coeffs_json(instances[i].q)}};
    for (auto& [k, v] : records[i].items()) rec[k] = v;
    const std::string status = rec["status"];
    if (status == "PASS") ++pass;
    if (status == "FAIL") ++fail;
    if (status == "SKIPPED") ++skipped;
    if (rec.contains("tight")) {
      for (const auto& name : rec["tight"]) {
        const std::string n = name;
        if (tight.contains(n)) tight[n] = tight[n].get<std::size_t>() + 1;
      }
    }
    if (failed[i] && counterexamples) {
      counterexamples->push_back(counterexample(instances[i].p, instances[i].q, rec));
    }
    list.push_back(std::move(rec));
  }

  Json report = Json::object();
  report["command"] = "suite";
  report["config"] = suite_config_json(c);
  report["field"] = field_descriptor_json(*suite_field(c));
  report["summary"] = Json{{"count", instances.size()}, {"pass", pass},          {"fail", fail},
                           {"skipped_cap", skipped},    {"tight", tight}, {"digest", sha256_hex(list.dump())}};
  for (std::size_t i = 0; i < list.size(); ++i) list[i]["elapsed_ms"] = elapsed[i];
  report["instances"] = std::move(list);
  report["timing"] = Json{{"workers", workers},
                          {"total_ms", ms_since(start)},
                          {"p50_ms", percentile(elapsed, 0.5)},
                          {"p90_ms", percentile(elapsed, 0.9)},
                          {"max_ms", percentile(elapsed, 1.0)}};
  return report;
}

CommandResult run_command(const InstanceSpec& spec, const RunOptions& options) {
  try {
    return dispatch(spec, options);
  } catch (const Error& e) {
    CommandResult out;
    out.report = Json{{"command", spec.command}};
    out.report["error"] = error_json(e.code(), e.what())["error"];
    out.exit_code = 1;
    return out;
  }
}

InstanceSpec replay_instance(const Json& document, TowerCaps caps) {
  if (document.is_object() && document.contains("instance")) {
    InstanceSpec spec = parse_instance_spec_json(document["instance"], caps);
    if (spec.command.empty()) spec.command = "verify";
    return spec;
  }
  InstanceSpec spec = parse_instance_spec_json(document, caps);
  if (spec.command.empty()) spec.command = "verify";
  return spec;
}

Json mask_timing(Json report) {
  if (report.is_object()) {
    for (auto& [k, v] : report.items()) {
      if (k == "elapsed_ms" || k == "timing") {
        v = "<masked>";
      } else {
        v = mask_timing(std::move(v));
      }
    }
  } else if (report.is_array()) {
    for (auto& v : report) v = mask_timing(std::move(v));
  }
  return report;
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_table(const Json& report) {
  std::ostringstream out;
  if (report.value("command", "") == "suite" && report.contains("instances")) {
    out << pad("index", 7) << pad("dim_p", 7) << pad("dim_q", 7) << pad("status", 9) << pad("i0", 5) << "tight\n";
    for (const auto& rec : report["instances"]) {
      std::string i0 = "-", tight;
      if (rec.contains("quantities")) i0 = rec["quantities"]["i0_qFp"].dump();
      if (rec.contains("tight")) {
        for (const auto& t : rec["tight"]) tight += (tight.empty() ? "" : ",") + t.get<std::string>();
      }
      out << pad(rec["index"].dump(), 7) << pad(std::to_string(rec["p"].size()), 7)
          << pad(std::to_string(rec["q"].size()), 7) << pad(rec["status"].get<std::string>(), 9) << pad(i0, 5)
          << tight << "\n";
    }
    Json rest = report;
    rest.erase("instances");
    out << "\n" << render_table(rest);
    return out.str();
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) out << pad(k, width + 2) << v << "\n";
  return out.str();
}

Json error_json(ErrorCode code, const std::string& message) {
  return Json{{"error", Json{{"code", std::string(error_code_name(code))}, {"message", message}}}};
}

}  // namespace qlform
