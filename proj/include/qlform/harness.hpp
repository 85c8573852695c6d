/// @file harness.hpp
/// Commands behind the `qlform` tool: single-instance invariants, towers and
/// verifiers, and the seeded random suite. Everything returns JSON; the tool
/// only does I/O.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlform/cache.hpp"
#include "qlform/dsl.hpp"
#include "qlform/error.hpp"
#include "qlform/splitting.hpp"

namespace qlform {

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::size_t count = 10;
  std::size_t p_dim_min = 2, p_dim_max = 4;
  std::size_t q_dim_min = 2, q_dim_max = 4;
  std::size_t max_terms = 3;
  std::uint32_t max_deg = 3;  // total degree of each monomial
  std::size_t base_vars = 2;
  TowerCaps caps;
};

struct SuiteInstance {
  std::size_t index = 0;
  QuasilinearForm p;
  QuasilinearForm q;
};

/// Dimensions above 2^base_vars are clipped: no anisotropic form is larger.
/// Throws UsageError on empty ranges.
SuiteConfig effective_config(const SuiteConfig& config);
Json suite_config_json(const SuiteConfig& config);

/// Instance i is a function of (config, i) alone. With two or more base
/// variables instance 0 is p = q = <<t1, t2>>.
std::vector<SuiteInstance> suite_instances(const SuiteConfig& config);

struct RunOptions {
  std::size_t workers = 1;
  const ResultCache* cache = nullptr;
  SuiteConfig suite;
};

struct CommandResult {
  Json report;
  /// 0 success, 1 usage or input error, 2 a verifier failed.
  int exit_code = 0;
  /// One replayable document per failing instance.
  std::vector<Json> counterexamples;
};

inline constexpr const char* kCommands[] = {"invariants", "tower", "ffield-index", "verify", "suite", "replay"};

/// Dispatches on spec.command. Domain errors become {"error": {...}} with
/// exit code 1 rather than exceptions.
CommandResult run_command(const InstanceSpec& spec, const RunOptions& options = {});

Json random_suite(const SuiteConfig& config, const RunOptions& options, std::vector<Json>* counterexamples = nullptr);

/// The instance stored in a counterexample document (or a bare instance).
InstanceSpec replay_instance(const Json& document, TowerCaps caps = {});

/// Replaces every "elapsed_ms" and "timing" value with "<masked>".
Json mask_timing(Json report);

/// Plain-text rendering of any report.
std::string render_table(const Json& report);

Json error_json(ErrorCode code, const std::string& message);

}  // namespace qlform
