/// @file dsl.hpp
/// Instance descriptions for the command-line front end, read either from
/// a small text language or from JSON.
///
///     field F2(t1,t2);
///     p = <1, t1, t2>;
///     q = <<t1, t2>> + t1*<1, t2/t1>;
///
/// `<...>` is a diagonal form, `<<...>>` a quasi-Pfister form expanded with
/// the last slot varying fastest, `+` the orthogonal sum and `*` scaling
/// (scalar times form) or the tensor product (form times form). Entries are
/// rational functions in the base variables. Only base fields are written
/// in this language; towers go through the JSON form.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qlform/form.hpp"

namespace qlform {

struct InstanceSpec {
  std::string command;  // empty when the caller supplies it
  Field field;
  std::optional<QuasilinearForm> p;
  std::optional<QuasilinearForm> q;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trdeg_cap;
  std::optional<std::string> out;
};

/// Throws ParseError with line and column.
InstanceSpec parse_form_dsl(std::string_view text, TowerCaps caps = {});
/// Canonical text; parse_form_dsl(print_form_dsl(s)) prints back identically.
/// Throws UsageError for fields with adjoined roots.
std::string print_form_dsl(const InstanceSpec& spec);

/// {"command", "field", "p", "q", "options": {"seed", "trdeg_cap", "out"}}
/// with p and q given as coefficient lists over "field"; every key but
/// "field" is optional and unknown keys are rejected.
Json instance_spec_json(const InstanceSpec& spec);
InstanceSpec parse_instance_spec_json(const Json& j, TowerCaps caps = {});

/// JSON when the first non-blank character is '{', the text language otherwise.
InstanceSpec parse_instance(std::string_view text, TowerCaps caps = {});

}  // namespace qlform
