/// @file serialize.hpp
/// JSON forms of field presentations and elements.
///
/// Field descriptor: {"base_vars": [...], "levels": [{"theta": expr, "replaced_index": n}]}.
/// Element expression: a rational-function string at level 0, otherwise
/// {"u": expr, "v": expr} with both halves written at exactly one level
/// below, so nesting depth names the square root that `v` multiplies.
#pragma once

#include "json.hpp"
#include "qlform/tower.hpp"

namespace qlform {

using Json = nlohmann::ordered_json;

Json element_expr_json(const FieldTower& field, const FieldElement& x);
FieldElement parse_element_expr(const FieldTower& field, const Json& expr);

Json field_descriptor_json(const FieldTower& field);
Field parse_field_descriptor(const Json& descriptor, TowerCaps caps = {});

/// Rejects keys outside `allowed` with ParseError.
void require_known_keys(const Json& object, std::initializer_list<const char*> allowed, const char* what);

}  // namespace qlform
