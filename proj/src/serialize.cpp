#include "qlform/serialize.hpp"

#include <algorithm>

#include "qlform/error.hpp"
#include "qlform/text.hpp"

namespace qlform {

namespace {

Json expr_of(const FieldTower& field, std::span<const RationalFunction> comps, std::size_t depth) {
  if (depth == 0) {
    return comps.empty() ? Json("0") : Json(to_string(comps[0], field.base_vars()));
  }
  const std::size_t half = std::size_t{1} << (depth - 1);
  auto lo = comps.size() > half ? comps.first(half) : comps;
  auto hi = comps.size() > half ? comps.subspan(half) : std::span<const RationalFunction>{};
  Json j = Json::object();
  j["u"] = expr_of(field, lo, depth - 1);
  j["v"] = expr_of(field, hi, depth - 1);
  return j;
}

std::vector<RationalFunction> parse_comps(const FieldTower& field, const Json& expr, std::size_t& depth) {
  if (expr.is_string()) {
    depth = 0;
    return {parse_rational(expr.get<std::string>(), field.base_vars())};
  }
  if (!expr.is_object() || !expr.contains("u") || !expr.contains("v")) {
    throw Error(ErrorCode::ParseError, "element expression must be a string or a {u, v} object");
  }
  require_known_keys(expr, {"u", "v"}, "element expression");
  std::size_t du = 0, dv = 0;
  auto u = parse_comps(field, expr["u"], du);
  auto v = parse_comps(field, expr["v"], dv);
  if (du != dv) throw Error(ErrorCode::ParseError, "element expression halves have different depths");
  depth = du + 1;
  u.insert(u.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return u;
}

}  // namespace

void require_known_keys(const Json& object, std::initializer_list<const char*> allowed, const char* what) {
  if (!object.is_object()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : object.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in " + what);
    }
  }
}

Json element_expr_json(const FieldTower& field, const FieldElement& x) {
  return expr_of(field, x.components(), x.level());
}

FieldElement parse_element_expr(const FieldTower& field, const Json& expr) {
  std::size_t depth = 0;
  auto comps = parse_comps(field, expr, depth);
  if (depth > field.height()) throw Error(ErrorCode::ParseError, "element expression deeper than the tower");
  return FieldElement(std::move(comps));
}

Json field_descriptor_json(const FieldTower& field) {
  Json j = Json::object();
  j["base_vars"] = field.base_vars();
  Json levels = Json::array();
  for (const auto& lvl : field.levels()) {
    Json l = Json::object();
    l["theta"] = element_expr_json(field, lvl.theta);
    l["replaced_index"] = lvl.replaced_index;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j;
}

Field parse_field_descriptor(const Json& descriptor, TowerCaps caps) {
  require_known_keys(descriptor, {"base_vars", "levels"}, "field descriptor");
  if (!descriptor.contains("base_vars") || !descriptor["base_vars"].is_array()) {
    throw Error(ErrorCode::ParseError, "field descriptor needs a base_vars array");
  }
  std::vector<std::string> vars;
  for (const auto& v : descriptor["base_vars"]) {
    if (!v.is_string()) throw Error(ErrorCode::ParseError, "base_vars entries must be strings");
    vars.push_back(v.get<std::string>());
  }
  Field f = FieldTower::make_base_field(std::move(vars), caps);
  if (!descriptor.contains("levels")) return f;
  for (const auto& l : descriptor["levels"]) {
    require_known_keys(l, {"theta", "replaced_index"}, "level");
    if (!l.contains("theta")) throw Error(ErrorCode::ParseError, "level without theta");
    f = f->adjoin_sqrt(parse_element_expr(*f, l["theta"]));
    if (l.contains("replaced_index") && l["replaced_index"].get<std::size_t>() != f->levels().back().replaced_index) {
      throw Error(ErrorCode::ParseError, "replaced_index disagrees with the replacement rule");
    }
  }
  return f;
}

}  // namespace qlform
