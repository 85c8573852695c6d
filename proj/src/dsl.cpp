#include "qlform/dsl.hpp"

#include <variant>

#include "qlform/error.hpp"
#include "qlform/text.hpp"

namespace qlform {

namespace {

class DslParser {
 public:
  DslParser(std::string_view text, TowerCaps caps) : cur_(tokenize(text)), caps_(caps) {}

  InstanceSpec run() {
    InstanceSpec spec;
    while (!cur_.at_end()) {
      const Token head = cur_.next();
      if (head.kind != TokenKind::Ident) TokenCursor::fail_at(head, "expected a statement");
      if (head.text == "field") {
        if (spec.field) TokenCursor::fail_at(head, "field declared twice");
        spec.field = parse_field();
      } else if (head.text == "p" || head.text == "q") {
        if (!spec.field) TokenCursor::fail_at(head, "declare the field first");
        auto& slot = head.text == "p" ? spec.p : spec.q;
        if (slot) TokenCursor::fail_at(head, head.text + " assigned twice");
        cur_.expect("=");
        field_ = spec.field;
        slot = parse_sum();
      } else {
        TokenCursor::fail_at(head, "unknown statement '" + head.text + "'");
      }
      cur_.expect(";");
    }
    if (!spec.field) cur_.fail("missing field declaration");
    return spec;
  }

 private:
  using Value = std::variant<RationalFunction, QuasilinearForm>;

  Field parse_field() {
    const Token name = cur_.next();
    if (name.kind != TokenKind::Ident || name.text != "F2") TokenCursor::fail_at(name, "expected F2");
    cur_.expect("(");
    std::vector<std::string> vars;
    if (!cur_.accept(")")) {
      do {
        const Token v = cur_.next();
        if (v.kind != TokenKind::Ident) TokenCursor::fail_at(v, "expected a variable name");
        vars.push_back(v.text);
      } while (cur_.accept(","));
      cur_.expect(")");
    }
    try {
      return FieldTower::make_base_field(std::move(vars), caps_);
    } catch (const Error& e) {
      TokenCursor::fail_at(name, e.what());
    }
  }

  QuasilinearForm parse_sum() {
    QuasilinearForm acc = as_form(parse_product());
    while (cur_.accept("+")) acc = orth_sum(acc, as_form(parse_product()));
    return acc;
  }

  Value parse_product() {
    Value acc = parse_factor();
    while (cur_.accept("*")) acc = multiply(std::move(acc), parse_factor());
    return acc;
  }

  Value parse_factor() {
    const Token& t = cur_.peek();
    if (t.text == "<" || t.text == "<<") {
      const bool pfister = cur_.next().text == "<<";
      std::vector<FieldElement> entries;
      if (cur_.peek().text != (pfister ? ">>" : ">")) {
        do {
          entries.push_back(field_->from_rational(cur_.parse_rational(field_->base_vars())));
        } while (cur_.accept(","));
      }
      cur_.expect(pfister ? ">>" : ">");
      if (pfister) return QuasiPfister::make(field_, std::move(entries)).expanded;
      return QuasilinearForm(field_, std::move(entries));
    }
    if (t.text == "(" && starts_form()) {
      cur_.next();
      QuasilinearForm inner = parse_sum();
      cur_.expect(")");
      return inner;
    }
    return cur_.parse_power(field_->base_vars());
  }

  // A parenthesised form, as opposed to a parenthesised scalar.
  bool starts_form() const {
    std::size_t k = 0;
    while (cur_.peek(k).text == "(") ++k;
    return cur_.peek(k).text == "<" || cur_.peek(k).text == "<<";
  }

  Value multiply(Value a, Value b) {
    if (auto* x = std::get_if<RationalFunction>(&a)) {
      if (auto* y = std::get_if<RationalFunction>(&b)) return *x * *y;
      return scale(field_->from_rational(*x), std::get<QuasilinearForm>(b));
    }
    const auto& f = std::get<QuasilinearForm>(a);
    if (auto* y = std::get_if<RationalFunction>(&b)) return scale(field_->from_rational(*y), f);
    return tensor(f, std::get<QuasilinearForm>(b));
  }

  QuasilinearForm as_form(Value v) {
    if (auto* f = std::get_if<QuasilinearForm>(&v)) return std::move(*f);
    cur_.fail("expected a form, found a scalar");
  }

  TokenCursor cur_;
  TowerCaps caps_;
  Field field_;
};

std::string print_form(const QuasilinearForm& q) {
  const Field& f = q.field();
  std::string out = "<";
  for (std::size_t i = 0; i < q.dim(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(q.coeffs()[i].components()[0], f->base_vars());
  }
  return out + ">";
}

QuasilinearForm parse_form_on(const Json& j, const Field& field, TowerCaps caps) {
  const QuasilinearForm f = parse_form_json(j, caps);
  if (!f.field()->same_as(*field)) throw Error(ErrorCode::FieldMismatch, "form field differs from the instance field");
  return QuasilinearForm(field, f.coeffs());
}

}  // namespace

InstanceSpec parse_form_dsl(std::string_view text, TowerCaps caps) { return DslParser(text, caps).run(); }

std::string print_form_dsl(const InstanceSpec& spec) {
  if (!spec.field) throw Error(ErrorCode::UsageError, "instance has no field");
  if (spec.field->height() > 0) throw Error(ErrorCode::UsageError, "the text format only writes base fields");
  std::string out = "field F2(";
  const auto& vars = spec.field->base_vars();
  for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? "," : "") + vars[i];
  out += ");\n";
  if (spec.p) out += "p = " + print_form(*spec.p) + ";\n";
  if (spec.q) out += "q = " + print_form(*spec.q) + ";\n";
  return out;
}

Json instance_spec_json(const InstanceSpec& spec) {
  Json j = Json::object();
  if (!spec.command.empty()) j["command"] = spec.command;
  j["field"] = field_descriptor_json(*spec.field);
  if (spec.p) j["p"] = form_json(*spec.p)["coeffs"];
  if (spec.q) j["q"] = form_json(*spec.q)["coeffs"];
  Json options = Json::object();
  if (spec.seed) options["seed"] = *spec.seed;
  if (spec.trdeg_cap) options["trdeg_cap"] = *spec.trdeg_cap;
  if (spec.out) options["out"] = *spec.out;
  if (!options.empty()) j["options"] = std::move(options);
  return j;
}

InstanceSpec parse_instance_spec_json(const Json& j, TowerCaps caps) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "instance must be a JSON object");
  require_known_keys(j, {"command", "field", "p", "q", "options"}, "instance");
  InstanceSpec spec;
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (!o.is_object()) throw Error(ErrorCode::ParseError, "options must be an object");
    require_known_keys(o, {"seed", "trdeg_cap", "out"}, "options");
    try {
      if (o.contains("seed")) spec.seed = o["seed"].get<std::uint64_t>();
      if (o.contains("trdeg_cap")) spec.trdeg_cap = o["trdeg_cap"].get<std::size_t>();
      if (o.contains("out")) spec.out = o["out"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("bad option: ") + e.what());
    }
    if (spec.trdeg_cap) caps.max_trdeg = *spec.trdeg_cap;
  }
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw Error(ErrorCode::ParseError, "command must be a string");
    spec.command = j["command"].get<std::string>();
  }
  if (!j.contains("field")) throw Error(ErrorCode::ParseError, "instance needs a field");
  spec.field = parse_field_descriptor(j["field"], caps);
  for (const char* key : {"p", "q"}) {
    if (!j.contains(key)) continue;
    Json f = Json::object();
    f["field"] = j["field"];
    f["coeffs"] = j[key];
    (key[0] == 'p' ? spec.p : spec.q) = parse_form_on(f, spec.field, caps);
  }
  return spec;
}

InstanceSpec parse_instance(std::string_view text, TowerCaps caps) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    return parse_instance_spec_json(j, caps);
  }
  return parse_form_dsl(text, caps);
}

}  // namespace qlform
