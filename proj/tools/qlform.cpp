// qlform: invariants, splitting towers and bound verifiers for quasilinear
// quadratic forms in characteristic 2.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "qlform/harness.hpp"

namespace {

using namespace qlform;

std::string read_all(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UsageError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw Error(ErrorCode::UsageError, "cannot write " + path);
}

// "2-4" or "3".
std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  const auto dash = s.find('-');
  try {
    if (dash == std::string::npos) {
      const std::size_t v = std::stoul(s);
      return {v, v};
    }
    return {std::stoul(s.substr(0, dash)), std::stoul(s.substr(dash + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::UsageError, "bad range '" + s + "'");
  }
}

std::string render(const Json& report, const std::string& format) {
  return format == "table" ? render_table(report) : report.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants and bound verifiers for quasilinear quadratic forms over F2(t1,...,tn)"};
  std::string command, positional_file, input, format = "json", out, p_dims, q_dims;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trdeg_cap;
  SuiteConfig suite;
  std::size_t workers = 1;

  std::vector<std::string> commands(std::begin(kCommands), std::end(kCommands));
  app.add_option("command", command, "One of: invariants, tower, ffield-index, verify, suite, replay")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("file", positional_file, "Counterexample file for replay, or the instance file");
  app.add_option("--input,-i", input, "Instance file in the text language or JSON; '-' reads stdin");
  app.add_option("--seed", seed, "Suite seed");
  app.add_option("--count", suite.count, "Suite size")->capture_default_str();
  app.add_option("--trdeg-cap", trdeg_cap, "Cap on the transcendence degree of generated fields");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  app.add_option("--out,-o", out, "Write the report here instead of stdout");
  app.add_option("--workers,-j", workers, "Suite worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--p-dims", p_dims, "Suite dimension range for p, e.g. 2-4");
  app.add_option("--q-dims", q_dims, "Suite dimension range for q, e.g. 2-4");
  app.add_option("--max-terms", suite.max_terms, "Suite terms per coefficient")->capture_default_str();
  app.add_option("--max-deg", suite.max_deg, "Suite total degree per monomial")->capture_default_str();
  app.add_option("--base-vars", suite.base_vars, "Suite base variable count")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    TowerCaps caps;
    if (trdeg_cap) caps.max_trdeg = *trdeg_cap;
    if (!p_dims.empty()) std::tie(suite.p_dim_min, suite.p_dim_max) = parse_range(p_dims);
    if (!q_dims.empty()) std::tie(suite.q_dim_min, suite.q_dim_max) = parse_range(q_dims);

    const std::string file = input.empty() ? positional_file : input;
    InstanceSpec spec;
    if (command == "replay") {
      if (file.empty()) throw Error(ErrorCode::UsageError, "replay needs a counterexample file");
      const std::string text = read_all(file);
      const Json doc = Json::parse(text, nullptr, false);
      if (doc.is_discarded()) throw Error(ErrorCode::ParseError, file + " is not JSON");
      spec = replay_instance(doc, caps);
      spec.command = "verify";
    } else if (command == "suite") {
      if (!file.empty()) {
        spec = parse_instance(read_all(file), caps);
      }
      spec.command = "suite";
    } else {
      if (file.empty()) throw Error(ErrorCode::UsageError, command + " needs --input");
      spec = parse_instance(read_all(file), caps);
      spec.command = command;
    }
    if (seed) spec.seed = seed;
    if (trdeg_cap) spec.trdeg_cap = trdeg_cap;
    if (!out.empty()) spec.out = out;
    if (spec.trdeg_cap) suite.caps.max_trdeg = *spec.trdeg_cap;

    const std::optional<ResultCache> cache = ResultCache::from_env();
    RunOptions options;
    options.workers = workers;
    options.cache = cache ? &*cache : nullptr;
    options.suite = suite;
    const CommandResult result = run_command(spec, options);

    const std::string text = render(result.report, format);
    if (spec.out) {
      write_file(*spec.out, text);
    } else {
      std::cout << text;
    }
    const std::string stem = spec.out ? *spec.out : std::string("qlform");
    for (std::size_t k = 0; k < result.counterexamples.size(); ++k) {
      const std::string path = stem + ".counterexample" +
                               (result.counterexamples.size() > 1 ? "-" + std::to_string(k) : "") + ".json";
      write_file(path, result.counterexamples[k].dump(2) + "\n");
      std::cerr << "counterexample written to " << path << "\n";
    }
    return result.exit_code;
  } catch (const Error& e) {
    Json err = error_json(e.code(), e.what());
    err["command"] = command;
    std::cout << render(err, format);
    return 1;
  }
}
