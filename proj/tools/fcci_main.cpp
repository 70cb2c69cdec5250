// Command-line driver: check / elaborate / run / resolve.
//
// Results go to stdout; diagnostics go to stderr, either human-readable or,
// with --json, as one JSON object per line with a fixed field order.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcci/fcci.hpp"

namespace {

using nlohmann::ordered_json;

struct RunConfig {
  std::string input;
  int limit = 64;
  long long fuel = 1000000;
  bool json = false;
  bool trace = false;
  bool all_minimal = false;
  bool emit_core = false;
  std::string context_file;
  std::string from_text;
  std::string to_text;
};

ordered_json span_json(const fcci::Diagnostic& d) {
  ordered_json s;
  s["file"] = d.file;
  s["line"] = d.span.line;
  s["col"] = d.span.col;
  s["endLine"] = d.span.end_line;
  s["endCol"] = d.span.end_col;
  return s;
}

void print_diagnostic(const fcci::Diagnostic& d, bool as_json) {
  if (as_json) {
    ordered_json j;
    j["severity"] = d.severity == fcci::Severity::Error ? "error" : "warning";
    j["code"] = d.code;
    j["message"] = d.message;
    j["span"] = span_json(d);
    ordered_json notes = ordered_json::array();
    for (const auto& n : d.notes) {
      ordered_json note;
      note["message"] = n.message;
      notes.push_back(note);
    }
    j["notes"] = notes;
    j["witnesses"] = d.witnesses;
    std::cerr << j.dump() << "\n";
    return;
  }
  std::cerr << (d.severity == fcci::Severity::Error ? "error" : "warning")
            << "[" << d.code << "]";
  if (!d.file.empty()) {
    std::cerr << " " << d.file;
    if (d.span.valid())
      std::cerr << ":" << d.span.line << ":" << d.span.col;
  }
  std::cerr << ": " << d.message << "\n";
  for (const auto& n : d.notes) std::cerr << "  note: " << n.message << "\n";
  for (const auto& w : d.witnesses) std::cerr << "  witness: " << w << "\n";
}

int fail(fcci::Diagnostic d, const RunConfig& cfg) {
  if (d.file.empty()) d.file = cfg.input;
  print_diagnostic(d, cfg.json);
  return fcci::exit_code_for(d.code);
}

fcci::Result<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return fcci::make_error("E501", "cannot read input file `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CheckedProgram {
  fcci::TermPtr term;
  fcci::TypedTerm typed;
};

// Parse + typecheck the input file; on failure the diagnostic is already
// printed and the exit code returned through `status`.
std::optional<CheckedProgram> check_input(const RunConfig& cfg, int& status) {
  auto text = read_file(cfg.input);
  if (!text.ok()) {
    status = fail(text.error(), cfg);
    return std::nullopt;
  }
  auto unit = fcci::parse_unit(text.value(), cfg.input);
  if (!unit.ok()) {
    status = fail(unit.error(), cfg);
    return std::nullopt;
  }
  fcci::TypeOptions topts;
  topts.limit = cfg.limit;
  fcci::Context empty;
  auto typed = fcci::type_of(empty, unit.value().body, topts);
  if (!typed.ok()) {
    status = fail(typed.error(), cfg);
    return std::nullopt;
  }
  if (cfg.trace) {
    for (const auto& [node, witness] : typed.value().resolutions) {
      (void)node;
      std::cerr << fcci::render_derivation(witness.derivation, empty);
    }
  }
  return CheckedProgram{unit.value().body, std::move(typed.value())};
}

int cmd_check(const RunConfig& cfg) {
  int status = 0;
  auto checked = check_input(cfg, status);
  if (!checked) return status;
  std::cout << fcci::pretty_type(checked->typed.type) << "\n";
  return 0;
}

int cmd_elaborate(const RunConfig& cfg) {
  int status = 0;
  auto checked = check_input(cfg, status);
  if (!checked) return status;
  fcci::TermPtr core = fcci::elaborate_unit(checked->typed);
  std::cout << fcci::pretty_term(core) << "\n";
  return 0;
}

int cmd_run(const RunConfig& cfg) {
  int status = 0;
  auto checked = check_input(cfg, status);
  if (!checked) return status;
  fcci::TermPtr core = fcci::elaborate_unit(checked->typed);
  if (cfg.emit_core) std::cout << fcci::pretty_term(core) << "\n";
  fcci::EvalOptions eopts;
  eopts.fuel = cfg.fuel;
  auto value = fcci::evaluate(core, eopts);
  if (!value.ok()) return fail(value.error(), cfg);
  std::cout << fcci::render_value(value.value()) << "\n";
  return 0;
}

int cmd_resolve(const RunConfig& cfg) {
  fcci::Context ctx;
  if (!cfg.context_file.empty()) {
    auto text = read_file(cfg.context_file);
    if (!text.ok()) return fail(text.error(), cfg);
    auto parsed = fcci::parse_context_text(text.value(), cfg.context_file);
    if (!parsed.ok()) return fail(parsed.error(), cfg);
    ctx = std::move(parsed.value());
  }
  if (auto bad = fcci::ctx_check(ctx)) return fail(*bad, cfg);
  fcci::ParseScope scope = fcci::ParseScope::of_context(ctx);

  auto parse_goal_type = [&](const std::string& text, const char* what)
      -> fcci::Result<fcci::TypePtr> {
    auto t = fcci::parse_type_text(text, scope, what);
    if (!t.ok()) return t.error();
    auto k = fcci::kind_of(ctx, t.value());
    if (!k.ok()) return k.error();
    if (!std::holds_alternative<fcci::KStar>(k.value()->node))
      return fcci::make_error("E101",
                              std::string(what) + " type must have kind *, got " +
                                  fcci::kind_to_string(k.value()));
    return fcci::normalize_type(t.value());
  };

  auto to = parse_goal_type(cfg.to_text, "--to");
  if (!to.ok()) return fail(to.error(), cfg);
  std::optional<fcci::TypePtr> from;
  if (!cfg.from_text.empty()) {
    auto f = parse_goal_type(cfg.from_text, "--from");
    if (!f.ok()) return fail(f.error(), cfg);
    from = f.value();
  }

  fcci::SolveOptions sopts;
  sopts.limit = cfg.limit;
  fcci::SolveResult res = fcci::solve(ctx, from, to.value(), sopts);

  auto [ty_names, tm_names] = fcci::context_display_names(ctx);
  auto goal_text = [&] {
    std::string s;
    if (from) s += fcci::pretty_type(*from, ty_names) + " ~> ";
    s += fcci::pretty_type(to.value(), ty_names);
    return s;
  };
  auto show = [&](const fcci::Witness& w) {
    std::cout << fcci::pretty_term(w.term, ty_names, tm_names) << "\n";
    if (cfg.trace) std::cerr << fcci::render_derivation(w.derivation, ctx);
  };

  switch (res.kind) {
    case fcci::SolveResult::Kind::Unique:
      show(res.witnesses.front());
      return 0;
    case fcci::SolveResult::Kind::Ambiguous: {
      if (cfg.all_minimal)
        for (const auto& w : res.witnesses) show(w);
      fcci::Diagnostic d = fcci::make_error(
          "E302", "ambiguous implicit resolution for " + goal_text() + ": " +
                      std::to_string(res.witnesses.size()) +
                      " minimal witnesses of measure " +
                      std::to_string(res.witnesses.front().measure));
      for (const auto& w : res.witnesses)
        d.witnesses.push_back(fcci::pretty_term(w.term, ty_names, tm_names));
      return fail(d, cfg);
    }
    case fcci::SolveResult::Kind::NotDerivable:
      return fail(fcci::make_error(
                      "E301", "no implicit witness for " + goal_text()),
                  cfg);
    case fcci::SolveResult::Kind::Exhausted:
      return fail(fcci::make_error(
                      "E303", "implicit resolution for " + goal_text() +
                                  " found no witness within measure limit " +
                                  std::to_string(res.limit) +
                                  " and some branch was cut by the bound"),
                  cfg);
    case fcci::SolveResult::Kind::Incomplete:
      return fail(fcci::make_error("E304",
                                   "implicit resolution for " + goal_text() +
                                       " is incomplete: " + res.reason),
                  cfg);
  }
  return 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typechecker, elaborator, evaluator, and implicit-resolution "
               "engine for a small calculus of contextual implicits"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub, bool with_input) {
    if (with_input)
      sub->add_option("input", cfg.input, "input .fcci file")->required();
    sub->add_option("--limit", cfg.limit, "resolution measure bound")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--json", cfg.json, "render diagnostics as JSON lines");
    sub->add_flag("--trace", cfg.trace, "dump resolution derivation trees");
  };

  CLI::App* check = app.add_subcommand("check", "typecheck a program");
  add_common(check, true);

  CLI::App* elaborate =
      app.add_subcommand("elaborate", "typecheck and print the core term");
  add_common(elaborate, true);
  elaborate->add_flag("--emit-core", cfg.emit_core,
                      "print the core term (default for this command)");

  CLI::App* run = app.add_subcommand("run", "typecheck, elaborate, evaluate");
  add_common(run, true);
  run->add_option("--fuel", cfg.fuel, "evaluation step budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_flag("--emit-core", cfg.emit_core,
                "also print the core term before the value");

  CLI::App* resolve =
      app.add_subcommand("resolve", "run a standalone resolution query");
  resolve->add_option("--context", cfg.context_file,
                      "context file with binding declarations");
  resolve->add_option("--from", cfg.from_text,
                      "source type (omit for pure entailment of --to)");
  resolve->add_option("--to", cfg.to_text, "target type")->required();
  resolve->add_option("--limit", cfg.limit, "resolution measure bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  resolve->add_flag("--json", cfg.json, "render diagnostics as JSON lines");
  resolve->add_flag("--trace", cfg.trace, "dump resolution derivation trees");
  resolve->add_flag("--all-minimal", cfg.all_minimal,
                    "print every minimal witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      app.exit(e);
      return 0;
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 5;
  }

  try {
    if (check->parsed()) return cmd_check(cfg);
    if (elaborate->parsed()) return cmd_elaborate(cfg);
    if (run->parsed()) return cmd_run(cfg);
    if (resolve->parsed()) return cmd_resolve(cfg);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}
