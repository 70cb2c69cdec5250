// End-to-end checks of the command-line driver: subcommands, exit codes,
// stdout/stderr split, JSON diagnostics, and output stability.

#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "support.hpp"

#ifdef FCCI_BIN_PATH

using support::run_cli;
using support::write_file;

namespace {

const char* kSummon = "let [y : Int] = 7 in (/\\[a]. \\[x:a]. x) :: Int\n";
const char* kAmb =
    "let [y:Int] = 7 in let [z:Int] = 8 in (/\\[a]. \\[x:a]. x) :: Int\n";
const char* kFormErr = "(\\(f:Int -> Int). f [3]) (\\(x:Int). x)\n";
const char* kSlsi =
    "(S : * -> *), (L : * -> *)\n[si : S Int]\n[sl : forall [b]. S b => S (L b)]\n";
const char* kTwo = "[a : Int], [b : Int]\n";
const char* kY = "[y : Int]\n";
const char* kNp = "[hf : forall [f : * -> *]. f Int]\n";

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("check prints the type on stdout") {
  auto f = write_file("cli_summon.fcci", kSummon);
  auto r = run_cli("check " + q(f));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Int\n");
  CHECK(r.err.empty());
}

TEST_CASE("ambiguous resolution exits 2 and lists the witnesses") {
  auto f = write_file("cli_amb.fcci", kAmb);
  auto r = run_cli("check " + q(f));
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("E302") != std::string::npos);
  CHECK(r.err.find("y") != std::string::npos);
  CHECK(r.err.find("z") != std::string::npos);
}

TEST_CASE("a form mismatch is a plain type error with exit 1") {
  auto f = write_file("cli_form.fcci", kFormErr);
  auto r = run_cli("check " + q(f));
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("E203") != std::string::npos);
}

TEST_CASE("elaborate emits a core term that parses and typechecks") {
  auto f = write_file("cli_summon2.fcci", kSummon);
  auto r = run_cli("elaborate " + q(f));
  REQUIRE(r.exit_code == 0);
  fcci::TermPtr core = support::parse_term(r.out);
  fcci::TermPtr expected = support::parse_term(
      "(\\(y : Int). (/\\(a). \\(x : a). x) @(Int) y) 7");
  CHECK(fcci::alpha_eq_term(core, expected));
  auto ft = fcci::fomega_typecheck({}, core);
  REQUIRE(ft.ok());
  CHECK(fcci::alpha_eq_type(ft.value(), fcci::t_int()));
}

TEST_CASE("run evaluates to the final value") {
  auto f = write_file("cli_summon3.fcci", kSummon);
  auto r = run_cli("run " + q(f));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "7\n");

  auto rc = run_cli("run --emit-core " + q(f));
  CHECK(rc.exit_code == 0);
  // Core term first, value second.
  auto nl = rc.out.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(fcci::alpha_eq_term(support::parse_term(rc.out.substr(0, nl)),
                            support::parse_term(
                                "(\\(y : Int). (/\\(a). \\(x : a). x) @(Int) y) 7")));
  CHECK(rc.out.substr(rc.out.size() - 2) == "7\n");
}

TEST_CASE("a tiny witness limit exhausts the search") {
  auto f = write_file("cli_summon4.fcci", kSummon);
  auto r = run_cli("run --limit 1 " + q(f));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("E303") != std::string::npos);
}

TEST_CASE("resolve finds the packaged-instance witness") {
  auto ctx = write_file("cli_slsi.ctx", kSlsi);
  auto r = run_cli("resolve --context " + q(ctx) + " --to \"S (L Int)\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "sl @(Int) si\n");
}

TEST_CASE("resolve with a source type instantiates it") {
  auto ctx = write_file("cli_y.ctx", kY);
  auto r = run_cli("resolve --context " + q(ctx) +
                   " --from \"forall [a]. a => a\" --to Int");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "_ @(Int) y\n");

  auto t = run_cli("resolve --trace --context " + q(ctx) +
                   " --from \"forall [a]. a => a\" --to Int");
  CHECK(t.exit_code == 0);
  CHECK(t.err.find("m-all") != std::string::npos);
  CHECK(t.err.find("lookup") != std::string::npos);
}

TEST_CASE("resolve reports ambiguity with exit 2") {
  auto ctx = write_file("cli_two.ctx", kTwo);
  auto r = run_cli("resolve --context " + q(ctx) + " --to Int");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("E302") != std::string::npos);

  auto all = run_cli("resolve --all-minimal --context " + q(ctx) + " --to Int");
  CHECK(all.exit_code == 2);
  CHECK(all.out.find("a\n") != std::string::npos);
  CHECK(all.out.find("b\n") != std::string::npos);
}

TEST_CASE("resolve distinguishes the failure modes") {
  // Nothing in scope: not derivable.
  auto none = run_cli("resolve --to Int");
  CHECK(none.exit_code == 3);
  CHECK(none.err.find("E301") != std::string::npos);

  // Outside the decidable fragment: incomplete.
  auto np = write_file("cli_np.ctx", kNp);
  auto inc = run_cli("resolve --context " + q(np) + " --to Int");
  CHECK(inc.exit_code == 3);
  CHECK(inc.err.find("E304") != std::string::npos);

  // Bound too small: exhausted.
  auto y = write_file("cli_y2.ctx", kY);
  auto ex = run_cli("resolve --limit 1 --context " + q(y) +
                    " --from \"forall [a]. a => a\" --to Int");
  CHECK(ex.exit_code == 3);
  CHECK(ex.err.find("E303") != std::string::npos);
}

TEST_CASE("json diagnostics are one object per line with fixed fields") {
  auto f = write_file("cli_form2.fcci", kFormErr);
  auto r = run_cli("check --json " + q(f));
  CHECK(r.exit_code == 1);
  // Exactly one line.
  REQUIRE_FALSE(r.err.empty());
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  auto j = nlohmann::json::parse(r.err);
  CHECK(j["severity"] == "error");
  CHECK(j["code"] == "E203");
  CHECK(j["message"].is_string());
  CHECK(j["span"]["file"] == f.string());
  CHECK(j["span"]["line"].is_number_integer());
  CHECK(j["span"]["col"].is_number_integer());
  CHECK(j["span"]["endLine"].is_number_integer());
  CHECK(j["span"]["endCol"].is_number_integer());
  CHECK(j["notes"].is_array());
  CHECK(j["witnesses"].is_array());

  // Byte-stable across runs.
  auto r2 = run_cli("check --json " + q(f));
  CHECK(r2.err == r.err);
  CHECK(r2.exit_code == r.exit_code);
}

TEST_CASE("json ambiguity carries the witness list") {
  auto f = write_file("cli_amb2.fcci", kAmb);
  auto r = run_cli("check --json " + q(f));
  CHECK(r.exit_code == 2);
  auto j = nlohmann::json::parse(r.err);
  CHECK(j["code"] == "E302");
  REQUIRE(j["witnesses"].is_array());
  CHECK(j["witnesses"].size() == 2);
}

TEST_CASE("io and usage failures exit 5") {
  auto missing = run_cli("check /nonexistent/nope.fcci");
  CHECK(missing.exit_code == 5);
  CHECK(missing.err.find("E501") != std::string::npos);

  auto f = write_file("cli_ok.fcci", kSummon);
  auto bad = run_cli("check --definitely-not-a-flag " + q(f));
  CHECK(bad.exit_code == 5);

  auto help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("check") != std::string::npos);
}

TEST_CASE("parse errors exit 4") {
  auto f = write_file("cli_bad.fcci", "let [y : Int = 7 in y\n");
  auto r = run_cli("check " + q(f));
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("E001") != std::string::npos);
}

TEST_CASE("identical invocations are byte-identical") {
  auto ctx = write_file("cli_slsi2.ctx", kSlsi);
  std::string args = "resolve --context " + q(ctx) + " --to \"S (L Int)\"";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);
  CHECK(a.exit_code == b.exit_code);
}

#endif  // FCCI_BIN_PATH
