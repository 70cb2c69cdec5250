// The resolution engine: canonical goals with frozen minimal witnesses (each
// cross-checked against the brute-force enumerator), the outcome taxonomy,
// one-step expansion, measure bookkeeping, determinism, and monotonicity.

#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "support.hpp"

using namespace fcci;
using support::GoalSpec;

namespace {

SolveResult solve_goal(const support::PreparedGoal& p, int limit,
                       unsigned seed = 0, TermPtr subject = nullptr) {
  SolveOptions opts;
  opts.limit = limit;
  opts.shuffle_seed = seed;
  opts.subject = std::move(subject);
  return solve(p.ctx, p.from, p.to, opts);
}

// The cost model counts the subject of a match goal as a single node, so
// this identity holds whenever the subject is atomic (the placeholder, a
// variable) — in particular for every entailment witness.
void check_measures(const SolveResult& res) {
  for (const auto& w : res.witnesses)
    CHECK(w.measure == term_node_measure(w.term));
}

}  // namespace

TEST_CASE("instantiate-and-discharge against a single implicit binding") {
  GoalSpec g{"summon", "[y : Int]", "forall [a]. a => a", "Int", {"Int"}};
  auto p = support::prepare_goal(g);
  ParseScope sc = ParseScope::of_context(p.ctx);
  TermPtr subject = support::parse_term("/\\(a). \\(x : a). x");

  SolveResult res = solve_goal(p, 16, 0, subject);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 5);
  CHECK(alpha_eq_term(res.witnesses.front().term,
                      support::parse_term("(/\\(a). \\(x : a). x) @(Int) y", sc)));

  auto oracle = oracle_enumerate(p.ctx, p.from, p.to, 16, p.universe, subject);
  auto minimal = minimal_witnesses(oracle);
  REQUIRE(minimal.size() == 1);
  CHECK(minimal.front().measure == 5);
  CHECK(alpha_eq_term(minimal.front().term, res.witnesses.front().term));
}

TEST_CASE("two equal bindings are ambiguous") {
  GoalSpec g{"two-int", "[a : Int], [b : Int]", "", "Int", {"Int"}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Ambiguous);
  REQUIRE(res.witnesses.size() == 2);
  CHECK(res.witnesses[0].measure == 1);
  CHECK(res.witnesses[1].measure == 1);
  check_measures(res);
  CHECK(support::sorted_witness_strings(res.witnesses, p.ctx) ==
        std::vector<std::string>{"a", "b"});
  CHECK(support::engine_summary(g, 16).witnesses ==
        support::oracle_summary(g, 16).witnesses);
}

TEST_CASE("higher-kinded instance applied to a packaged argument") {
  GoalSpec g{"sl-si",
             "(S : * -> *), (L : * -> *), [si : S Int], "
             "[sl : forall [b]. S b => S (L b)]",
             "", "S (L Int)",
             {"Int", "L Int", "S Int"}};
  auto p = support::prepare_goal(g);
  ParseScope sc = ParseScope::of_context(p.ctx);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 5);
  CHECK(alpha_eq_term(res.witnesses.front().term,
                      support::parse_term("sl @(Int) si", sc)));
  check_measures(res);

  // The derivation tree records the rules applied, outermost first.
  const Derivation& d = res.witnesses.front().derivation;
  CHECK(d.rule == Rule::Lookup);
  CHECK(d.binding_name == "sl");
  REQUIRE(d.premises.size() == 1);
  CHECK(d.premises[0].rule == Rule::MAll);
  REQUIRE(d.premises[0].instantiation);
  CHECK(alpha_eq_type(d.premises[0].instantiation, t_int()));
  CHECK(d.premises[0].premises[0].rule == Rule::MImpl);

  auto e = support::engine_summary(g, 16);
  auto o = support::oracle_summary(g, 16);
  CHECK(e.derivable == o.derivable);
  CHECK(e.min_measure == o.min_measure);
  CHECK(e.witnesses == o.witnesses);
}

TEST_CASE("overlapping instances are disambiguated by minimality") {
  GoalSpec g{"overlap",
             "(S : * -> *), [si : S Int], [sg : forall [b]. S b]",
             "", "S Int",
             {"Int", "S Int"}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 1);
  CHECK(support::sorted_witness_strings(res.witnesses, p.ctx) ==
        std::vector<std::string>{"si"});
  CHECK(support::engine_summary(g, 16).witnesses ==
        support::oracle_summary(g, 16).witnesses);

  // The competing derivation exists at measure 3; the oracle sees both.
  auto all = oracle_enumerate(p.ctx, p.from, p.to, 16, p.universe);
  bool found_general = false;
  ParseScope sc = ParseScope::of_context(p.ctx);
  for (const auto& w : all)
    if (alpha_eq_term(w.term, support::parse_term("sg @(Int)", sc))) {
      found_general = true;
      CHECK(w.measure == 3);
    }
  CHECK(found_general);
}

TEST_CASE("a simple type matches itself with the identity witness") {
  GoalSpec g{"identity", "", "Int -> Int", "Int -> Int", {}};
  auto p = support::prepare_goal(g);
  TermPtr subject = support::parse_term("\\(z : Int). z");
  SolveResult res = solve_goal(p, 16, 0, subject);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 1);
  CHECK(alpha_eq_term(res.witnesses.front().term, subject));
  CHECK(res.witnesses.front().derivation.rule == Rule::MEquiv);
}

TEST_CASE("focusing introduces target structure before matching") {
  GoalSpec g{"focusing",
             "[y : Int -> Int], (f : Int => (Int -> Int) => Int)",
             "Int => (Int -> Int) => Int", "Int => Int",
             {}};
  auto p = support::prepare_goal(g);
  ParseScope sc = ParseScope::of_context(p.ctx);
  TermPtr subject = support::parse_term("f", sc);
  SolveResult res = solve_goal(p, 16, 0, subject);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 6);
  CHECK(alpha_eq_term(res.witnesses.front().term,
                      support::parse_term("\\(x : Int). f x y", sc)));

  auto oracle = minimal_witnesses(
      oracle_enumerate(p.ctx, p.from, p.to, 8, p.universe, subject));
  REQUIRE(oracle.size() == 1);
  CHECK(alpha_eq_term(oracle.front().term, res.witnesses.front().term));
  CHECK(oracle.front().measure == 6);
}

TEST_CASE("universally quantified targets are entered by f-all") {
  GoalSpec g{"f-all", "", "forall [a]. a => a", "forall [b]. b => b", {}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 7);
  CHECK(res.witnesses.front().derivation.rule == Rule::FAll);
  // The oracle needs no universe here: the instantiation is the bound
  // variable introduced by the focusing step itself.
  auto e = support::engine_summary(g, 16);
  auto o = support::oracle_summary(g, 16);
  CHECK(e.witnesses == o.witnesses);
  CHECK(e.min_measure == 7);
  CHECK(o.min_measure == 7);
}

TEST_CASE("outcome taxonomy: not derivable") {
  GoalSpec g{"empty", "", "", "Int", {}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  CHECK(res.kind == SolveResult::Kind::NotDerivable);
  CHECK_FALSE(res.bound_cut);
  CHECK_FALSE(res.fragment_cut);
}

TEST_CASE("outcome taxonomy: exhausted by the bound") {
  GoalSpec g{"exhausted", "[y : Int]", "forall [a]. a => a", "Int", {"Int"}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 1);
  CHECK(res.kind == SolveResult::Kind::Exhausted);
  CHECK(res.limit == 1);
  CHECK(res.bound_cut);
  // The bound is the only obstruction: raising it recovers the witness.
  CHECK(solve_goal(p, 5).kind == SolveResult::Kind::Unique);
}

TEST_CASE("outcome taxonomy: incomplete outside the pattern fragment") {
  GoalSpec g{"non-pattern", "[hf : forall [f : * -> *]. f Int]", "", "Int", {}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  CHECK(res.kind == SolveResult::Kind::Incomplete);
  CHECK(res.fragment_cut);
  CHECK_FALSE(res.reason.empty());
}

TEST_CASE("an unconstrained instantiation is reported as ambiguity") {
  GoalSpec g{"unconstrained", "[u : forall [a]. Int]", "", "Int",
             {"Int", "Int -> Int"}};
  auto p = support::prepare_goal(g);
  ParseScope sc = ParseScope::of_context(p.ctx);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Ambiguous);
  REQUIRE(res.witnesses.size() == 2);
  check_measures(res);
  auto got = support::sorted_witness_strings(res.witnesses, p.ctx);
  CHECK(got == std::vector<std::string>{"u @(Int -> Int)", "u @(Int)"});
  // The oracle over the same two-type universe agrees.
  CHECK(support::oracle_summary(g, 16).witnesses == got);
}

TEST_CASE("nested requirement chains resolve through repeated lookup") {
  GoalSpec g{"chain",
             "(S : * -> *), (L : * -> *), [si : S Int], "
             "[sl : forall [b]. S b => S (L b)]",
             "", "S (L (L Int))",
             {"Int", "L Int"}};
  auto p = support::prepare_goal(g);
  ParseScope sc = ParseScope::of_context(p.ctx);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(res.witnesses.front().measure == 9);
  CHECK(alpha_eq_term(
      res.witnesses.front().term,
      support::parse_term("sl @(L Int) (sl @(Int) si)", sc)));
  CHECK(support::engine_summary(g, 16).witnesses ==
        support::oracle_summary(g, 16).witnesses);
}

TEST_CASE("one-step expansion mirrors the rules") {
  Context empty;
  // Target redex: only f-beta applies.
  auto steps = match_step(empty, support::parse_type("Int"),
                          support::parse_type("(\\a : *. a) Int"));
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].rule == Rule::FBeta);
  CHECK(alpha_eq_type(*steps[0].sub_target, t_int()));

  // Simple equal types: m-equiv closes.
  auto eq = match_step(empty, support::parse_type("Int"),
                       support::parse_type("Int"));
  REQUIRE(eq.size() == 1);
  CHECK(eq[0].rule == Rule::MEquiv);

  // No rule applies: empty set.
  auto none = match_step(empty, support::parse_type("Int"),
                         support::parse_type("Int -> Int"));
  CHECK(none.empty());

  // The focusing goal: f-impl first, then m-impl on the source.
  Context ctx = support::parse_context(
      "[y : Int -> Int], (f : Int => (Int -> Int) => Int)");
  ParseScope sc = ParseScope::of_context(ctx);
  TypePtr source = support::parse_type("Int => (Int -> Int) => Int", sc);
  TypePtr target = support::parse_type("Int => Int", sc);
  auto s1 = match_step(ctx, source, target);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].rule == Rule::FImpl);
  Context ctx2 = ctx;
  ctx2.push_term(Form::Implicit, "x", t_int());
  auto s2 = match_step(ctx2, source, *s1[0].sub_target);
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].rule == Rule::MImpl);
  CHECK(alpha_eq_type(*s2[0].entail_target, t_int()));

  // Entailment goals expand by lookup, one expansion per implicit binding.
  auto lookups = match_step(ctx2, std::nullopt, t_int());
  CHECK(lookups.size() == 2);  // y and the fresh x; f is explicit
  CHECK(lookups[0].rule == Rule::Lookup);
}

TEST_CASE("witness instantiations are normalized before comparison") {
  // Both routes to the same witness modulo beta produce ONE alpha class.
  GoalSpec g{"beta-inst",
             "(S : * -> *), [si : S ((\\a : *. a) Int)]",
             "", "S Int",
             {"Int"}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  CHECK(support::sorted_witness_strings(res.witnesses, p.ctx) ==
        std::vector<std::string>{"si"});
}

TEST_CASE("outcomes are independent of candidate exploration order") {
  std::vector<GoalSpec> goals = {
      {"two-int", "[a : Int], [b : Int]", "", "Int", {"Int"}},
      {"sl-si",
       "(S : * -> *), (L : * -> *), [si : S Int], "
       "[sl : forall [b]. S b => S (L b)]",
       "", "S (L Int)",
       {"Int", "L Int", "S Int"}},
      {"overlap", "(S : * -> *), [si : S Int], [sg : forall [b]. S b]", "",
       "S Int", {"Int"}},
      {"summon", "[y : Int]", "forall [a]. a => a", "Int", {"Int"}},
  };
  for (const auto& g : goals) {
    auto base = support::engine_summary(g, 16, 0);
    for (unsigned seed : {1u, 2u, 99u, 7777u}) {
      auto shuffled = support::engine_summary(g, 16, seed);
      CHECK(shuffled.derivable == base.derivable);
      CHECK(shuffled.min_measure == base.min_measure);
      CHECK(shuffled.witnesses == base.witnesses);
    }
  }
}

TEST_CASE("growing the limit never changes a clean unique outcome") {
  GoalSpec g{"sl-si",
             "(S : * -> *), (L : * -> *), [si : S Int], "
             "[sl : forall [b]. S b => S (L b)]",
             "", "S (L Int)",
             {"Int"}};
  auto p = support::prepare_goal(g);
  SolveResult at6 = solve_goal(p, 6);
  REQUIRE(at6.kind == SolveResult::Kind::Unique);
  for (int limit : {8, 16, 32, 64}) {
    SolveResult r = solve_goal(p, limit);
    REQUIRE(r.kind == SolveResult::Kind::Unique);
    CHECK(alpha_eq_term(r.witnesses.front().term, at6.witnesses.front().term));
    CHECK(r.witnesses.front().measure == at6.witnesses.front().measure);
  }
}

TEST_CASE("derivation traces render one rule per line") {
  GoalSpec g{"sl-si",
             "(S : * -> *), (L : * -> *), [si : S Int], "
             "[sl : forall [b]. S b => S (L b)]",
             "", "S (L Int)",
             {"Int"}};
  auto p = support::prepare_goal(g);
  SolveResult res = solve_goal(p, 16);
  REQUIRE(res.kind == SolveResult::Kind::Unique);
  std::string trace = render_derivation(res.witnesses.front().derivation, p.ctx);
  CHECK(trace.find("lookup") != std::string::npos);
  CHECK(trace.find("m-all") != std::string::npos);
  CHECK(trace.find("m-impl") != std::string::npos);
  CHECK(trace.find("via sl") != std::string::npos);
  CHECK(trace.find(":= Int") != std::string::npos);
}
