// Concrete syntax: lexer, term/type/kind parsers, let-desugaring, context
// files, spans, and parse errors.

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace fcci;

TEST_CASE("let desugars to an application of an abstraction") {
  TermPtr e = support::parse_term(
      "let [y : Int] = 7 in (/\\[a]. \\[x:a]. x) :: Int");
  // App(Implicit, Abs(Implicit, y, Int, Asc(...)), 7) -- the let body
  // extends rightward through the ascription, so the binding scopes over it.
  const auto* app = std::get_if<App>(&e->node);
  REQUIRE(app);
  CHECK(app->form == Form::Implicit);
  CHECK(std::holds_alternative<Lit>(app->arg->node));
  const auto* abs = std::get_if<Abs>(&app->fn->node);
  REQUIRE(abs);
  CHECK(abs->form == Form::Implicit);
  CHECK(alpha_eq_type(abs->ann, t_int()));
  const auto* asc = std::get_if<Asc>(&abs->body->node);
  REQUIRE(asc);
  CHECK(alpha_eq_type(asc->target, t_int()));
  const auto* tyabs = std::get_if<TyAbs>(&asc->subject->node);
  REQUIRE(tyabs);
  CHECK(tyabs->form == Form::Implicit);
}

TEST_CASE("explicit abstraction") {
  TermPtr e = support::parse_term("\\(x : Int). x");
  CHECK(alpha_eq_term(
      e, e_abs(Form::Explicit, "x", t_int(), e_var(0, "x"))));
}

TEST_CASE("implicit application is left-associative") {
  TermPtr e = support::parse_term("f [x] [y]");
  TermPtr expect = e_app(Form::Implicit,
                         e_app(Form::Implicit, e_free("f"), e_free("x")),
                         e_free("y"));
  CHECK(alpha_eq_term(e, expect));
}

TEST_CASE("binder sugar defaults the kind to *") {
  TypePtr t = support::parse_type("forall [a]. a");
  const auto* all = std::get_if<TAll>(&t->node);
  REQUIRE(all);
  CHECK(all->form == Form::Implicit);
  CHECK(kind_eq(all->kind, k_star()));

  TypePtr t2 = support::parse_type("forall (a : * -> *). Int");
  const auto* all2 = std::get_if<TAll>(&t2->node);
  REQUIRE(all2);
  CHECK(all2->form == Form::Explicit);
  CHECK(kind_eq(all2->kind, k_arrow(k_star(), k_star())));

  TermPtr e = support::parse_term("/\\(a). \\(x : a). x");
  const auto* tyabs = std::get_if<TyAbs>(&e->node);
  REQUIRE(tyabs);
  CHECK(tyabs->form == Form::Explicit);
  CHECK(kind_eq(tyabs->kind, k_star()));
}

TEST_CASE("arrows are right-associative and mix with application") {
  Context ctx = support::parse_context("(S : * -> *)");
  ParseScope sc = ParseScope::of_context(ctx);
  TypePtr t = support::parse_type("S Int -> S Int -> Int", sc);
  const auto* pi = std::get_if<TPi>(&t->node);
  REQUIRE(pi);
  CHECK(std::holds_alternative<TPi>(pi->cod->node));

  // => and -> can nest; parentheses override.
  TypePtr u = support::parse_type("(Int -> Int) => Int");
  const auto* pu = std::get_if<TPi>(&u->node);
  REQUIRE(pu);
  CHECK(pu->form == Form::Implicit);
  CHECK(std::holds_alternative<TPi>(pu->dom->node));
}

TEST_CASE("ascription chains are left-associative and loosest") {
  TermPtr e = support::parse_term("5 :: Int :: Int");
  const auto* outer = std::get_if<Asc>(&e->node);
  REQUIRE(outer);
  const auto* inner = std::get_if<Asc>(&outer->subject->node);
  REQUIRE(inner);
  CHECK(std::holds_alternative<Lit>(inner->subject->node));
}

TEST_CASE("type applications in terms take both forms") {
  TermPtr e = support::parse_term("f @(Int) @[Int -> Int]");
  const auto* outer = std::get_if<TyApp>(&e->node);
  REQUIRE(outer);
  CHECK(outer->form == Form::Implicit);
  const auto* inner = std::get_if<TyApp>(&outer->fn->node);
  REQUIRE(inner);
  CHECK(inner->form == Form::Explicit);
}

TEST_CASE("comments and whitespace are skipped") {
  TermPtr e = support::parse_term(
      "-- leading comment\n  7 -- trailing\n");
  CHECK(alpha_eq_term(e, e_lit(7)));
}

TEST_CASE("context files parse declarations in order with scoping") {
  Context ctx = support::parse_context(
      "(S : * -> *), (L : * -> *)\n[si : S Int]\n[sl : forall [b]. S b => S (L b)]");
  REQUIRE(ctx.entries.size() == 4);
  const auto* s = std::get_if<TypeBinding>(&ctx.entries[0]);
  REQUIRE(s);
  CHECK(s->form == Form::Explicit);
  CHECK(s->name == "S");
  CHECK(kind_eq(s->kind, k_arrow(k_star(), k_star())));
  const auto* si = std::get_if<TermBinding>(&ctx.entries[2]);
  REQUIRE(si);
  CHECK(si->form == Form::Implicit);
  // si's type refers to S, bound two entries (one type binder) earlier.
  CHECK(alpha_eq_type(si->type, t_app(t_var(1, "S"), t_int())));
  CHECK(ctx_ok(ctx));
}

TEST_CASE("spans point into the source") {
  auto r = parse_unit("  5 :: Int", "mem.fcci");
  REQUIRE(r.ok());
  const TermPtr& e = r.value().body;
  CHECK(e->span.line == 1);
  CHECK(e->span.col == 3);
  const auto* asc = std::get_if<Asc>(&e->node);
  REQUIRE(asc);
  CHECK(asc->subject->span.col == 3);
}

TEST_CASE("parse errors carry the first offending location") {
  auto bad = parse_term_text(")", {}, "bad.fcci");
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().code == "E001");
  CHECK(bad.error().span.line == 1);

  auto unterminated = parse_term_text("let [y : Int] = 7", {});
  REQUIRE_FALSE(unterminated.ok());
  CHECK(unterminated.error().code == "E001");

  auto overflow = parse_term_text("99999999999999999999999", {});
  REQUIRE_FALSE(overflow.ok());
  CHECK(overflow.error().code == "E001");

  auto badctx = parse_context_text("(S : * -> *", "bad.ctx");
  REQUIRE_FALSE(badctx.ok());
  CHECK(badctx.error().code == "E001");
}

TEST_CASE("explicit let form desugars like the implicit one") {
  TermPtr e = support::parse_term("let (x : Int) = 5 in x");
  TermPtr expect = e_app(Form::Explicit,
                         e_abs(Form::Explicit, "x", t_int(), e_var(0, "x")),
                         e_lit(5));
  CHECK(alpha_eq_term(e, expect));
}

TEST_CASE("parsing is deterministic") {
  const std::string text =
      "let [y : Int] = 7 in (/\\[a]. \\[x:a]. x) :: Int";
  TermPtr a = support::parse_term(text);
  TermPtr b = support::parse_term(text);
  CHECK(alpha_eq_term(a, b));
  CHECK(pretty_term(a) == pretty_term(b));
}
