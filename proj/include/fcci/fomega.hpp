#pragma once

// An independent typechecker for the plain (explicit-only, ascription-free)
// fragment. It deliberately reimplements the five core rules rather than
// calling into typing.hpp, so it can serve as a soundness oracle for the
// elaborator: any E401 on elaborator output is a bug in the pipeline, not in
// the input program. Only kinding and type equivalence are shared.

#include <string>

#include "fcci/diag.hpp"
#include "fcci/kinds.hpp"
#include "fcci/pretty.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

namespace detail {

inline Diagnostic core_error(std::string msg, Span sp) {
  return make_error("E401", std::move(msg), sp);
}

inline Result<TypePtr> fomega_go(Context& ctx, const TermPtr& e) {
  return std::visit(
      overloaded{
          [&](const Var& v) -> Result<TypePtr> {
            int remaining = v.index;
            for (size_t i = ctx.entries.size(); i-- > 0;) {
              const auto* tb = std::get_if<TermBinding>(&ctx.entries[i]);
              if (!tb) continue;
              if (remaining-- > 0) continue;
              int weaken = ctx.type_depth() - type_depth_before(ctx, i);
              return normalize_type(shift_type(tb->type, weaken));
            }
            return core_error("unbound variable in core term", e->span);
          },
          [&](const FreeV& f) -> Result<TypePtr> {
            return core_error("free variable `" + f.name + "` in core term",
                              e->span);
          },
          [&](const Lit&) -> Result<TypePtr> { return t_int(); },
          [&](const Abs& a) -> Result<TypePtr> {
            if (a.form != Form::Explicit)
              return core_error("implicit abstraction in core term", e->span);
            Result<KindPtr> kr = kind_of(ctx, a.ann);
            if (!kr.ok())
              return core_error("ill-kinded annotation: " + kr.error().message,
                                e->span);
            if (!std::holds_alternative<KStar>(kr.value()->node))
              return core_error("abstraction annotation is not of kind *",
                                e->span);
            TypePtr dom = normalize_type(a.ann);
            ctx.push_term(Form::Explicit, a.hint, dom);
            Result<TypePtr> body = fomega_go(ctx, a.body);
            ctx.pop();
            if (!body.ok()) return body.error();
            return t_pi(Form::Explicit, dom, body.value());
          },
          [&](const App& a) -> Result<TypePtr> {
            if (a.form != Form::Explicit)
              return core_error("implicit application in core term", e->span);
            Result<TypePtr> fr = fomega_go(ctx, a.fn);
            if (!fr.ok()) return fr.error();
            const auto* pi = std::get_if<TPi>(&fr.value()->node);
            if (!pi || pi->form != Form::Explicit)
              return core_error("application of a non-function", e->span);
            Result<TypePtr> ar = fomega_go(ctx, a.arg);
            if (!ar.ok()) return ar.error();
            if (!type_equiv(ar.value(), pi->dom)) {
              auto [ty, tm] = context_display_names(ctx);
              return core_error("argument type " + pretty_type(ar.value(), ty) +
                                    " does not match domain " +
                                    pretty_type(pi->dom, ty),
                                e->span);
            }
            return pi->cod;
          },
          [&](const TyAbs& a) -> Result<TypePtr> {
            if (a.form != Form::Explicit)
              return core_error("implicit type abstraction in core term",
                                e->span);
            ctx.push_type(Form::Explicit, a.hint, a.kind);
            Result<TypePtr> body = fomega_go(ctx, a.body);
            ctx.pop();
            if (!body.ok()) return body.error();
            return t_all(Form::Explicit, a.hint, a.kind, body.value());
          },
          [&](const TyApp& a) -> Result<TypePtr> {
            if (a.form != Form::Explicit)
              return core_error("implicit type application in core term",
                                e->span);
            Result<TypePtr> fr = fomega_go(ctx, a.fn);
            if (!fr.ok()) return fr.error();
            const auto* all = std::get_if<TAll>(&fr.value()->node);
            if (!all || all->form != Form::Explicit)
              return core_error("type application of a non-universal",
                                e->span);
            Result<KindPtr> kr = kind_of(ctx, a.arg);
            if (!kr.ok())
              return core_error(
                  "ill-kinded type argument: " + kr.error().message, e->span);
            if (!kind_eq(kr.value(), all->kind))
              return core_error("type argument kind mismatch", e->span);
            return normalize_type(subst_type_in_type(all->body, a.arg));
          },
          [&](const Asc&) -> Result<TypePtr> {
            return core_error("ascription in core term", e->span);
          },
      },
      e->node);
}

}  // namespace detail

// Plain typing of an explicit-only term; every failure is E401.
inline Result<TypePtr> fomega_typecheck(const Context& ctx, const TermPtr& e) {
  Context scratch = ctx;
  return detail::fomega_go(scratch, e);
}

}  // namespace fcci
