#pragma once

// The syntax-directed typing judgment. Implicit resolution is invoked at
// ascriptions and nowhere else; every other rule is plain F^omega typing with
// the binder form threaded through (an application's form must agree with the
// form of the function's type).

#include <map>
#include <string>
#include <utility>

#include "fcci/core.hpp"
#include "fcci/diag.hpp"
#include "fcci/kinds.hpp"
#include "fcci/pretty.hpp"
#include "fcci/resolve.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

struct TypeOptions {
  int limit = 64;           // measure bound for resolution at ascriptions
  unsigned shuffle_seed = 0;
};

struct TypedTerm {
  TermPtr term;
  TypePtr type;  // beta-normal
  std::map<const Term*, Witness> resolutions;  // one entry per Asc node
  std::map<const Term*, TermPtr> asc_images;   // core replacement per Asc node
};

namespace detail {

inline const char* form_adjective(Form f) {
  return f == Form::Explicit ? "explicit" : "implicit";
}

class Typer {
 public:
  explicit Typer(TypeOptions opts) : opts_(opts) {}

  Result<TypePtr> go(Context& ctx, const TermPtr& e) {
    return std::visit(
        overloaded{
            [&](const Var& v) { return t_var(ctx, v, e->span); },
            [&](const FreeV& f) -> Result<TypePtr> {
              return make_error("E201", "unbound variable `" + f.name + "`",
                                e->span);
            },
            [&](const Lit&) -> Result<TypePtr> { return t_int(); },
            [&](const Abs& a) { return t_abs(ctx, a, e->span); },
            [&](const App& a) { return t_app(ctx, a, e->span); },
            [&](const TyAbs& a) { return t_tabs(ctx, a); },
            [&](const TyApp& a) { return t_tapp(ctx, a, e->span); },
            [&](const Asc& a) { return t_asc(ctx, a, e); },
        },
        e->node);
  }

  std::map<const Term*, Witness>& resolutions() { return resolutions_; }
  std::map<const Term*, TermPtr>& asc_images() { return asc_images_; }

 private:
  TypeOptions opts_;
  std::map<const Term*, Witness> resolutions_;
  std::map<const Term*, TermPtr> asc_images_;

  Result<TypePtr> t_var(const Context& ctx, const Var& v, Span sp) {
    int remaining = v.index;
    for (size_t i = ctx.entries.size(); i-- > 0;) {
      const auto* tb = std::get_if<TermBinding>(&ctx.entries[i]);
      if (!tb) continue;
      if (remaining-- > 0) continue;
      int weaken = ctx.type_depth() - type_depth_before(ctx, i);
      return normalize_type(shift_type(tb->type, weaken));
    }
    std::string name = v.hint.empty() ? "#" + std::to_string(v.index) : v.hint;
    return make_error("E201", "unbound variable `" + name + "`", sp);
  }

  Result<TypePtr> t_abs(Context& ctx, const Abs& a, Span sp) {
    Result<KindPtr> kr = kind_of(ctx, a.ann);
    if (!kr.ok()) return kr.error();
    if (!std::holds_alternative<KStar>(kr.value()->node))
      return make_error("E101",
                        "abstraction parameter must have kind *, got " +
                            kind_to_string(kr.value()),
                        sp);
    TypePtr dom = normalize_type(a.ann);
    ctx.push_term(a.form, a.hint, dom);
    Result<TypePtr> body = go(ctx, a.body);
    ctx.pop();
    if (!body.ok()) return body.error();
    return t_pi(a.form, dom, body.value());
  }

  Result<TypePtr> t_app(Context& ctx, const App& a, Span sp) {
    Result<TypePtr> fr = go(ctx, a.fn);
    if (!fr.ok()) return fr.error();
    const auto* pi = std::get_if<TPi>(&fr.value()->node);
    if (!pi) {
      auto [ty, tm] = context_display_names(ctx);
      return make_error("E204",
                        "application of a non-function (type " +
                            pretty_type(fr.value(), ty) + ")",
                        sp);
    }
    if (pi->form != a.form)
      return make_error(
          "E203",
          std::string("binder-form mismatch: ") + form_adjective(a.form) +
              " application of a function with an " +
              form_adjective(pi->form) + " parameter",
          sp);
    Result<TypePtr> ar = go(ctx, a.arg);
    if (!ar.ok()) return ar.error();
    if (!type_equiv(ar.value(), pi->dom)) {
      auto [ty, tm] = context_display_names(ctx);
      return make_error("E202",
                        "argument type mismatch: expected " +
                            pretty_type(pi->dom, ty) + ", got " +
                            pretty_type(ar.value(), ty),
                        a.arg->span.valid() ? a.arg->span : sp);
    }
    return pi->cod;
  }

  Result<TypePtr> t_tabs(Context& ctx, const TyAbs& a) {
    ctx.push_type(a.form, a.hint, a.kind);
    Result<TypePtr> body = go(ctx, a.body);
    ctx.pop();
    if (!body.ok()) return body.error();
    return t_all(a.form, a.hint, a.kind, body.value());
  }

  Result<TypePtr> t_tapp(Context& ctx, const TyApp& a, Span sp) {
    Result<TypePtr> fr = go(ctx, a.fn);
    if (!fr.ok()) return fr.error();
    const auto* all = std::get_if<TAll>(&fr.value()->node);
    if (!all) {
      auto [ty, tm] = context_display_names(ctx);
      return make_error("E204",
                        "type application of a non-universal (type " +
                            pretty_type(fr.value(), ty) + ")",
                        sp);
    }
    if (all->form != a.form)
      return make_error(
          "E203",
          std::string("binder-form mismatch: ") + form_adjective(a.form) +
              " type application of an abstraction with an " +
              form_adjective(all->form) + " type parameter",
          sp);
    Result<KindPtr> kr = kind_of(ctx, a.arg);
    if (!kr.ok()) return kr.error();
    if (!kind_eq(kr.value(), all->kind))
      return make_error("E202",
                        "type argument kind mismatch: expected " +
                            kind_to_string(all->kind) + ", got " +
                            kind_to_string(kr.value()),
                        sp);
    return normalize_type(subst_type_in_type(all->body, a.arg));
  }

  Result<TypePtr> t_asc(Context& ctx, const Asc& a, const TermPtr& node) {
    Result<TypePtr> sr = go(ctx, a.subject);
    if (!sr.ok()) return sr.error();
    Result<KindPtr> kr = kind_of(ctx, a.target);
    if (!kr.ok()) return kr.error();
    if (!std::holds_alternative<KStar>(kr.value()->node))
      return make_error("E205",
                        "ascription target must have kind *, got " +
                            kind_to_string(kr.value()),
                        node->span);
    TypePtr target = normalize_type(a.target);

    SolveOptions so;
    so.limit = opts_.limit;
    so.shuffle_seed = opts_.shuffle_seed;
    so.subject = to_core(a.subject, asc_images_);
    SolveResult res = solve(ctx, sr.value(), target, so);

    auto [ty, tm] = context_display_names(ctx);
    auto goal_text = [&] {
      return pretty_type(sr.value(), ty) + " ~> " + pretty_type(target, ty);
    };
    switch (res.kind) {
      case SolveResult::Kind::Unique: {
        resolutions_.emplace(node.get(), res.witnesses.front());
        asc_images_.emplace(node.get(), res.witnesses.front().term);
        return target;
      }
      case SolveResult::Kind::Ambiguous: {
        Diagnostic d = make_error(
            "E302",
            "ambiguous implicit resolution for " + goal_text() + ": " +
                std::to_string(res.witnesses.size()) +
                " minimal witnesses of measure " +
                std::to_string(res.witnesses.front().measure),
            node->span);
        for (const auto& w : res.witnesses)
          d.witnesses.push_back(pretty_term(w.term, ty, tm));
        return d;
      }
      case SolveResult::Kind::NotDerivable:
        return make_error("E301", "no implicit witness for " + goal_text(),
                          node->span);
      case SolveResult::Kind::Exhausted:
        return make_error(
            "E303",
            "implicit resolution for " + goal_text() +
                " found no witness within measure limit " +
                std::to_string(res.limit) +
                " and some branch was cut by the bound",
            node->span);
      case SolveResult::Kind::Incomplete:
        return make_error("E304",
                          "implicit resolution for " + goal_text() +
                              " is incomplete: " + res.reason,
                          node->span);
    }
    return make_error("E999", "unreachable", node->span);
  }
};

}  // namespace detail

inline Result<TypedTerm> type_of(const Context& ctx, const TermPtr& e,
                                 const TypeOptions& opts = {}) {
  detail::Typer typer(opts);
  Context scratch = ctx;
  Result<TypePtr> r = typer.go(scratch, e);
  if (!r.ok()) return r.error();
  TypedTerm out;
  out.term = e;
  out.type = r.value();
  out.resolutions = std::move(typer.resolutions());
  out.asc_images = std::move(typer.asc_images());
  return out;
}

}  // namespace fcci
