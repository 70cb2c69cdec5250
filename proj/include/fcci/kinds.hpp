#pragma once

// Kinding, context well-formedness, type normalization, and type equivalence.
//
// Equivalence is alpha-equivalence of beta-normal forms (no eta). The type
// level is a simply-kinded lambda calculus, so normalization terminates on
// well-kinded input.

#include <optional>
#include <string>

#include "fcci/diag.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

inline std::string kind_to_string(const KindPtr& k) {
  if (std::holds_alternative<KStar>(k->node)) return "*";
  const auto& ar = std::get<KArrow>(k->node);
  std::string dom = kind_to_string(ar.dom);
  if (std::holds_alternative<KArrow>(ar.dom->node)) dom = "(" + dom + ")";
  return dom + " -> " + kind_to_string(ar.cod);
}

// ---------------------------------------------------------------------------
// Kinding

namespace detail {

// Kind of the type variable with de Bruijn index `index` (innermost = 0).
inline std::optional<KindPtr> lookup_type_binding(const Context& ctx, int index) {
  int seen = 0;
  for (auto it = ctx.entries.rbegin(); it != ctx.entries.rend(); ++it) {
    if (const auto* tb = std::get_if<TypeBinding>(&*it)) {
      if (seen == index) return tb->kind;
      ++seen;
    }
  }
  return std::nullopt;
}

inline Result<KindPtr> kind_of_rec(Context& ctx, const TypePtr& t) {
  return std::visit(
      overloaded{
          [&](const TVar& v) -> Result<KindPtr> {
            if (auto k = lookup_type_binding(ctx, v.index)) return *k;
            return make_error("E101", "unbound type variable" +
                                          (v.hint.empty() ? std::string{}
                                                          : " '" + v.hint + "'"));
          },
          [&](const TFree& f) -> Result<KindPtr> {
            return make_error("E101", "unbound type variable '" + f.name + "'");
          },
          [&](const TInt&) -> Result<KindPtr> { return k_star(); },
          [&](const TMeta& m) -> Result<KindPtr> { return m.kind; },
          [&](const TPi& p) -> Result<KindPtr> {
            auto kd = kind_of_rec(ctx, p.dom);
            if (!kd.ok()) return kd;
            if (!std::holds_alternative<KStar>(kd.value()->node))
              return make_error("E101",
                                "function domain must have kind *, got " +
                                    kind_to_string(kd.value()));
            auto kc = kind_of_rec(ctx, p.cod);
            if (!kc.ok()) return kc;
            if (!std::holds_alternative<KStar>(kc.value()->node))
              return make_error("E101",
                                "function codomain must have kind *, got " +
                                    kind_to_string(kc.value()));
            return k_star();
          },
          [&](const TAll& a) -> Result<KindPtr> {
            ctx.push_type(a.form, a.hint, a.kind);
            auto kb = kind_of_rec(ctx, a.body);
            ctx.pop();
            if (!kb.ok()) return kb;
            if (!std::holds_alternative<KStar>(kb.value()->node))
              return make_error("E101",
                                "quantified body must have kind *, got " +
                                    kind_to_string(kb.value()));
            return k_star();
          },
          [&](const TLam& l) -> Result<KindPtr> {
            ctx.push_type(Form::Explicit, l.hint, l.kind);
            auto kb = kind_of_rec(ctx, l.body);
            ctx.pop();
            if (!kb.ok()) return kb;
            return k_arrow(l.kind, kb.value());
          },
          [&](const TApp& a) -> Result<KindPtr> {
            auto kf = kind_of_rec(ctx, a.fn);
            if (!kf.ok()) return kf;
            const auto* ar = std::get_if<KArrow>(&kf.value()->node);
            if (!ar)
              return make_error("E101",
                                "type application of a non-operator (kind " +
                                    kind_to_string(kf.value()) + ")");
            auto ka = kind_of_rec(ctx, a.arg);
            if (!ka.ok()) return ka;
            if (!kind_eq(ka.value(), ar->dom))
              return make_error("E101", "kind mismatch at type application: "
                                        "expected " +
                                            kind_to_string(ar->dom) + ", got " +
                                            kind_to_string(ka.value()));
            return ar->cod;
          },
      },
      t->node);
}

}  // namespace detail

inline Result<KindPtr> kind_of(const Context& ctx, const TypePtr& t) {
  Context scratch = ctx;
  return detail::kind_of_rec(scratch, t);
}

// Checks each entry of the telescope in order: term bindings must have types
// of kind * relative to the entries before them.
inline std::optional<Diagnostic> ctx_check(const Context& ctx) {
  Context prefix;
  for (const auto& e : ctx.entries) {
    if (const auto* tb = std::get_if<TermBinding>(&e)) {
      auto k = detail::kind_of_rec(prefix, tb->type);
      if (!k.ok()) {
        Diagnostic d = k.error();
        d.message = "ill-formed context entry '" + tb->name + "': " + d.message;
        return d;
      }
      if (!std::holds_alternative<KStar>(k.value()->node))
        return make_error("E101", "context entry '" + tb->name +
                                      "' must have kind *, got " +
                                      kind_to_string(k.value()));
    }
    prefix.entries.push_back(e);
  }
  return std::nullopt;
}

inline bool ctx_ok(const Context& ctx) { return !ctx_check(ctx).has_value(); }

// ---------------------------------------------------------------------------
// Normalization

// Weak-head normal form: reduces head redexes only.
inline TypePtr whnf_type(const TypePtr& t) {
  if (const auto* app = std::get_if<TApp>(&t->node)) {
    TypePtr fh = whnf_type(app->fn);
    if (const auto* lam = std::get_if<TLam>(&fh->node))
      return whnf_type(subst_type_in_type(lam->body, app->arg));
    if (fh != app->fn) return t_app(fh, app->arg);
  }
  return t;
}

// Full beta-normal form, normal order.
inline TypePtr normalize_type(const TypePtr& t) {
  return std::visit(
      overloaded{
          [&](const TVar&) -> TypePtr { return t; },
          [&](const TFree&) -> TypePtr { return t; },
          [&](const TInt&) -> TypePtr { return t; },
          [&](const TMeta&) -> TypePtr { return t; },
          [&](const TPi& p) -> TypePtr {
            return t_pi(p.form, normalize_type(p.dom), normalize_type(p.cod));
          },
          [&](const TAll& a) -> TypePtr {
            return t_all(a.form, a.hint, a.kind, normalize_type(a.body));
          },
          [&](const TLam& l) -> TypePtr {
            return t_lam(l.hint, l.kind, normalize_type(l.body));
          },
          [&](const TApp& a) -> TypePtr {
            TypePtr fh = whnf_type(a.fn);
            if (const auto* lam = std::get_if<TLam>(&fh->node))
              return normalize_type(subst_type_in_type(lam->body, a.arg));
            return t_app(normalize_type(fh), normalize_type(a.arg));
          },
      },
      t->node);
}

// Beta-eta-free equivalence: alpha-equality of normal forms.
inline bool type_equiv(const TypePtr& a, const TypePtr& b) {
  if (alpha_eq_type(a, b)) return true;
  return alpha_eq_type(normalize_type(a), normalize_type(b));
}

}  // namespace fcci
