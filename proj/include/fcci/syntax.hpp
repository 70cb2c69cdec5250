#pragma once

// Abstract syntax for kinds, types, terms, and contexts.
//
// Binding uses de Bruijn indices with two independent sorts: type-variable
// indices count enclosing type binders (forall, type-level lambda, /\ in
// terms, type entries in a context) and term-variable indices count enclosing
// term binders. Source names are carried as display hints only; they take no
// part in equality or substitution.

#include <cassert>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fcci/diag.hpp"

namespace fcci {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// ---------------------------------------------------------------------------
// Kinds

struct Kind;
using KindPtr = std::shared_ptr<const Kind>;

struct KStar {};
struct KArrow {
  KindPtr dom, cod;
};

struct Kind {
  std::variant<KStar, KArrow> node;
};

inline KindPtr k_star() {
  static const KindPtr star = std::make_shared<Kind>(Kind{KStar{}});
  return star;
}
inline KindPtr k_arrow(KindPtr dom, KindPtr cod) {
  return std::make_shared<Kind>(Kind{KArrow{std::move(dom), std::move(cod)}});
}

inline bool kind_eq(const KindPtr& a, const KindPtr& b) {
  if (a == b) return true;
  if (std::holds_alternative<KStar>(a->node))
    return std::holds_alternative<KStar>(b->node);
  const auto* ka = std::get_if<KArrow>(&a->node);
  const auto* kb = std::get_if<KArrow>(&b->node);
  if (!ka || !kb) return false;
  return kind_eq(ka->dom, kb->dom) && kind_eq(ka->cod, kb->cod);
}

// ---------------------------------------------------------------------------
// Binder forms

// The two binder shapes: ( ) explicit, [ ] implicit.
enum class Form : uint8_t { Explicit, Implicit };

// ---------------------------------------------------------------------------
// Types

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct TVar {
  int index = 0;          // de Bruijn index over type binders
  std::string hint;       // display name
};
struct TFree {
  std::string name;       // unresolved source name; rejected by kinding
};
struct TInt {};           // the single base type
struct TPi {              // Π⟨τ⟩.τ — non-dependent, no binder
  Form form = Form::Explicit;
  TypePtr dom, cod;
};
struct TAll {             // ∀⟨α:κ⟩.τ — binds one type variable
  Form form = Form::Explicit;
  std::string hint;
  KindPtr kind;
  TypePtr body;
};
struct TLam {             // λα:κ.τ — binds one type variable
  std::string hint;
  KindPtr kind;
  TypePtr body;
};
struct TApp {
  TypePtr fn, arg;
};
struct TMeta {            // solver-internal instantiation variable
  int id = 0;
  KindPtr kind;
  int scope = 0;          // type-binder depth at introduction
  std::string hint;
};

struct Type {
  std::variant<TVar, TFree, TInt, TPi, TAll, TLam, TApp, TMeta> node;
};

inline TypePtr t_var(int index, std::string hint = {}) {
  return std::make_shared<Type>(Type{TVar{index, std::move(hint)}});
}
inline TypePtr t_free(std::string name) {
  return std::make_shared<Type>(Type{TFree{std::move(name)}});
}
inline TypePtr t_int() {
  static const TypePtr i = std::make_shared<Type>(Type{TInt{}});
  return i;
}
inline TypePtr t_pi(Form form, TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(Type{TPi{form, std::move(dom), std::move(cod)}});
}
inline TypePtr t_arrow(TypePtr dom, TypePtr cod) {
  return t_pi(Form::Explicit, std::move(dom), std::move(cod));
}
inline TypePtr t_implies(TypePtr dom, TypePtr cod) {
  return t_pi(Form::Implicit, std::move(dom), std::move(cod));
}
inline TypePtr t_all(Form form, std::string hint, KindPtr kind, TypePtr body) {
  return std::make_shared<Type>(
      Type{TAll{form, std::move(hint), std::move(kind), std::move(body)}});
}
inline TypePtr t_lam(std::string hint, KindPtr kind, TypePtr body) {
  return std::make_shared<Type>(
      Type{TLam{std::move(hint), std::move(kind), std::move(body)}});
}
inline TypePtr t_app(TypePtr fn, TypePtr arg) {
  return std::make_shared<Type>(Type{TApp{std::move(fn), std::move(arg)}});
}
inline TypePtr t_meta(int id, KindPtr kind, int scope, std::string hint = {}) {
  return std::make_shared<Type>(
      Type{TMeta{id, std::move(kind), scope, std::move(hint)}});
}

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  int index = 0;          // de Bruijn index over term binders
  std::string hint;
};
struct FreeV {
  std::string name;       // unresolved source name; rejected by typing
};
struct Lit {
  long long value = 0;
};
struct Abs {              // λ⟨x:τ⟩.e
  Form form = Form::Explicit;
  std::string hint;
  TypePtr ann;
  TermPtr body;
};
struct App {              // e⟨e⟩
  Form form = Form::Explicit;
  TermPtr fn, arg;
};
struct TyAbs {            // Λ⟨α:κ⟩.e
  Form form = Form::Explicit;
  std::string hint;
  KindPtr kind;
  TermPtr body;
};
struct TyApp {            // e⟨τ⟩
  Form form = Form::Explicit;
  TermPtr fn;
  TypePtr arg;
};
struct Asc {              // e :: τ
  TermPtr subject;
  TypePtr target;
};

struct Term {
  std::variant<Var, FreeV, Lit, Abs, App, TyAbs, TyApp, Asc> node;
  Span span;
};

inline TermPtr e_var(int index, std::string hint = {}, Span sp = {}) {
  return std::make_shared<Term>(Term{Var{index, std::move(hint)}, sp});
}
inline TermPtr e_free(std::string name, Span sp = {}) {
  return std::make_shared<Term>(Term{FreeV{std::move(name)}, sp});
}
inline TermPtr e_lit(long long value, Span sp = {}) {
  return std::make_shared<Term>(Term{Lit{value}, sp});
}
inline TermPtr e_abs(Form form, std::string hint, TypePtr ann, TermPtr body,
                     Span sp = {}) {
  return std::make_shared<Term>(
      Term{Abs{form, std::move(hint), std::move(ann), std::move(body)}, sp});
}
inline TermPtr e_app(Form form, TermPtr fn, TermPtr arg, Span sp = {}) {
  return std::make_shared<Term>(Term{App{form, std::move(fn), std::move(arg)}, sp});
}
inline TermPtr e_tyabs(Form form, std::string hint, KindPtr kind, TermPtr body,
                       Span sp = {}) {
  return std::make_shared<Term>(
      Term{TyAbs{form, std::move(hint), std::move(kind), std::move(body)}, sp});
}
inline TermPtr e_tyapp(Form form, TermPtr fn, TypePtr arg, Span sp = {}) {
  return std::make_shared<Term>(Term{TyApp{form, std::move(fn), std::move(arg)}, sp});
}
inline TermPtr e_asc(TermPtr subject, TypePtr target, Span sp = {}) {
  return std::make_shared<Term>(Term{Asc{std::move(subject), std::move(target)}, sp});
}

// ---------------------------------------------------------------------------
// Contexts

struct TypeBinding {
  Form form = Form::Explicit;
  std::string name;
  KindPtr kind;
};
struct TermBinding {
  Form form = Form::Explicit;
  std::string name;
  TypePtr type;  // scoped over the type binders that precede this entry
};
using ContextEntry = std::variant<TypeBinding, TermBinding>;

struct Context {
  std::vector<ContextEntry> entries;

  int type_depth() const {
    int n = 0;
    for (const auto& e : entries)
      if (std::holds_alternative<TypeBinding>(e)) ++n;
    return n;
  }
  int term_depth() const {
    int n = 0;
    for (const auto& e : entries)
      if (std::holds_alternative<TermBinding>(e)) ++n;
    return n;
  }

  void push_type(Form form, std::string name, KindPtr kind) {
    entries.push_back(TypeBinding{form, std::move(name), std::move(kind)});
  }
  void push_term(Form form, std::string name, TypePtr type) {
    entries.push_back(TermBinding{form, std::move(name), std::move(type)});
  }
  void pop() { entries.pop_back(); }
};

// Number of type binders among entries strictly before position `pos`.
inline int type_depth_before(const Context& ctx, size_t pos) {
  int n = 0;
  for (size_t i = 0; i < pos && i < ctx.entries.size(); ++i)
    if (std::holds_alternative<TypeBinding>(ctx.entries[i])) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Shifting

// Adds `amount` to every free type variable with index >= cutoff.
inline TypePtr shift_type(const TypePtr& t, int amount, int cutoff = 0) {
  if (amount == 0) return t;
  return std::visit(
      overloaded{
          [&](const TVar& v) -> TypePtr {
            if (v.index >= cutoff) return t_var(v.index + amount, v.hint);
            return t;
          },
          [&](const TFree&) -> TypePtr { return t; },
          [&](const TInt&) -> TypePtr { return t; },
          [&](const TMeta&) -> TypePtr { return t; },
          [&](const TPi& p) -> TypePtr {
            return t_pi(p.form, shift_type(p.dom, amount, cutoff),
                        shift_type(p.cod, amount, cutoff));
          },
          [&](const TAll& a) -> TypePtr {
            return t_all(a.form, a.hint, a.kind,
                         shift_type(a.body, amount, cutoff + 1));
          },
          [&](const TLam& l) -> TypePtr {
            return t_lam(l.hint, l.kind, shift_type(l.body, amount, cutoff + 1));
          },
          [&](const TApp& a) -> TypePtr {
            return t_app(shift_type(a.fn, amount, cutoff),
                         shift_type(a.arg, amount, cutoff));
          },
      },
      t->node);
}

// Shifts type indices (by ty_amount) and term indices (by tm_amount) in a term.
inline TermPtr shift_term(const TermPtr& e, int tm_amount, int ty_amount,
                          int tm_cutoff = 0, int ty_cutoff = 0) {
  if (tm_amount == 0 && ty_amount == 0) return e;
  return std::visit(
      overloaded{
          [&](const Var& v) -> TermPtr {
            if (v.index >= tm_cutoff) return e_var(v.index + tm_amount, v.hint, e->span);
            return e;
          },
          [&](const FreeV&) -> TermPtr { return e; },
          [&](const Lit&) -> TermPtr { return e; },
          [&](const Abs& a) -> TermPtr {
            return e_abs(a.form, a.hint, shift_type(a.ann, ty_amount, ty_cutoff),
                         shift_term(a.body, tm_amount, ty_amount, tm_cutoff + 1,
                                    ty_cutoff),
                         e->span);
          },
          [&](const App& a) -> TermPtr {
            return e_app(a.form,
                         shift_term(a.fn, tm_amount, ty_amount, tm_cutoff, ty_cutoff),
                         shift_term(a.arg, tm_amount, ty_amount, tm_cutoff, ty_cutoff),
                         e->span);
          },
          [&](const TyAbs& a) -> TermPtr {
            return e_tyabs(a.form, a.hint, a.kind,
                           shift_term(a.body, tm_amount, ty_amount, tm_cutoff,
                                      ty_cutoff + 1),
                           e->span);
          },
          [&](const TyApp& a) -> TermPtr {
            return e_tyapp(a.form,
                           shift_term(a.fn, tm_amount, ty_amount, tm_cutoff, ty_cutoff),
                           shift_type(a.arg, ty_amount, ty_cutoff), e->span);
          },
          [&](const Asc& a) -> TermPtr {
            return e_asc(shift_term(a.subject, tm_amount, ty_amount, tm_cutoff,
                                    ty_cutoff),
                         shift_type(a.target, ty_amount, ty_cutoff), e->span);
          },
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Substitution

namespace detail {

// [alpha |-> replacement] body, where alpha is type index `depth`.
inline TypePtr subst_ty(const TypePtr& t, const TypePtr& replacement, int depth) {
  return std::visit(
      overloaded{
          [&](const TVar& v) -> TypePtr {
            if (v.index == depth) return shift_type(replacement, depth);
            if (v.index > depth) return t_var(v.index - 1, v.hint);
            return t;
          },
          [&](const TFree&) -> TypePtr { return t; },
          [&](const TInt&) -> TypePtr { return t; },
          [&](const TMeta&) -> TypePtr { return t; },
          [&](const TPi& p) -> TypePtr {
            return t_pi(p.form, subst_ty(p.dom, replacement, depth),
                        subst_ty(p.cod, replacement, depth));
          },
          [&](const TAll& a) -> TypePtr {
            return t_all(a.form, a.hint, a.kind,
                         subst_ty(a.body, replacement, depth + 1));
          },
          [&](const TLam& l) -> TypePtr {
            return t_lam(l.hint, l.kind, subst_ty(l.body, replacement, depth + 1));
          },
          [&](const TApp& a) -> TypePtr {
            return t_app(subst_ty(a.fn, replacement, depth),
                         subst_ty(a.arg, replacement, depth));
          },
      },
      t->node);
}

inline TermPtr subst_ty_tm(const TermPtr& e, const TypePtr& replacement, int depth) {
  return std::visit(
      overloaded{
          [&](const Var&) -> TermPtr { return e; },
          [&](const FreeV&) -> TermPtr { return e; },
          [&](const Lit&) -> TermPtr { return e; },
          [&](const Abs& a) -> TermPtr {
            return e_abs(a.form, a.hint, subst_ty(a.ann, replacement, depth),
                         subst_ty_tm(a.body, replacement, depth), e->span);
          },
          [&](const App& a) -> TermPtr {
            return e_app(a.form, subst_ty_tm(a.fn, replacement, depth),
                         subst_ty_tm(a.arg, replacement, depth), e->span);
          },
          [&](const TyAbs& a) -> TermPtr {
            return e_tyabs(a.form, a.hint, a.kind,
                           subst_ty_tm(a.body, replacement, depth + 1), e->span);
          },
          [&](const TyApp& a) -> TermPtr {
            return e_tyapp(a.form, subst_ty_tm(a.fn, replacement, depth),
                           subst_ty(a.arg, replacement, depth), e->span);
          },
          [&](const Asc& a) -> TermPtr {
            return e_asc(subst_ty_tm(a.subject, replacement, depth),
                         subst_ty(a.target, replacement, depth), e->span);
          },
      },
      e->node);
}

}  // namespace detail

// Capture-avoiding [alpha |-> replacement] on the body of a type binder;
// the bound variable is index 0 of `body`.
inline TypePtr subst_type_in_type(const TypePtr& body, const TypePtr& replacement) {
  return detail::subst_ty(body, replacement, 0);
}

// Same substitution traversing annotations and type arguments inside a term.
inline TermPtr subst_type_in_term(const TermPtr& body, const TypePtr& replacement) {
  return detail::subst_ty_tm(body, replacement, 0);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence (structural on indices; hints and spans are ignored)

inline bool alpha_eq_type(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const TVar& x) { return x.index == std::get<TVar>(b->node).index; },
          [&](const TFree& x) { return x.name == std::get<TFree>(b->node).name; },
          [&](const TInt&) { return true; },
          [&](const TMeta& x) { return x.id == std::get<TMeta>(b->node).id; },
          [&](const TPi& x) {
            const auto& y = std::get<TPi>(b->node);
            return x.form == y.form && alpha_eq_type(x.dom, y.dom) &&
                   alpha_eq_type(x.cod, y.cod);
          },
          [&](const TAll& x) {
            const auto& y = std::get<TAll>(b->node);
            return x.form == y.form && kind_eq(x.kind, y.kind) &&
                   alpha_eq_type(x.body, y.body);
          },
          [&](const TLam& x) {
            const auto& y = std::get<TLam>(b->node);
            return kind_eq(x.kind, y.kind) && alpha_eq_type(x.body, y.body);
          },
          [&](const TApp& x) {
            const auto& y = std::get<TApp>(b->node);
            return alpha_eq_type(x.fn, y.fn) && alpha_eq_type(x.arg, y.arg);
          },
      },
      a->node);
}

inline bool alpha_eq_term(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Var& x) { return x.index == std::get<Var>(b->node).index; },
          [&](const FreeV& x) { return x.name == std::get<FreeV>(b->node).name; },
          [&](const Lit& x) { return x.value == std::get<Lit>(b->node).value; },
          [&](const Abs& x) {
            const auto& y = std::get<Abs>(b->node);
            return x.form == y.form && alpha_eq_type(x.ann, y.ann) &&
                   alpha_eq_term(x.body, y.body);
          },
          [&](const App& x) {
            const auto& y = std::get<App>(b->node);
            return x.form == y.form && alpha_eq_term(x.fn, y.fn) &&
                   alpha_eq_term(x.arg, y.arg);
          },
          [&](const TyAbs& x) {
            const auto& y = std::get<TyAbs>(b->node);
            return x.form == y.form && kind_eq(x.kind, y.kind) &&
                   alpha_eq_term(x.body, y.body);
          },
          [&](const TyApp& x) {
            const auto& y = std::get<TyApp>(b->node);
            return x.form == y.form && alpha_eq_term(x.fn, y.fn) &&
                   alpha_eq_type(x.arg, y.arg);
          },
          [&](const Asc& x) {
            const auto& y = std::get<Asc>(b->node);
            return alpha_eq_term(x.subject, y.subject) &&
                   alpha_eq_type(x.target, y.target);
          },
      },
      a->node);
}

// ---------------------------------------------------------------------------
// Simple types

// Head of a type application spine.
inline const Type* spine_head(const TypePtr& t) {
  const Type* cur = t.get();
  while (const auto* app = std::get_if<TApp>(&cur->node)) cur = app->fn.get();
  return cur;
}

// The sigma class, judged on a beta-normal root: a type is simple unless its
// root is an implicit Pi/All, a type-level lambda, a redex, or an application
// whose spine head is not a variable.
inline bool is_simple(const TypePtr& t) {
  return std::visit(
      overloaded{
          [](const TVar&) { return true; },
          [](const TFree&) { return true; },
          [](const TInt&) { return true; },
          [](const TMeta&) { return false; },  // undetermined until solved
          [](const TPi& p) { return p.form == Form::Explicit; },
          [&](const TAll& a) { return a.form == Form::Explicit; },
          [](const TLam&) { return false; },
          [&](const TApp&) {
            const Type* h = spine_head(t);
            return std::holds_alternative<TVar>(h->node) ||
                   std::holds_alternative<TFree>(h->node);
          },
      },
      t->node);
}

// Free unresolved names (used by the pretty-printer to avoid shadowing).
inline void collect_free_names_type(const TypePtr& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const TVar&) {},
                 [&](const TFree& f) { out.insert(f.name); },
                 [&](const TInt&) {},
                 [&](const TMeta&) {},
                 [&](const TPi& p) {
                   collect_free_names_type(p.dom, out);
                   collect_free_names_type(p.cod, out);
                 },
                 [&](const TAll& a) { collect_free_names_type(a.body, out); },
                 [&](const TLam& l) { collect_free_names_type(l.body, out); },
                 [&](const TApp& a) {
                   collect_free_names_type(a.fn, out);
                   collect_free_names_type(a.arg, out);
                 },
             },
             t->node);
}

inline void collect_free_names_term(const TermPtr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Var&) {},
                 [&](const FreeV& f) { out.insert(f.name); },
                 [&](const Lit&) {},
                 [&](const Abs& a) {
                   collect_free_names_type(a.ann, out);
                   collect_free_names_term(a.body, out);
                 },
                 [&](const App& a) {
                   collect_free_names_term(a.fn, out);
                   collect_free_names_term(a.arg, out);
                 },
                 [&](const TyAbs& a) { collect_free_names_term(a.body, out); },
                 [&](const TyApp& a) {
                   collect_free_names_term(a.fn, out);
                   collect_free_names_type(a.arg, out);
                 },
                 [&](const Asc& a) {
                   collect_free_names_term(a.subject, out);
                   collect_free_names_type(a.target, out);
                 },
             },
             e->node);
}

// True if the type contains any metavariable.
inline bool has_meta(const TypePtr& t) {
  return std::visit(overloaded{
                        [](const TMeta&) { return true; },
                        [](const TVar&) { return false; },
                        [](const TFree&) { return false; },
                        [](const TInt&) { return false; },
                        [&](const TPi& p) { return has_meta(p.dom) || has_meta(p.cod); },
                        [&](const TAll& a) { return has_meta(a.body); },
                        [&](const TLam& l) { return has_meta(l.body); },
                        [&](const TApp& a) { return has_meta(a.fn) || has_meta(a.arg); },
                    },
                    t->node);
}

}  // namespace fcci
