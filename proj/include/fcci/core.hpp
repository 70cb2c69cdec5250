#pragma once

// The explicit fragment: erasure of implicit binder forms and replacement of
// ascriptions by their resolved witnesses. A core term contains only Explicit
// forms and no ascription nodes; core types contain only Explicit Pi/All.

#include <map>

#include "fcci/syntax.hpp"

namespace fcci {

inline TypePtr erase_type(const TypePtr& t) {
  return std::visit(
      overloaded{
          [&](const TVar&) -> TypePtr { return t; },
          [&](const TFree&) -> TypePtr { return t; },
          [&](const TInt&) -> TypePtr { return t; },
          [&](const TMeta&) -> TypePtr { return t; },
          [&](const TPi& p) -> TypePtr {
            return t_pi(Form::Explicit, erase_type(p.dom), erase_type(p.cod));
          },
          [&](const TAll& a) -> TypePtr {
            return t_all(Form::Explicit, a.hint, a.kind, erase_type(a.body));
          },
          [&](const TLam& l) -> TypePtr {
            return t_lam(l.hint, l.kind, erase_type(l.body));
          },
          [&](const TApp& a) -> TypePtr {
            return t_app(erase_type(a.fn), erase_type(a.arg));
          },
      },
      t->node);
}

inline Context erase_context(const Context& ctx) {
  Context out;
  for (const auto& e : ctx.entries) {
    if (const auto* tb = std::get_if<TypeBinding>(&e))
      out.push_type(Form::Explicit, tb->name, tb->kind);
    else {
      const auto& tm = std::get<TermBinding>(e);
      out.push_term(Form::Explicit, tm.name, erase_type(tm.type));
    }
  }
  return out;
}

// Rewrites a term into the explicit fragment. Each Asc node must have a
// replacement (its elaborated witness, already explicit) in `asc_images`;
// all other nodes are erased structurally.
inline TermPtr to_core(const TermPtr& e,
                       const std::map<const Term*, TermPtr>& asc_images) {
  return std::visit(
      overloaded{
          [&](const Var&) -> TermPtr { return e; },
          [&](const FreeV&) -> TermPtr { return e; },
          [&](const Lit&) -> TermPtr { return e; },
          [&](const Abs& a) -> TermPtr {
            return e_abs(Form::Explicit, a.hint, erase_type(a.ann),
                         to_core(a.body, asc_images), e->span);
          },
          [&](const App& a) -> TermPtr {
            return e_app(Form::Explicit, to_core(a.fn, asc_images),
                         to_core(a.arg, asc_images), e->span);
          },
          [&](const TyAbs& a) -> TermPtr {
            return e_tyabs(Form::Explicit, a.hint, a.kind,
                           to_core(a.body, asc_images), e->span);
          },
          [&](const TyApp& a) -> TermPtr {
            return e_tyapp(Form::Explicit, to_core(a.fn, asc_images),
                           erase_type(a.arg), e->span);
          },
          [&](const Asc&) -> TermPtr {
            auto it = asc_images.find(e.get());
            // Complete typing records an image for every ascription.
            return it != asc_images.end() ? it->second : nullptr;
          },
      },
      e->node);
}

inline bool is_core_type(const TypePtr& t) {
  return std::visit(
      overloaded{
          [](const TVar&) { return true; },
          [](const TFree&) { return true; },
          [](const TInt&) { return true; },
          [](const TMeta&) { return false; },
          [&](const TPi& p) {
            return p.form == Form::Explicit && is_core_type(p.dom) &&
                   is_core_type(p.cod);
          },
          [&](const TAll& a) {
            return a.form == Form::Explicit && is_core_type(a.body);
          },
          [&](const TLam& l) { return is_core_type(l.body); },
          [&](const TApp& a) { return is_core_type(a.fn) && is_core_type(a.arg); },
      },
      t->node);
}

inline bool is_core_term(const TermPtr& e) {
  return std::visit(
      overloaded{
          [](const Var&) { return true; },
          [](const FreeV&) { return true; },
          [](const Lit&) { return true; },
          [&](const Abs& a) {
            return a.form == Form::Explicit && is_core_type(a.ann) &&
                   is_core_term(a.body);
          },
          [&](const App& a) {
            return a.form == Form::Explicit && is_core_term(a.fn) &&
                   is_core_term(a.arg);
          },
          [&](const TyAbs& a) {
            return a.form == Form::Explicit && is_core_term(a.body);
          },
          [&](const TyApp& a) {
            return a.form == Form::Explicit && is_core_term(a.fn) &&
                   is_core_type(a.arg);
          },
          [&](const Asc&) { return false; },
      },
      e->node);
}

// Term-node count: variables, literals, abstractions, applications, and type
// abstractions count one each; a type application counts one for the
// application and one for its type argument, whatever the argument's size.
inline int term_node_measure(const TermPtr& e) {
  return std::visit(
      overloaded{
          [](const Var&) { return 1; },
          [](const FreeV&) { return 1; },
          [](const Lit&) { return 1; },
          [&](const Abs& a) { return 1 + term_node_measure(a.body); },
          [&](const App& a) {
            return 1 + term_node_measure(a.fn) + term_node_measure(a.arg);
          },
          [&](const TyAbs& a) { return 1 + term_node_measure(a.body); },
          [&](const TyApp& a) { return 2 + term_node_measure(a.fn); },
          [&](const Asc& a) { return term_node_measure(a.subject); },
      },
      e->node);
}

}  // namespace fcci
