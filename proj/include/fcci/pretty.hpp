#pragma once

// Pretty-printing for kinds, types, and terms.
//
// Output parses back to an alpha-equivalent tree: binder display names are
// chosen fresh against every enclosing binder of the same sort, all free
// names of that sort, and the keywords. Parentheses are minimal for the
// grammar's precedence (ascription < abstraction < application < atom).

#include <set>
#include <string>
#include <vector>

#include "fcci/kinds.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

inline std::string pretty_kind(const KindPtr& k) { return kind_to_string(k); }

namespace detail {

inline bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''))
      return false;
  return !(s == "let" || s == "in" || s == "forall" || s == "Int");
}

struct PrettyEnv {
  std::vector<std::string> ty_names;   // innermost last
  std::vector<std::string> tm_names;   // innermost last
  std::set<std::string> ty_reserved;   // free type names
  std::set<std::string> tm_reserved;   // free term names

  std::string freshen(const std::string& hint, bool type_sort) const {
    const auto& env = type_sort ? ty_names : tm_names;
    const auto& reserved = type_sort ? ty_reserved : tm_reserved;
    std::string base = valid_ident(hint) ? hint : (type_sort ? "a" : "x");
    auto taken = [&](const std::string& n) {
      if (reserved.count(n)) return true;
      for (const auto& m : env)
        if (m == n) return true;
      return false;
    };
    if (!taken(base)) return base;
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!taken(cand)) return cand;
    }
  }

  std::string ty_name(int index) const {
    int pos = static_cast<int>(ty_names.size()) - 1 - index;
    if (pos < 0 || pos >= static_cast<int>(ty_names.size()))
      return "#t" + std::to_string(index);
    return ty_names[static_cast<size_t>(pos)];
  }
  std::string tm_name(int index) const {
    int pos = static_cast<int>(tm_names.size()) - 1 - index;
    if (pos < 0 || pos >= static_cast<int>(tm_names.size()))
      return "#v" + std::to_string(index);
    return tm_names[static_cast<size_t>(pos)];
  }
};

// Type precedence: 0 arrows/binders, 1 application, 2 atom.
inline std::string render_type(const TypePtr& t, int prec, PrettyEnv& env) {
  auto wrap = [&](int node_prec, std::string s) {
    return prec > node_prec ? "(" + std::move(s) + ")" : std::move(s);
  };
  return std::visit(
      overloaded{
          [&](const TVar& v) -> std::string { return env.ty_name(v.index); },
          [&](const TFree& f) -> std::string { return f.name; },
          [&](const TInt&) -> std::string { return "Int"; },
          [&](const TMeta& m) -> std::string {
            return "?" + (m.hint.empty() ? "m" + std::to_string(m.id) : m.hint);
          },
          [&](const TPi& p) -> std::string {
            std::string dom = render_type(p.dom, 1, env);
            std::string cod = render_type(p.cod, 0, env);
            const char* arr = p.form == Form::Explicit ? " -> " : " => ";
            return wrap(0, dom + arr + cod);
          },
          [&](const TAll& a) -> std::string {
            std::string name = env.freshen(a.hint, true);
            std::string binder =
                std::holds_alternative<KStar>(a.kind->node)
                    ? name
                    : name + " : " + pretty_kind(a.kind);
            const char* open = a.form == Form::Explicit ? "(" : "[";
            const char* close = a.form == Form::Explicit ? ")" : "]";
            env.ty_names.push_back(name);
            std::string body = render_type(a.body, 0, env);
            env.ty_names.pop_back();
            return wrap(0, "forall " + std::string(open) + binder + close +
                               ". " + body);
          },
          [&](const TLam& l) -> std::string {
            std::string name = env.freshen(l.hint, true);
            env.ty_names.push_back(name);
            std::string body = render_type(l.body, 0, env);
            env.ty_names.pop_back();
            return wrap(0, "\\" + name + " : " + pretty_kind(l.kind) + ". " + body);
          },
          [&](const TApp& a) -> std::string {
            std::string fn = render_type(a.fn, 1, env);
            std::string arg = render_type(a.arg, 2, env);
            return wrap(1, fn + " " + arg);
          },
      },
      t->node);
}

// Term precedence: 0 term (asc ok), 1 asc-subject (abs needs parens),
// 2 application position, 3 atom.
inline std::string render_term(const TermPtr& e, int prec, PrettyEnv& env) {
  auto wrap = [&](int node_prec, std::string s) {
    return prec > node_prec ? "(" + std::move(s) + ")" : std::move(s);
  };
  return std::visit(
      overloaded{
          [&](const Var& v) -> std::string { return env.tm_name(v.index); },
          [&](const FreeV& f) -> std::string { return f.name; },
          [&](const Lit& l) -> std::string { return std::to_string(l.value); },
          [&](const Abs& a) -> std::string {
            std::string name = env.freshen(a.hint, false);
            std::string ann = render_type(a.ann, 0, env);
            const char* open = a.form == Form::Explicit ? "(" : "[";
            const char* close = a.form == Form::Explicit ? ")" : "]";
            env.tm_names.push_back(name);
            std::string body = render_term(a.body, 0, env);
            env.tm_names.pop_back();
            return wrap(0, "\\" + std::string(open) + name + " : " + ann +
                               close + ". " + body);
          },
          [&](const App& a) -> std::string {
            std::string fn = render_term(a.fn, 2, env);
            if (a.form == Form::Explicit) {
              std::string arg = render_term(a.arg, 3, env);
              return wrap(2, fn + " " + arg);
            }
            std::string arg = render_term(a.arg, 0, env);
            return wrap(2, fn + " [" + arg + "]");
          },
          [&](const TyAbs& a) -> std::string {
            std::string name = env.freshen(a.hint, true);
            std::string binder =
                std::holds_alternative<KStar>(a.kind->node)
                    ? name
                    : name + " : " + pretty_kind(a.kind);
            const char* open = a.form == Form::Explicit ? "(" : "[";
            const char* close = a.form == Form::Explicit ? ")" : "]";
            env.ty_names.push_back(name);
            std::string body = render_term(a.body, 0, env);
            env.ty_names.pop_back();
            return wrap(0, "/\\" + std::string(open) + binder + close + ". " + body);
          },
          [&](const TyApp& a) -> std::string {
            std::string fn = render_term(a.fn, 2, env);
            std::string arg = render_type(a.arg, 0, env);
            const char* open = a.form == Form::Explicit ? "@(" : "@[";
            const char* close = a.form == Form::Explicit ? ")" : "]";
            return wrap(2, fn + " " + open + arg + close);
          },
          [&](const Asc& a) -> std::string {
            std::string subj = render_term(a.subject, 1, env);
            std::string ty = render_type(a.target, 0, env);
            return wrap(1, subj + " :: " + ty);
          },
      },
      e->node);
}

inline PrettyEnv env_for_type(const TypePtr& t,
                              const std::vector<std::string>& ty_ambient) {
  PrettyEnv env;
  env.ty_names = ty_ambient;
  collect_free_names_type(t, env.ty_reserved);
  return env;
}

inline PrettyEnv env_for_term(const TermPtr& e,
                              const std::vector<std::string>& ty_ambient,
                              const std::vector<std::string>& tm_ambient) {
  PrettyEnv env;
  env.ty_names = ty_ambient;
  env.tm_names = tm_ambient;
  collect_free_names_term(e, env.tm_reserved);
  // Free type names can occur inside annotations and type arguments.
  std::set<std::string> tfree;
  struct {
    void walk(const TermPtr& e, std::set<std::string>& out) {
      std::visit(overloaded{
                     [&](const Var&) {},
                     [&](const FreeV&) {},
                     [&](const Lit&) {},
                     [&](const Abs& a) {
                       collect_free_names_type(a.ann, out);
                       walk(a.body, out);
                     },
                     [&](const App& a) {
                       walk(a.fn, out);
                       walk(a.arg, out);
                     },
                     [&](const TyAbs& a) { walk(a.body, out); },
                     [&](const TyApp& a) {
                       walk(a.fn, out);
                       collect_free_names_type(a.arg, out);
                     },
                     [&](const Asc& a) {
                       walk(a.subject, out);
                       collect_free_names_type(a.target, out);
                     },
                 },
                 e->node);
    }
  } walker;
  walker.walk(e, tfree);
  env.ty_reserved = std::move(tfree);
  return env;
}

}  // namespace detail

inline std::string pretty_type(const TypePtr& t,
                               const std::vector<std::string>& ty_ambient = {}) {
  auto env = detail::env_for_type(t, ty_ambient);
  return detail::render_type(t, 0, env);
}

inline std::string pretty_term(const TermPtr& e,
                               const std::vector<std::string>& ty_ambient = {},
                               const std::vector<std::string>& tm_ambient = {}) {
  auto env = detail::env_for_term(e, ty_ambient, tm_ambient);
  return detail::render_term(e, 0, env);
}

// Display names of a context's entries, for rendering types/terms that refer
// to them by index. Innermost last, matching PrettyEnv's convention.
inline std::pair<std::vector<std::string>, std::vector<std::string>>
context_display_names(const Context& ctx) {
  std::vector<std::string> ty, tm;
  for (const auto& e : ctx.entries) {
    if (const auto* tb = std::get_if<TypeBinding>(&e)) ty.push_back(tb->name);
    else tm.push_back(std::get<TermBinding>(e).name);
  }
  return {ty, tm};
}

}  // namespace fcci
