#pragma once

// Higher-order pattern unification (Miller fragment) over the type language.
//
// Constraints are solved modulo beta. A metavariable applied to distinct
// rigid variables that it cannot already see is solved by lambda-abstracting
// them; anything outside that fragment is reported as NonPattern rather than
// guessed at. Scope discipline: a metavariable introduced at context depth K
// may only be solved with types whose free variables were visible at depth K.
// Occurrences of newer bare metavariables inside a solution are pruned to
// fresh metavariables at the older scope.

#include <string>
#include <vector>

#include "fcci/kinds.hpp"
#include "fcci/meta.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

enum class UnifyStatus { Ok, Fail, NonPattern };

class Unifier {
 public:
  Unifier(MetaStore& store, int depth) : store_(store), depth_(depth) {}

  UnifyStatus unify(const TypePtr& a, const TypePtr& b) { return go(a, b, 0); }

  const std::string& nonpattern_reason() const { return reason_; }

 private:
  MetaStore& store_;
  int depth_;             // context type-binder depth of the unification site
  std::string reason_;

  // Zonks the root and reduces head beta-redexes exposed by expansion.
  TypePtr headz(const TypePtr& t, int under) {
    if (const auto* m = std::get_if<TMeta>(&t->node)) {
      if (store_.solved(m->id)) {
        const auto& info = store_.info(m->id);
        TypePtr s = store_.zonk(info.solution, info.scope);
        return headz(shift_type(s, (depth_ - info.scope) + under), under);
      }
      return t;
    }
    if (const auto* app = std::get_if<TApp>(&t->node)) {
      TypePtr fh = headz(app->fn, under);
      if (const auto* lam = std::get_if<TLam>(&fh->node))
        return headz(subst_type_in_type(lam->body, app->arg), under);
      if (fh != app->fn) return t_app(fh, app->arg);
    }
    return t;
  }

  struct Spine {
    const TMeta* meta = nullptr;  // non-null when flex-headed
    TypePtr head;
    std::vector<TypePtr> args;    // outermost application last
  };

  Spine spine_of(const TypePtr& t) {
    Spine s;
    TypePtr cur = t;
    std::vector<TypePtr> rev;
    while (const auto* app = std::get_if<TApp>(&cur->node)) {
      rev.push_back(app->arg);
      cur = app->fn;
    }
    s.head = cur;
    s.meta = std::get_if<TMeta>(&cur->node);
    s.args.assign(rev.rbegin(), rev.rend());
    return s;
  }

  UnifyStatus nonpattern(std::string why) {
    if (reason_.empty()) reason_ = std::move(why);
    return UnifyStatus::NonPattern;
  }

  UnifyStatus go(const TypePtr& a0, const TypePtr& b0, int under) {
    TypePtr a = headz(a0, under);
    TypePtr b = headz(b0, under);

    Spine sa = spine_of(a);
    Spine sb = spine_of(b);
    bool flex_a = sa.meta != nullptr;
    bool flex_b = sb.meta != nullptr;

    if (flex_a && flex_b) return flex_flex(sa, sb, under);
    if (flex_a) return solve_meta(*sa.meta, sa.args, b, under);
    if (flex_b) return solve_meta(*sb.meta, sb.args, a, under);

    // rigid-rigid
    if (!sa.args.empty() || !sb.args.empty()) {
      if (sa.args.size() != sb.args.size()) return UnifyStatus::Fail;
      UnifyStatus st = go_rigid_head(sa.head, sb.head, under);
      if (st != UnifyStatus::Ok) return st;
      for (size_t i = 0; i < sa.args.size(); ++i) {
        st = go(sa.args[i], sb.args[i], under);
        if (st != UnifyStatus::Ok) return st;
      }
      return UnifyStatus::Ok;
    }
    return go_rigid_head(a, b, under);
  }

  UnifyStatus go_rigid_head(const TypePtr& a, const TypePtr& b, int under) {
    if (a->node.index() != b->node.index()) return UnifyStatus::Fail;
    return std::visit(
        overloaded{
            [&](const TVar& x) {
              return x.index == std::get<TVar>(b->node).index ? UnifyStatus::Ok
                                                              : UnifyStatus::Fail;
            },
            [&](const TFree& x) {
              return x.name == std::get<TFree>(b->node).name ? UnifyStatus::Ok
                                                             : UnifyStatus::Fail;
            },
            [&](const TInt&) { return UnifyStatus::Ok; },
            [&](const TMeta&) { return UnifyStatus::Fail; },  // unreachable
            [&](const TPi& x) {
              const auto& y = std::get<TPi>(b->node);
              if (x.form != y.form) return UnifyStatus::Fail;
              UnifyStatus st = go(x.dom, y.dom, under);
              if (st != UnifyStatus::Ok) return st;
              return go(x.cod, y.cod, under);
            },
            [&](const TAll& x) {
              const auto& y = std::get<TAll>(b->node);
              if (x.form != y.form || !kind_eq(x.kind, y.kind))
                return UnifyStatus::Fail;
              return go(x.body, y.body, under + 1);
            },
            [&](const TLam& x) {
              const auto& y = std::get<TLam>(b->node);
              if (!kind_eq(x.kind, y.kind)) return UnifyStatus::Fail;
              return go(x.body, y.body, under + 1);
            },
            [&](const TApp&) { return UnifyStatus::Fail; },  // unreachable
        },
        a->node);
  }

  UnifyStatus flex_flex(const Spine& sa, const Spine& sb, int under) {
    if (sa.meta->id == sb.meta->id) {
      if (sa.args.size() != sb.args.size())
        return UnifyStatus::Fail;  // ill-kinded; defensive
      bool same = true;
      for (size_t i = 0; i < sa.args.size(); ++i)
        if (!alpha_eq_type(store_.zonk(sa.args[i], depth_ + under),
                           store_.zonk(sb.args[i], depth_ + under)))
          same = false;
      if (same) return UnifyStatus::Ok;
      return nonpattern("metavariable constrained against itself with "
                        "different argument spines");
    }
    // Solve the bare side if there is one; prefer assigning the newer meta.
    if (sa.args.empty() && sb.args.empty()) {
      const TMeta* newer = sa.meta;
      TypePtr older_t = t_meta(sb.meta->id, sb.meta->kind, sb.meta->scope,
                               sb.meta->hint);
      if (sb.meta->scope > sa.meta->scope ||
          (sb.meta->scope == sa.meta->scope && sb.meta->id > sa.meta->id)) {
        newer = sb.meta;
        older_t = t_meta(sa.meta->id, sa.meta->kind, sa.meta->scope,
                         sa.meta->hint);
      }
      return solve_meta(*newer, {}, older_t, under);
    }
    if (sa.args.empty()) {
      TypePtr rhs = rebuild_spine(sb);
      return solve_meta(*sa.meta, {}, rhs, under);
    }
    if (sb.args.empty()) {
      TypePtr rhs = rebuild_spine(sa);
      return solve_meta(*sb.meta, {}, rhs, under);
    }
    return nonpattern("two applied metavariables meet");
  }

  static TypePtr rebuild_spine(const Spine& s) {
    TypePtr t = s.head;
    for (const auto& a : s.args) t = t_app(t, a);
    return t;
  }

  // Solves ?m a1..ak == rhs, where the ai must be distinct rigid variables
  // not visible to ?m (Miller's pattern condition).
  UnifyStatus solve_meta(const TMeta& m, const std::vector<TypePtr>& args,
                         const TypePtr& rhs0, int under) {
    int horizon = under + (depth_ - m.scope);  // first index visible to ?m

    std::vector<int> spine_vars;
    for (const auto& a : args) {
      TypePtr az = headz(a, under);
      const auto* v = std::get_if<TVar>(&az->node);
      if (!v)
        return nonpattern("metavariable applied to a non-variable argument");
      if (v->index >= horizon)
        return nonpattern(
            "metavariable applied to a variable it can already see");
      for (int prev : spine_vars)
        if (prev == v->index)
          return nonpattern("metavariable applied to repeated variables");
      spine_vars.push_back(v->index);
    }

    // rhs free variables live at context depth plus the local binder offset.
    TypePtr rhs = store_.zonk(rhs0, depth_ + under);
    // The solution body: spine variables become the lambda binders; visible
    // variables are re-based to the meta's scope; everything else escapes.
    auto k = static_cast<int>(spine_vars.size());
    TypePtr body;
    BuildStatus st = build_solution(rhs, m.id, spine_vars, horizon, k, 0, body);
    if (st == BuildStatus::Occurs || st == BuildStatus::Escape)
      return UnifyStatus::Fail;
    if (st == BuildStatus::NonPattern)
      return nonpattern(reason_.empty()
                            ? "solution falls outside the pattern fragment"
                            : reason_);

    TypePtr solution = body;
    KindPtr kk = m.kind;
    std::vector<KindPtr> doms;
    for (int i = 0; i < k; ++i) {
      const auto* ar = std::get_if<KArrow>(&kk->node);
      if (!ar) return UnifyStatus::Fail;  // ill-kinded; defensive
      doms.push_back(ar->dom);
      kk = ar->cod;
    }
    for (int i = k - 1; i >= 0; --i)
      solution = t_lam("a", doms[static_cast<size_t>(i)], solution);
    store_.solve(m.id, normalize_type(solution));
    return UnifyStatus::Ok;
  }

  enum class BuildStatus { Ok, Occurs, Escape, NonPattern };

  // Rewrites `t` (free variables at offset `off` above the solve site) into
  // the meta's frame: spine variable i becomes lambda index (k-1-i)+off,
  // visible variable v becomes (v - horizon) + k + off.
  BuildStatus build_solution(const TypePtr& t, int meta_id,
                             const std::vector<int>& spine_vars, int horizon,
                             int k, int off, TypePtr& out) {
    return std::visit(
        overloaded{
            [&](const TVar& v) -> BuildStatus {
              if (v.index < off) {
                out = t;
                return BuildStatus::Ok;
              }
              int i = v.index - off;
              for (size_t s = 0; s < spine_vars.size(); ++s) {
                if (spine_vars[s] == i) {
                  out = t_var(k - 1 - static_cast<int>(s) + off, v.hint);
                  return BuildStatus::Ok;
                }
              }
              if (i >= horizon) {
                out = t_var(i - horizon + k + off, v.hint);
                return BuildStatus::Ok;
              }
              return BuildStatus::Escape;
            },
            [&](const TFree&) -> BuildStatus {
              out = t;
              return BuildStatus::Ok;
            },
            [&](const TInt&) -> BuildStatus {
              out = t;
              return BuildStatus::Ok;
            },
            [&](const TMeta& n) -> BuildStatus {
              if (n.id == meta_id) return BuildStatus::Occurs;
              const auto& info = store_.info(n.id);
              if (info.scope <= store_.info(meta_id).scope) {
                out = t;
                return BuildStatus::Ok;
              }
              // Newer bare meta inside the solution: prune to the older scope.
              TypePtr pruned = store_.fresh(info.kind,
                                            store_.info(meta_id).scope, n.hint);
              store_.solve(n.id, pruned);
              out = pruned;
              return BuildStatus::Ok;
            },
            [&](const TPi& p) -> BuildStatus {
              TypePtr d, c;
              BuildStatus st =
                  build_solution(p.dom, meta_id, spine_vars, horizon, k, off, d);
              if (st != BuildStatus::Ok) return st;
              st = build_solution(p.cod, meta_id, spine_vars, horizon, k, off, c);
              if (st != BuildStatus::Ok) return st;
              out = t_pi(p.form, d, c);
              return BuildStatus::Ok;
            },
            [&](const TAll& a) -> BuildStatus {
              TypePtr body;
              BuildStatus st = build_solution(a.body, meta_id, spine_vars,
                                              horizon, k, off + 1, body);
              if (st != BuildStatus::Ok) return st;
              out = t_all(a.form, a.hint, a.kind, body);
              return BuildStatus::Ok;
            },
            [&](const TLam& l) -> BuildStatus {
              TypePtr body;
              BuildStatus st = build_solution(l.body, meta_id, spine_vars,
                                              horizon, k, off + 1, body);
              if (st != BuildStatus::Ok) return st;
              out = t_lam(l.hint, l.kind, body);
              return BuildStatus::Ok;
            },
            [&](const TApp& ap) -> BuildStatus {
              // An applied metavariable inside the right-hand side is outside
              // the fragment we prune; give up honestly.
              Spine s = spine_of_static(t);
              if (s.meta && !store_.solved(s.meta->id) && !s.args.empty() &&
                  s.meta->scope > store_.info(meta_id).scope) {
                reason_ = "applied metavariable inside a solution";
                return BuildStatus::NonPattern;
              }
              TypePtr f, x;
              BuildStatus st =
                  build_solution(ap.fn, meta_id, spine_vars, horizon, k, off, f);
              if (st != BuildStatus::Ok) return st;
              st = build_solution(ap.arg, meta_id, spine_vars, horizon, k, off, x);
              if (st != BuildStatus::Ok) return st;
              out = t_app(f, x);
              return BuildStatus::Ok;
            },
        },
        t->node);
  }

  static Spine spine_of_static(const TypePtr& t) {
    Spine s;
    TypePtr cur = t;
    std::vector<TypePtr> rev;
    while (const auto* app = std::get_if<TApp>(&cur->node)) {
      rev.push_back(app->arg);
      cur = app->fn;
    }
    s.head = cur;
    s.meta = std::get_if<TMeta>(&cur->node);
    s.args.assign(rev.rbegin(), rev.rend());
    return s;
  }
};

}  // namespace fcci
