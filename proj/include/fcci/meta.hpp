#pragma once

// Metavariable store for the resolution engine.
//
// Each metavariable carries a kind and a scope: the number of context type
// binders in scope when it was introduced. A solution is stored "at scope":
// its free type variables are indices into exactly those binders, with no
// local offset. Expanding a solution at a deeper site shifts it up by the
// difference. Solving goes through a trail so the search can backtrack.

#include <string>
#include <vector>

#include "fcci/kinds.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

class MetaStore {
 public:
  struct Info {
    KindPtr kind;
    int scope = 0;
    TypePtr solution;  // null while unsolved; expressed at `scope`
    std::string hint;
  };

  TypePtr fresh(KindPtr kind, int scope, std::string hint = {}) {
    int id = static_cast<int>(metas_.size());
    metas_.push_back(Info{kind, scope, nullptr, hint});
    return t_meta(id, std::move(kind), scope, std::move(hint));
  }

  const Info& info(int id) const { return metas_[static_cast<size_t>(id)]; }
  bool solved(int id) const { return metas_[static_cast<size_t>(id)].solution != nullptr; }

  void solve(int id, TypePtr solution) {
    auto& m = metas_[static_cast<size_t>(id)];
    m.solution = std::move(solution);
    trail_.push_back(id);
  }

  size_t mark() const { return trail_.size(); }
  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      metas_[static_cast<size_t>(trail_.back())].solution = nullptr;
      trail_.pop_back();
    }
  }

  // Fully expands solved metavariables in a type whose free variables are
  // indexed at context type-depth `depth` (binders inside the type itself are
  // handled by the offset bookkeeping).
  TypePtr zonk(const TypePtr& t, int depth) const { return zonk_at(t, depth, 0); }

 private:
  std::vector<Info> metas_;
  std::vector<int> trail_;

  TypePtr zonk_at(const TypePtr& t, int depth, int under) const {
    return std::visit(
        overloaded{
            [&](const TMeta& m) -> TypePtr {
              const Info& info = metas_[static_cast<size_t>(m.id)];
              if (!info.solution) return t;
              TypePtr s = zonk_at(info.solution, info.scope, 0);
              return shift_type(s, (depth - info.scope) + under);
            },
            [&](const TVar&) -> TypePtr { return t; },
            [&](const TFree&) -> TypePtr { return t; },
            [&](const TInt&) -> TypePtr { return t; },
            [&](const TPi& p) -> TypePtr {
              return t_pi(p.form, zonk_at(p.dom, depth, under),
                          zonk_at(p.cod, depth, under));
            },
            [&](const TAll& a) -> TypePtr {
              return t_all(a.form, a.hint, a.kind,
                           zonk_at(a.body, depth, under + 1));
            },
            [&](const TLam& l) -> TypePtr {
              return t_lam(l.hint, l.kind, zonk_at(l.body, depth, under + 1));
            },
            [&](const TApp& a) -> TypePtr {
              return t_app(zonk_at(a.fn, depth, under),
                           zonk_at(a.arg, depth, under));
            },
        },
        t->node);
  }
};

// Collects the ids of unsolved metavariables in a type.
inline void collect_unsolved_metas(const TypePtr& t, const MetaStore& store,
                                   std::vector<int>& out) {
  std::visit(overloaded{
                 [&](const TMeta& m) {
                   if (store.solved(m.id)) {
                     collect_unsolved_metas(store.info(m.id).solution, store, out);
                     return;
                   }
                   for (int id : out)
                     if (id == m.id) return;
                   out.push_back(m.id);
                 },
                 [&](const TVar&) {},
                 [&](const TFree&) {},
                 [&](const TInt&) {},
                 [&](const TPi& p) {
                   collect_unsolved_metas(p.dom, store, out);
                   collect_unsolved_metas(p.cod, store, out);
                 },
                 [&](const TAll& a) { collect_unsolved_metas(a.body, store, out); },
                 [&](const TLam& l) { collect_unsolved_metas(l.body, store, out); },
                 [&](const TApp& a) {
                   collect_unsolved_metas(a.fn, store, out);
                   collect_unsolved_metas(a.arg, store, out);
                 },
             },
             t->node);
}

// Two canonical closed inhabitants of each kind, used to exhibit ambiguity
// when a derivation leaves an instantiation completely unconstrained.
inline TypePtr canonical_fill_one(const KindPtr& k) {
  if (std::holds_alternative<KStar>(k->node)) return t_int();
  const auto& ar = std::get<KArrow>(k->node);
  return t_lam("a", ar.dom, canonical_fill_one(ar.cod));
}
inline TypePtr canonical_fill_two(const KindPtr& k) {
  if (std::holds_alternative<KStar>(k->node)) return t_arrow(t_int(), t_int());
  const auto& ar = std::get<KArrow>(k->node);
  return t_lam("a", ar.dom, canonical_fill_two(ar.cod));
}

// Replaces the listed unsolved metavariables by closed fills (closed types
// are valid at every scope, so no shifting is needed).
inline TypePtr fill_metas(const TypePtr& t,
                          const std::vector<std::pair<int, TypePtr>>& fills) {
  return std::visit(
      overloaded{
          [&](const TMeta& m) -> TypePtr {
            for (const auto& [id, fill] : fills)
              if (id == m.id) return fill;
            return t;
          },
          [&](const TVar&) -> TypePtr { return t; },
          [&](const TFree&) -> TypePtr { return t; },
          [&](const TInt&) -> TypePtr { return t; },
          [&](const TPi& p) -> TypePtr {
            return t_pi(p.form, fill_metas(p.dom, fills), fill_metas(p.cod, fills));
          },
          [&](const TAll& a) -> TypePtr {
            return t_all(a.form, a.hint, a.kind, fill_metas(a.body, fills));
          },
          [&](const TLam& l) -> TypePtr {
            return t_lam(l.hint, l.kind, fill_metas(l.body, fills));
          },
          [&](const TApp& a) -> TypePtr {
            return t_app(fill_metas(a.fn, fills), fill_metas(a.arg, fills));
          },
      },
      t->node);
}

}  // namespace fcci
