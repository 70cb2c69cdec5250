#pragma once

// Brute-force resolution oracle: exhaustively enumerates every derivation of
// a goal up to a measure bound, drawing m-all instantiations from a declared
// finite universe (plus in-scope type variables of the required kind) instead
// of unifying. Pure generate-and-test, sharing only the AST, substitution,
// normalization, and witness elaboration with the real engine — no
// metavariables, no search-order trickery. Used to validate `solve`.

#include <optional>
#include <utility>
#include <vector>

#include "fcci/kinds.hpp"
#include "fcci/resolve.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

namespace detail {

class Oracle {
 public:
  Oracle(int limit, std::vector<TypePtr> universe, int root_depth)
      : limit_(limit), universe_(std::move(universe)), root_depth_(root_depth) {}

  // All match-goal completions; `start` carries the cost accumulated so far.
  std::vector<std::pair<Derivation, int>> match(const Context& ctx,
                                                const TypePtr& source,
                                                const TypePtr& target,
                                                int start) {
    std::vector<std::pair<Derivation, int>> out;
    if (start > limit_) return out;
    int depth = ctx.type_depth();

    if (TypePtr stepped = head_beta_step(target)) {
      for (auto& [p, c] : match(ctx, source, stepped, start))
        out.push_back({wrap(Rule::FBeta, source, target, depth, std::move(p)),
                       c});
      return out;
    }
    if (const auto* all = std::get_if<TAll>(&target->node);
        all && all->form == Form::Implicit) {
      Context ctx2 = ctx;
      ctx2.push_type(Form::Implicit, all->hint, all->kind);
      for (auto& [p, c] :
           match(ctx2, shift_type(source, 1), all->body, start + 1)) {
        Derivation d =
            wrap(Rule::FAll, source, target, depth, std::move(p));
        d.binding_name = all->hint.empty() ? "a" : all->hint;
        d.intro_kind = all->kind;
        out.push_back({std::move(d), c});
      }
      return out;
    }
    if (const auto* pi = std::get_if<TPi>(&target->node);
        pi && pi->form == Form::Implicit) {
      Context ctx2 = ctx;
      ctx2.push_term(Form::Implicit, "x", pi->dom);
      for (auto& [p, c] : match(ctx2, source, pi->cod, start + 1)) {
        Derivation d =
            wrap(Rule::FImpl, source, target, depth, std::move(p));
        d.binding_name = "x";
        d.intro_type = pi->dom;
        out.push_back({std::move(d), c});
      }
      return out;
    }

    if (TypePtr stepped = head_beta_step(source)) {
      for (auto& [p, c] : match(ctx, stepped, target, start))
        out.push_back({wrap(Rule::MBeta, source, target, depth, std::move(p)),
                       c});
      return out;
    }
    if (const auto* all = std::get_if<TAll>(&source->node);
        all && all->form == Form::Implicit) {
      for (const TypePtr& inst : candidates(ctx, all->kind)) {
        for (auto& [p, c] : match(ctx, subst_type_in_type(all->body, inst),
                                  target, start + 2)) {
          Derivation d =
              wrap(Rule::MAll, source, target, depth, std::move(p));
          d.instantiation = inst;
          d.binding_name = all->hint.empty() ? "a" : all->hint;
          out.push_back({std::move(d), c});
        }
      }
      return out;
    }
    if (const auto* pi = std::get_if<TPi>(&source->node);
        pi && pi->form == Form::Implicit) {
      // Thread the accumulated cost into the entailment premise so the
      // budget bounds the whole tree; self-referential requirements would
      // otherwise recurse without ever consuming it.
      for (auto& [mp, mc] : match(ctx, pi->cod, target, start + 1)) {
        for (auto& [ep, ec] : entail(ctx, pi->dom, mc)) {
          Derivation d = node_at(Rule::MImpl, source, target, depth);
          d.premises.push_back(ep);
          d.premises.push_back(mp);
          out.push_back({std::move(d), ec});
        }
      }
      return out;
    }

    if (is_simple(source) && type_equiv(source, target))
      out.push_back({node_at(Rule::MEquiv, source, target, depth), start});
    return out;
  }

  // All entailment completions, costed relative to `start`.
  std::vector<std::pair<Derivation, int>> entail(const Context& ctx,
                                                 const TypePtr& target,
                                                 int start) {
    std::vector<std::pair<Derivation, int>> out;
    if (start + 1 > limit_) return out;
    int depth = ctx.type_depth();
    for (const auto& cand : implicit_candidates(ctx)) {
      for (auto& [p, c] : match(ctx, cand.type, target, start + 1)) {
        Derivation d = node_at(Rule::Lookup, nullptr, target, depth);
        d.binding_pos = cand.position;
        d.binding_index = cand.var_index;
        d.binding_name = cand.name;
        d.premises.push_back(std::move(p));
        out.push_back({std::move(d), c});
      }
    }
    return out;
  }

 private:
  int limit_;
  std::vector<TypePtr> universe_;
  int root_depth_;

  static Derivation node_at(Rule r, const TypePtr& src, const TypePtr& tgt,
                            int depth) {
    Derivation d;
    d.rule = r;
    d.goal_source = src;
    d.goal_target = tgt;
    d.ctx_depth = depth;
    return d;
  }
  static Derivation wrap(Rule r, const TypePtr& src, const TypePtr& tgt,
                         int depth, Derivation&& premise) {
    Derivation d = node_at(r, src, tgt, depth);
    d.premises.push_back(std::move(premise));
    return d;
  }

  // Universe entries (weakened past any binders the search introduced) plus
  // every in-scope type variable, filtered to the required kind.
  std::vector<TypePtr> candidates(const Context& ctx, const KindPtr& kind) {
    std::vector<TypePtr> out;
    int extra = ctx.type_depth() - root_depth_;
    for (const TypePtr& u : universe_) {
      Result<KindPtr> kr = kind_of(ctx, shift_type(u, extra));
      if (kr.ok() && kind_eq(kr.value(), kind))
        out.push_back(shift_type(u, extra));
    }
    int index = 0;
    for (size_t i = ctx.entries.size(); i-- > 0;) {
      const auto* tb = std::get_if<TypeBinding>(&ctx.entries[i]);
      if (!tb) continue;
      if (kind_eq(tb->kind, kind)) out.push_back(t_var(index, tb->name));
      ++index;
    }
    return out;
  }
};

}  // namespace detail

// Every witness of every derivation with measure <= limit. For match goals
// the witness embeds `subject` (a free placeholder by default); entailment
// goals (no source) root their witnesses at the looked-up variable.
inline std::vector<Witness> oracle_enumerate(
    const Context& ctx, const std::optional<TypePtr>& source,
    const TypePtr& target, int limit, const std::vector<TypePtr>& universe,
    TermPtr subject = nullptr) {
  detail::Oracle oracle(limit, universe, ctx.type_depth());
  std::vector<std::pair<Derivation, int>> completions;
  TermPtr subj = subject;
  if (source) {
    if (!subj) subj = e_free("_");
    completions = oracle.match(ctx, *source, target, 1);
  } else {
    completions = oracle.entail(ctx, target, 0);
  }
  std::vector<Witness> out;
  for (auto& [d, cost] : completions) {
    Witness w;
    w.term = elaborate_witness(d, subj);
    w.derivation = std::move(d);
    w.measure = cost;
    out.push_back(std::move(w));
  }
  return out;
}

// The minimal-measure representatives up to alpha-equivalence; empty input
// stays empty. Shared by tests comparing the engine against the oracle.
inline std::vector<Witness> minimal_witnesses(const std::vector<Witness>& all) {
  std::vector<Witness> out;
  if (all.empty()) return out;
  int best = all.front().measure;
  for (const auto& w : all) best = std::min(best, w.measure);
  for (const auto& w : all) {
    if (w.measure != best) continue;
    bool dup = false;
    for (const auto& seen : out)
      if (alpha_eq_term(seen.term, w.term)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(w);
  }
  return out;
}

}  // namespace fcci
