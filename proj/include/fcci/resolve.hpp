#pragma once

// Implicit resolution: the matching judgment (source adapted to target) and
// entailment (target derivable from an implicit binding), searched bounded by
// witness measure with iterative deepening, so minimal witnesses are found
// first and equal-measure competitors surface as ambiguity.
//
// Instantiation (m-all) goes through metavariables solved by pattern
// unification. Two honesty flags accompany every outcome: bound_cut (some
// branch exceeded the measure limit) and fragment_cut (some branch needed a
// constraint outside the pattern fragment, or a goal whose target was an
// undetermined metavariable failed every explored alternative). A fragment
// cut at or below the minimal found measure makes the outcome Incomplete
// rather than claiming uniqueness.

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fcci/core.hpp"
#include "fcci/kinds.hpp"
#include "fcci/meta.hpp"
#include "fcci/pretty.hpp"
#include "fcci/syntax.hpp"
#include "fcci/unify.hpp"

namespace fcci {

enum class Rule : uint8_t { MBeta, MAll, MImpl, MEquiv, FBeta, FAll, FImpl, Lookup };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::MBeta: return "m-beta";
    case Rule::MAll: return "m-all";
    case Rule::MImpl: return "m-impl";
    case Rule::MEquiv: return "m-equiv";
    case Rule::FBeta: return "f-beta";
    case Rule::FAll: return "f-all";
    case Rule::FImpl: return "f-impl";
    case Rule::Lookup: return "lookup";
  }
  return "?";
}

// One node of a resolution derivation. Premises are stored in rule order:
// m-impl holds [entailment, match]; every other rule has at most one premise.
struct Derivation {
  Rule rule = Rule::MEquiv;
  std::vector<Derivation> premises;
  TypePtr instantiation;      // m-all: the chosen type
  int binding_pos = -1;       // lookup: entry position in the goal context
  int binding_index = -1;     // lookup: term de Bruijn index at that context
  std::string binding_name;   // lookup / f-all / f-impl / m-all display name
  KindPtr intro_kind;         // f-all
  TypePtr intro_type;         // f-impl
  TypePtr goal_source;        // snapshot; null for entailment goals
  TypePtr goal_target;        // snapshot
  int ctx_depth = 0;          // type-binder depth of the goal context
};

struct Witness {
  TermPtr term;               // fully explicit; embeds the goal subject
  Derivation derivation;
  int measure = 0;
};

struct SolveResult {
  enum class Kind { Unique, Ambiguous, NotDerivable, Exhausted, Incomplete };
  Kind kind = Kind::NotDerivable;
  std::vector<Witness> witnesses;  // minimal-measure class representatives
  int limit = 0;                   // echo of the bound (for Exhausted)
  std::string reason;              // for Incomplete
  bool bound_cut = false;
  bool fragment_cut = false;
};

struct SolveOptions {
  int limit = 64;
  unsigned shuffle_seed = 0;  // 0 = canonical candidate order
  TermPtr subject;            // match goals: term the witness adapts
};

// ---------------------------------------------------------------------------
// Elaboration of a complete derivation into an explicit term

inline TermPtr elaborate_witness(const Derivation& d, const TermPtr& subject) {
  switch (d.rule) {
    case Rule::MEquiv:
      return subject;
    case Rule::MBeta:
    case Rule::FBeta:
      return elaborate_witness(d.premises[0], subject);
    case Rule::MAll:
      return elaborate_witness(
          d.premises[0],
          e_tyapp(Form::Explicit, subject, erase_type(d.instantiation)));
    case Rule::MImpl: {
      TermPtr w = elaborate_witness(d.premises[0], nullptr);
      return elaborate_witness(d.premises[1],
                               e_app(Form::Explicit, subject, w));
    }
    case Rule::FAll: {
      TermPtr inner =
          elaborate_witness(d.premises[0], shift_term(subject, 0, 1));
      return e_tyabs(Form::Explicit, d.binding_name, d.intro_kind, inner);
    }
    case Rule::FImpl: {
      TermPtr inner =
          elaborate_witness(d.premises[0], shift_term(subject, 1, 0));
      return e_abs(Form::Explicit, d.binding_name, erase_type(d.intro_type),
                   inner);
    }
    case Rule::Lookup:
      return elaborate_witness(d.premises[0],
                               e_var(d.binding_index, d.binding_name));
  }
  return subject;
}

// ---------------------------------------------------------------------------
// Context candidates for the lookup rule

struct ImplicitCandidate {
  int position = 0;    // index into Context::entries
  int var_index = 0;   // term de Bruijn index at the full context
  TypePtr type;        // weakened to the full context's type depth
  std::string name;
};

// Every implicit term binding, shadowed or not, outermost first.
inline std::vector<ImplicitCandidate> implicit_candidates(const Context& ctx) {
  std::vector<ImplicitCandidate> out;
  int total_depth = ctx.type_depth();
  int tdb = 0;  // type binders before the current position
  std::vector<std::pair<size_t, std::pair<int, TypePtr>>> terms;
  int term_count = 0;
  for (size_t pos = 0; pos < ctx.entries.size(); ++pos) {
    if (std::holds_alternative<TypeBinding>(ctx.entries[pos])) {
      ++tdb;
      continue;
    }
    const auto& tb = std::get<TermBinding>(ctx.entries[pos]);
    if (tb.form == Form::Implicit) {
      ImplicitCandidate c;
      c.position = static_cast<int>(pos);
      c.type = shift_type(tb.type, total_depth - tdb);
      c.name = tb.name;
      c.var_index = term_count;  // fixed up below
      out.push_back(c);
    }
    ++term_count;
  }
  for (auto& c : out) c.var_index = term_count - 1 - c.var_index;
  return out;
}

// ---------------------------------------------------------------------------
// One-step rule expansion (introspection; mirrors the search's dispatch)

struct StepExpansion {
  Rule rule;
  std::optional<TypePtr> sub_source;
  std::optional<TypePtr> sub_target;
  std::optional<TypePtr> entail_target;  // m-impl
  std::string binding_name;              // lookup
};

namespace detail {

// Reduces the innermost head application of a type-application spine whose
// head is a type-level lambda; null if the root is not such a redex.
inline TypePtr head_beta_step(const TypePtr& t) {
  const auto* app = std::get_if<TApp>(&t->node);
  if (!app) return nullptr;
  if (const auto* lam = std::get_if<TLam>(&app->fn->node))
    return subst_type_in_type(lam->body, app->arg);
  TypePtr inner = head_beta_step(app->fn);
  if (!inner) return nullptr;
  return t_app(inner, app->arg);
}

inline bool flex_rooted(const TypePtr& t) {
  const Type* h = spine_head(t);
  return std::holds_alternative<TMeta>(h->node);
}

}  // namespace detail

inline std::vector<StepExpansion> match_step(const Context& ctx,
                                             const std::optional<TypePtr>& source,
                                             const TypePtr& target) {
  std::vector<StepExpansion> out;
  if (!source) {  // entailment: lookup over every implicit binding
    for (const auto& c : implicit_candidates(ctx)) {
      StepExpansion e{Rule::Lookup, c.type, target, std::nullopt, c.name};
      out.push_back(std::move(e));
    }
    return out;
  }
  // Focusing phase: the target decides.
  if (TypePtr stepped = detail::head_beta_step(target)) {
    out.push_back({Rule::FBeta, *source, stepped, std::nullopt, {}});
    return out;
  }
  if (const auto* all = std::get_if<TAll>(&target->node);
      all && all->form == Form::Implicit) {
    out.push_back({Rule::FAll, shift_type(*source, 1), all->body, std::nullopt,
                   all->hint});
    return out;
  }
  if (const auto* pi = std::get_if<TPi>(&target->node);
      pi && pi->form == Form::Implicit) {
    out.push_back({Rule::FImpl, *source, pi->cod, std::nullopt, "x"});
    return out;
  }
  // Matching phase: the source decides.
  if (TypePtr stepped = detail::head_beta_step(*source)) {
    out.push_back({Rule::MBeta, stepped, target, std::nullopt, {}});
    return out;
  }
  if (const auto* all = std::get_if<TAll>(&(*source)->node);
      all && all->form == Form::Implicit) {
    TypePtr mv = t_meta(0, all->kind, ctx.type_depth(), all->hint);
    out.push_back({Rule::MAll, subst_type_in_type(all->body, mv), target,
                   std::nullopt, all->hint});
    return out;
  }
  if (const auto* pi = std::get_if<TPi>(&(*source)->node);
      pi && pi->form == Form::Implicit) {
    out.push_back({Rule::MImpl, pi->cod, target, pi->dom, {}});
    return out;
  }
  if (is_simple(*source) && type_equiv(*source, target))
    out.push_back({Rule::MEquiv, *source, target, std::nullopt, {}});
  return out;
}

// ---------------------------------------------------------------------------
// The bounded search

namespace detail {

class Solver {
 public:
  Solver(Context ctx, std::optional<TypePtr> source, TypePtr target,
         SolveOptions opts)
      : root_ctx_(std::move(ctx)),
        root_source_(std::move(source)),
        root_target_(std::move(target)),
        opts_(std::move(opts)) {}

  SolveResult run() {
    SolveResult res;
    res.limit = opts_.limit;
    bool fragment_any = false;
    int fragment_lb_overall = INT_MAX;
    std::string fragment_reason_overall;
    for (level_ = 1; level_ <= opts_.limit; ++level_) {
      store_ = MetaStore{};
      simple_checks_.clear();
      found_.clear();
      bound_cut_ = false;
      fragment_cut_ = false;
      fragment_lb_ = INT_MAX;
      fragment_reason_.clear();
      rng_.seed(opts_.shuffle_seed == 0 ? 0xF0C1u : opts_.shuffle_seed);

      auto k = [this](int cost, Derivation&& d) { complete_root(cost, std::move(d)); };
      if (root_source_) {
        solve_match(root_ctx_, *root_source_, root_target_, 1, 0, k);
      } else {
        solve_entail(root_ctx_, root_target_, 0, 0, k);
      }

      if (fragment_cut_) {
        fragment_any = true;
        fragment_lb_overall = std::min(fragment_lb_overall, fragment_lb_);
        if (fragment_reason_overall.empty())
          fragment_reason_overall = fragment_reason_;
      }

      if (!found_.empty()) {
        res.bound_cut = bound_cut_;
        res.fragment_cut = fragment_any;
        if (fragment_any && fragment_lb_overall <= level_) {
          res.kind = SolveResult::Kind::Incomplete;
          res.reason = fragment_reason_overall;
          res.witnesses = std::move(found_);
          return res;
        }
        res.witnesses = std::move(found_);
        res.kind = res.witnesses.size() == 1 ? SolveResult::Kind::Unique
                                             : SolveResult::Kind::Ambiguous;
        return res;
      }
    }
    res.bound_cut = bound_cut_;
    res.fragment_cut = fragment_any;
    if (fragment_any && fragment_lb_overall <= opts_.limit) {
      res.kind = SolveResult::Kind::Incomplete;
      res.reason = fragment_reason_overall;
    } else if (bound_cut_ || fragment_any) {
      res.kind = SolveResult::Kind::Exhausted;
    } else {
      res.kind = SolveResult::Kind::NotDerivable;
    }
    return res;
  }

 private:
  using Cont = std::function<void(int, Derivation&&)>;

  Context root_ctx_;
  std::optional<TypePtr> root_source_;
  TypePtr root_target_;
  SolveOptions opts_;

  MetaStore store_;
  int level_ = 0;
  bool bound_cut_ = false;
  bool fragment_cut_ = false;
  int fragment_lb_ = INT_MAX;
  std::string fragment_reason_;
  std::vector<std::pair<TypePtr, int>> simple_checks_;  // (type, ctx depth)
  std::vector<Witness> found_;
  std::mt19937 rng_;

  void note_bound_cut() { bound_cut_ = true; }
  void note_fragment_cut(int lower_bound, const std::string& why) {
    fragment_cut_ = true;
    if (lower_bound < fragment_lb_) fragment_lb_ = lower_bound;
    if (fragment_reason_.empty()) fragment_reason_ = why;
  }

  static Derivation node(Rule r, const std::optional<TypePtr>& src,
                         const TypePtr& tgt, int depth) {
    Derivation d;
    d.rule = r;
    d.goal_source = src ? *src : nullptr;
    d.goal_target = tgt;
    d.ctx_depth = depth;
    return d;
  }

  // --- match goals --------------------------------------------------------

  void solve_match(const Context& ctx, const TypePtr& source,
                   const TypePtr& target, int cost, int reserve, const Cont& k) {
    if (cost + reserve > level_) {
      note_bound_cut();
      return;
    }
    int depth = ctx.type_depth();
    TypePtr tgt = store_.zonk(target, depth);

    // Focusing phase: decompose a non-simple target.
    if (TypePtr stepped = head_beta_step(tgt)) {
      Derivation d = node(Rule::FBeta, source, tgt, depth);
      solve_match(ctx, source, stepped, cost, reserve,
                  [&](int c2, Derivation&& p) {
                    Derivation out = d;
                    out.premises.push_back(std::move(p));
                    k(c2, std::move(out));
                  });
      return;
    }
    if (const auto* all = std::get_if<TAll>(&tgt->node);
        all && all->form == Form::Implicit) {
      Context ctx2 = ctx;
      ctx2.push_type(Form::Implicit, all->hint, all->kind);
      Derivation d = node(Rule::FAll, source, tgt, depth);
      d.binding_name = all->hint.empty() ? "a" : all->hint;
      d.intro_kind = all->kind;
      solve_match(ctx2, shift_type(source, 1), all->body, cost + 1, reserve,
                  [&](int c2, Derivation&& p) {
                    Derivation out = d;
                    out.premises.push_back(std::move(p));
                    k(c2, std::move(out));
                  });
      return;
    }
    if (const auto* pi = std::get_if<TPi>(&tgt->node);
        pi && pi->form == Form::Implicit) {
      Context ctx2 = ctx;
      ctx2.push_term(Form::Implicit, "x", pi->dom);
      Derivation d = node(Rule::FImpl, source, tgt, depth);
      d.binding_name = "x";
      d.intro_type = pi->dom;
      solve_match(ctx2, source, pi->cod, cost + 1, reserve,
                  [&](int c2, Derivation&& p) {
                    Derivation out = d;
                    out.premises.push_back(std::move(p));
                    k(c2, std::move(out));
                  });
      return;
    }

    bool flex_target = flex_rooted(tgt);
    if (flex_target) {
      // Treat the undetermined target as simple for the matching phase, but
      // demand that it zonks to a simple type at completion, and flag the
      // unexplored focusing alternatives if nothing closes this goal.
      simple_checks_.emplace_back(tgt, depth);
      int successes = 0;
      m_phase(ctx, source, tgt, cost, reserve, depth,
              [&](int c2, Derivation&& p) {
                ++successes;
                k(c2, std::move(p));
              });
      simple_checks_.pop_back();
      if (successes == 0)
        note_fragment_cut(cost + reserve,
                          "goal target is an undetermined instantiation "
                          "variable; implicit-form instantiations were not "
                          "explored");
      return;
    }
    m_phase(ctx, source, tgt, cost, reserve, depth, k);
  }

  // Matching phase: the target is simple (or treated as such); the source's
  // implicit structure is adapted away.
  void m_phase(const Context& ctx, const TypePtr& source, const TypePtr& tgt,
               int cost, int reserve, int depth, const Cont& k) {
    if (cost + reserve > level_) {
      note_bound_cut();
      return;
    }
    TypePtr src = store_.zonk(source, depth);

    if (TypePtr stepped = head_beta_step(src)) {
      Derivation d = node(Rule::MBeta, src, tgt, depth);
      m_phase(ctx, stepped, tgt, cost, reserve, depth,
              [&](int c2, Derivation&& p) {
                Derivation out = d;
                out.premises.push_back(std::move(p));
                k(c2, std::move(out));
              });
      return;
    }
    if (const auto* all = std::get_if<TAll>(&src->node);
        all && all->form == Form::Implicit) {
      if (cost + 2 + reserve > level_) {
        note_bound_cut();
        return;
      }
      TypePtr mv = store_.fresh(all->kind, depth, all->hint);
      Derivation d = node(Rule::MAll, src, tgt, depth);
      d.instantiation = mv;
      d.binding_name = all->hint.empty() ? "a" : all->hint;
      m_phase(ctx, subst_type_in_type(all->body, mv), tgt, cost + 2, reserve,
              depth, [&](int c2, Derivation&& p) {
                Derivation out = d;
                out.premises.push_back(std::move(p));
                k(c2, std::move(out));
              });
      return;
    }
    if (const auto* pi = std::get_if<TPi>(&src->node);
        pi && pi->form == Form::Implicit) {
      if (cost + 1 + reserve + 1 > level_) {  // pending entailment costs >= 1
        note_bound_cut();
        return;
      }
      Derivation d = node(Rule::MImpl, src, tgt, depth);
      TypePtr dom = pi->dom;
      // Explore the match premise first so its solutions narrow the
      // entailment; the derivation stores [entailment, match].
      m_phase(ctx, pi->cod, tgt, cost + 1, reserve + 1, depth,
              [&](int c2, Derivation&& d_match) {
                solve_entail(ctx, dom, c2, reserve,
                             [&](int c3, Derivation&& d_entail) {
                               Derivation out = d;
                               out.premises.push_back(std::move(d_entail));
                               out.premises.push_back(std::move(d_match));
                               k(c3, std::move(out));
                             });
              });
      return;
    }

    bool flex_source = flex_rooted(src);
    if (!flex_source && !is_simple(src)) return;  // no rule applies
    if (flex_source) simple_checks_.emplace_back(src, depth);

    size_t mark = store_.mark();
    Unifier u(store_, depth);
    UnifyStatus st = u.unify(src, tgt);
    if (st == UnifyStatus::Ok) {
      Derivation d = node(Rule::MEquiv, src, tgt, depth);
      k(cost, std::move(d));
    } else if (st == UnifyStatus::NonPattern) {
      note_fragment_cut(cost + reserve, u.nonpattern_reason());
    }
    store_.undo_to(mark);
    if (flex_source) simple_checks_.pop_back();
  }

  // --- entailment goals ---------------------------------------------------

  void solve_entail(const Context& ctx, const TypePtr& target, int cost,
                    int reserve, const Cont& k) {
    if (cost + 1 + reserve > level_) {
      note_bound_cut();
      return;
    }
    int depth = ctx.type_depth();
    std::vector<ImplicitCandidate> cands = implicit_candidates(ctx);
    if (opts_.shuffle_seed != 0)
      std::shuffle(cands.begin(), cands.end(), rng_);

    for (const auto& c : cands) {
      size_t mark = store_.mark();
      size_t checks_mark = simple_checks_.size();
      Derivation d = node(Rule::Lookup, std::nullopt, target, depth);
      d.binding_pos = c.position;
      d.binding_index = c.var_index;
      d.binding_name = c.name;
      solve_match(ctx, c.type, target, cost + 1, reserve,
                  [&](int c2, Derivation&& p) {
                    Derivation out = d;
                    out.premises.push_back(std::move(p));
                    k(c2, std::move(out));
                  });
      store_.undo_to(mark);
      simple_checks_.resize(checks_mark);
    }
  }

  // --- completion ----------------------------------------------------------

  void complete_root(int cost, Derivation&& d) {
    if (cost != level_) return;  // lower-measure completions were found earlier

    std::vector<int> unsolved;
    Derivation z = std::move(d);
    finalize_zonk(z, unsolved);
    for (const auto& [t, depth] : simple_checks_)
      collect_unsolved_metas(store_.zonk(t, depth), store_, unsolved);

    auto emit = [&](const std::vector<std::pair<int, TypePtr>>& fills) {
      for (const auto& [t, depth] : simple_checks_) {
        TypePtr tz = normalize_type(fill_metas(store_.zonk(t, depth), fills));
        if (!is_simple(tz)) {
          note_fragment_cut(cost,
                            "a goal treated as simple resolved to a "
                            "non-simple type");
          return;
        }
      }
      Derivation w = fill_derivation(z, fills);
      TermPtr subject = opts_.subject;
      if (root_source_ && !subject) subject = e_free("_");
      TermPtr term = elaborate_witness(w, subject);
      for (const auto& existing : found_)
        if (alpha_eq_term(existing.term, term)) return;
      found_.push_back(Witness{term, std::move(w), cost});
    };

    if (unsolved.empty()) {
      emit({});
      return;
    }
    // Completely unconstrained instantiations admit infinitely many
    // derivations; exhibit the ambiguity with two canonical fills.
    std::vector<std::pair<int, TypePtr>> one, two;
    for (int id : unsolved) {
      one.emplace_back(id, canonical_fill_one(store_.info(id).kind));
      two.emplace_back(id, canonical_fill_two(store_.info(id).kind));
    }
    emit(one);
    emit(two);
  }

  void finalize_zonk(Derivation& d, std::vector<int>& unsolved) {
    auto clean = [&](TypePtr& t) {
      if (!t) return;
      TypePtr tz = store_.zonk(t, d.ctx_depth);
      collect_unsolved_metas(tz, store_, unsolved);
      t = normalize_type(tz);
    };
    clean(d.instantiation);
    clean(d.intro_type);
    clean(d.goal_source);
    clean(d.goal_target);
    for (auto& p : d.premises) finalize_zonk(p, unsolved);
  }

  Derivation fill_derivation(const Derivation& d,
                             const std::vector<std::pair<int, TypePtr>>& fills) {
    Derivation out = d;
    auto fill = [&](TypePtr& t) {
      if (t) t = normalize_type(fill_metas(t, fills));
    };
    fill(out.instantiation);
    fill(out.intro_type);
    fill(out.goal_source);
    fill(out.goal_target);
    out.premises.clear();
    for (const auto& p : d.premises)
      out.premises.push_back(fill_derivation(p, fills));
    return out;
  }
};

}  // namespace detail

// Solves the goal: with a source, the matching judgment (the witness embeds
// `opts.subject`, defaulting to a free placeholder `_`); without a source,
// entailment of the target (the witness is rooted at a context variable).
inline SolveResult solve(const Context& ctx, std::optional<TypePtr> source,
                         const TypePtr& target, const SolveOptions& opts = {}) {
  detail::Solver solver(ctx, std::move(source), target, opts);
  return solver.run();
}

// ---------------------------------------------------------------------------
// Trace rendering: one line per rule, indented by derivation depth.

namespace detail {

inline void render_derivation_rec(const Derivation& d,
                                  std::vector<std::string>& ty_names,
                                  const std::vector<std::string>& tm_names,
                                  int indent, std::string& out) {
  out.append(static_cast<size_t>(indent) * 2, ' ');
  out += rule_name(d.rule);
  out += ": ";
  if (d.goal_source) {
    out += pretty_type(d.goal_source, ty_names);
    out += " ~> ";
  }
  out += pretty_type(d.goal_target, ty_names);
  switch (d.rule) {
    case Rule::MAll:
      out += "  with ";
      out += d.binding_name.empty() ? "a" : d.binding_name;
      out += " := ";
      out += d.instantiation ? pretty_type(d.instantiation, ty_names) : "?";
      break;
    case Rule::Lookup:
      out += "  via ";
      out += d.binding_name;
      break;
    case Rule::FAll:
      out += "  intro [";
      out += d.binding_name;
      out += " : ";
      out += d.intro_kind ? pretty_kind(d.intro_kind) : "*";
      out += "]";
      break;
    case Rule::FImpl:
      out += "  intro [";
      out += d.binding_name;
      out += " : ";
      out += d.intro_type ? pretty_type(d.intro_type, ty_names) : "?";
      out += "]";
      break;
    default:
      break;
  }
  out += "\n";
  bool pushed = d.rule == Rule::FAll;
  if (pushed) ty_names.push_back(d.binding_name);
  for (const auto& p : d.premises)
    render_derivation_rec(p, ty_names, tm_names, indent + 1, out);
  if (pushed) ty_names.pop_back();
}

}  // namespace detail

inline std::string render_derivation(const Derivation& d, const Context& ctx) {
  auto [ty, tm] = context_display_names(ctx);
  std::string out;
  detail::render_derivation_rec(d, ty, tm, 0, out);
  return out;
}

}  // namespace fcci
