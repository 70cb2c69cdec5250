#pragma once

// Call-by-value, left-to-right evaluation of core terms with an environment
// machine. Type applications are the only type-aware step: they substitute
// the argument into the abstraction body. A step budget guards against
// pipeline bugs; well-typed core terms normalize long before it runs out.

#include <memory>
#include <string>
#include <variant>

#include "fcci/diag.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct EnvNode;
using EnvPtr = std::shared_ptr<const EnvNode>;
struct EnvNode {
  ValuePtr value;
  EnvPtr next;
};

inline EnvPtr env_extend(EnvPtr env, ValuePtr v) {
  return std::make_shared<EnvNode>(EnvNode{std::move(v), std::move(env)});
}
inline const ValuePtr* env_lookup(const EnvPtr& env, int index) {
  const EnvNode* n = env.get();
  while (n && index > 0) {
    n = n->next.get();
    --index;
  }
  return n ? &n->value : nullptr;
}

struct IntValue {
  long long value;
};
struct Closure {
  TermPtr abs;  // an Abs node
  EnvPtr env;
};
struct TypeClosure {
  TermPtr tyabs;  // a TyAbs node
  EnvPtr env;
};
struct Value {
  std::variant<IntValue, Closure, TypeClosure> node;
};

inline ValuePtr v_int(long long n) {
  return std::make_shared<Value>(Value{IntValue{n}});
}

inline std::string render_value(const ValuePtr& v) {
  return std::visit(
      overloaded{
          [](const IntValue& i) { return std::to_string(i.value); },
          [](const Closure&) { return std::string("<closure>"); },
          [](const TypeClosure&) { return std::string("<type closure>"); },
      },
      v->node);
}

struct EvalOptions {
  long long fuel = 1000000;
};

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(long long fuel) : fuel_(fuel), budget_(fuel) {}

  Result<ValuePtr> eval(const TermPtr& e, const EnvPtr& env) {
    if (--budget_ < 0)
      return make_error("E402",
                        "evaluation exceeded the fuel budget of " +
                            std::to_string(fuel_) + " steps",
                        e->span);
    return std::visit(
        overloaded{
            [&](const Var& v) -> Result<ValuePtr> {
              const ValuePtr* found = env_lookup(env, v.index);
              if (!found) return stuck("unbound variable", e->span);
              return *found;
            },
            [&](const FreeV&) -> Result<ValuePtr> {
              return stuck("free variable", e->span);
            },
            [&](const Lit& l) -> Result<ValuePtr> { return v_int(l.value); },
            [&](const Abs&) -> Result<ValuePtr> {
              return ValuePtr(std::make_shared<Value>(Value{Closure{e, env}}));
            },
            [&](const App& a) -> Result<ValuePtr> {
              Result<ValuePtr> vf = eval(a.fn, env);
              if (!vf.ok()) return vf.error();
              Result<ValuePtr> va = eval(a.arg, env);
              if (!va.ok()) return va.error();
              const auto* cl = std::get_if<Closure>(&vf.value()->node);
              if (!cl) return stuck("application of a non-closure", e->span);
              const auto& abs = std::get<Abs>(cl->abs->node);
              return eval(abs.body, env_extend(cl->env, va.value()));
            },
            [&](const TyAbs&) -> Result<ValuePtr> {
              return ValuePtr(std::make_shared<Value>(Value{TypeClosure{e, env}}));
            },
            [&](const TyApp& a) -> Result<ValuePtr> {
              Result<ValuePtr> vf = eval(a.fn, env);
              if (!vf.ok()) return vf.error();
              const auto* tc = std::get_if<TypeClosure>(&vf.value()->node);
              if (!tc)
                return stuck("type application of a non-type-closure",
                             e->span);
              const auto& tyabs = std::get<TyAbs>(tc->tyabs->node);
              return eval(subst_type_in_term(tyabs.body, a.arg), tc->env);
            },
            [&](const Asc&) -> Result<ValuePtr> {
              return stuck("ascription in core term", e->span);
            },
        },
        e->node);
  }

 private:
  long long fuel_;
  long long budget_;

  static Diagnostic stuck(const std::string& what, Span sp) {
    return make_error("E999", "internal evaluation error: " + what, sp);
  }
};

}  // namespace detail

inline Result<ValuePtr> evaluate(const TermPtr& e,
                                 const EvalOptions& opts = {}) {
  detail::Evaluator ev(opts.fuel);
  return ev.eval(e, nullptr);
}

}  // namespace fcci
