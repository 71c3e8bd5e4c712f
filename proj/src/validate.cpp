#include "acpkit/validate.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "acpkit/errors.hpp"

namespace acp {
namespace {

struct Unfolder {
  const RecSpec& spec;
  const std::string& self;
  bool hit_self = false;
  bool changed = false;

  Term run(const Term& t, bool guarded) {
    switch (t.op()) {
      case Op::Var: {
        if (guarded) return t;
        if (t.var_name() == self) {
          hit_self = true;
          return t;
        }
        changed = true;
        return *spec.find(t.var_name());
      }
      case Op::Inaction:
      case Op::Action:
      case Op::Rec:
        return t;
      case Op::Seq:
        if (t.left().is(Op::Action)) return t;
        return Term::seq(run(t.left(), guarded), run(t.right(), guarded));
      case Op::Encap:
        return Term::encap(t.blocked(), run(t.body(), guarded));
      default:
        return Term::binary(t.op(), run(t.left(), guarded), run(t.right(), guarded));
    }
  }
};

void collect_nested_specs(const Term& t, std::vector<const Term*>& out) {
  if (t.is(Op::Rec)) {
    out.push_back(&t);
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) collect_nested_specs(t.child(i), out);
}

void validate_nested(const RecSpec& spec, std::size_t budget,
                     std::unordered_set<const RecSpec*>& seen);

ValidatedSpec validate_impl(std::shared_ptr<const RecSpec> spec, std::size_t budget,
                            std::unordered_set<const RecSpec*>& seen) {
  std::set<std::string> lhs;
  for (const auto& e : spec->equations()) {
    if (!lhs.insert(e.var).second) {
      throw ValidationError(ValidationError::Kind::DuplicateLhs,
                            "duplicate left-hand side " + e.var);
    }
  }
  for (const auto& e : spec->equations()) {
    for (const auto& v : free_vars(e.rhs)) {
      if (!lhs.count(v)) {
        throw ValidationError(ValidationError::Kind::UnboundVariable,
                              "variable " + v + " in the equation for " + e.var +
                                  " has no defining equation");
      }
    }
  }
  validate_nested(*spec, budget, seen);

  ValidatedSpec out;
  out.original = spec;
  std::vector<Equation> guarded;
  guarded.reserve(spec->size());
  bool any_change = false;
  for (const auto& e : spec->equations()) {
    Term rhs = e.rhs;
    std::size_t rounds = 0;
    while (!is_guarded(rhs)) {
      Unfolder u{*spec, e.var};
      Term next = u.run(rhs, false);
      if (u.hit_self || rounds == budget) {
        throw ValidationError(
            ValidationError::Kind::UnguardedAfterBudget,
            "equation for " + e.var + " is not guarded after " + std::to_string(rounds) +
                " unfolding round(s)" + (u.hit_self ? " (unguarded self-reference)" : ""));
      }
      rhs = std::move(next);
      ++rounds;
      any_change = true;
    }
    out.unfold_rounds = std::max(out.unfold_rounds, rounds);
    guarded.push_back({e.var, std::move(rhs)});
  }
  out.guarded = any_change ? std::make_shared<const RecSpec>(std::move(guarded)) : spec;
  return out;
}

void validate_nested(const RecSpec& spec, std::size_t budget,
                     std::unordered_set<const RecSpec*>& seen) {
  std::vector<const Term*> nested;
  for (const auto& e : spec.equations()) collect_nested_specs(e.rhs, nested);
  for (const Term* r : nested) {
    if (seen.insert(r->spec_ptr().get()).second) validate_impl(r->spec_ptr(), budget, seen);
  }
}

}  // namespace

ValidatedSpec validate_spec(std::shared_ptr<const RecSpec> spec, std::size_t unfold_budget) {
  std::unordered_set<const RecSpec*> seen{spec.get()};
  return validate_impl(std::move(spec), unfold_budget, seen);
}

ValidatedSpec validate_spec(const RecSpec& spec, std::size_t unfold_budget) {
  return validate_spec(std::make_shared<const RecSpec>(spec), unfold_budget);
}

}  // namespace acp
