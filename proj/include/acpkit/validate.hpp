#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "acpkit/term.hpp"

namespace acp {

inline constexpr std::size_t kDefaultUnfoldBudget = 16;

/// A recursive specification that passed validate_spec().
///
/// `original` is the specification as written. `guarded` has the same
/// left-hand sides in the same order, with every right-hand side replaced
/// by the syntactically guarded form reached by unfolding; downstream
/// consumers build their recursion constants over `guarded`.
struct ValidatedSpec {
  std::shared_ptr<const RecSpec> original;
  std::shared_ptr<const RecSpec> guarded;
  std::size_t unfold_rounds = 0;  // maximum over all equations
};

/// Checks distinct left-hand sides and that every free variable of a
/// right-hand side is defined. Each right-hand side that is not guarded is
/// repeatedly rewritten by replacing its unguarded occurrences of other
/// variables by their right-hand sides, at most `unfold_budget` rounds.
/// An unguarded occurrence of the equation's own variable can never be
/// resolved this way and fails immediately.
///
/// Throws ValidationError (DuplicateLhs, UnboundVariable,
/// UnguardedAfterBudget).
ValidatedSpec validate_spec(const RecSpec& spec, std::size_t unfold_budget = kDefaultUnfoldBudget);

/// Validates a specification that is already shared.
ValidatedSpec validate_spec(std::shared_ptr<const RecSpec> spec,
                            std::size_t unfold_budget = kDefaultUnfoldBudget);

}  // namespace acp
