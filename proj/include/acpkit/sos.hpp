#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "acpkit/comm.hpp"
#include "acpkit/term.hpp"

namespace acp {

/// Outgoing behaviour of one closed term: transitions t -a-> t' and the
/// actions a with t -a-> (successful termination).
struct Transitions {
  std::vector<std::pair<Action, Term>> steps;  // rule order, duplicates removed
  ActionSet terminations;
};

inline constexpr std::size_t kDefaultUnfoldDepth = 10'000;

/// The transition rules of ACP with guarded recursion, applied to `t`.
/// Recursion constants are handled by the RDP-unfolded body; more than
/// `max_unfold_depth` nested unfoldings without an action prefix throws
/// BudgetError (UnguardedRecursionDepth). A free variable throws
/// ValidationError (UnguardedTerm).
Transitions step_relation(const Term& t, const CommFn& f,
                          std::size_t max_unfold_depth = kDefaultUnfoldDepth);

struct Edge {
  std::size_t src;
  Action action;
  std::size_t dst;

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct TerminationFlag {
  std::size_t state;
  Action action;

  friend auto operator<=>(const TerminationFlag&, const TerminationFlag&) = default;
  friend bool operator==(const TerminationFlag&, const TerminationFlag&) = default;
};

/// Finite labelled transition system with action-labelled termination.
/// State 0 is the root. `state_terms` is either empty (a synthetic LTS) or
/// holds the pairwise distinct closed term of every state.
struct Lts {
  std::size_t num_states = 0;
  std::vector<Term> state_terms;
  std::vector<Edge> edges;                   // sorted, unique
  std::vector<TerminationFlag> terminations;  // sorted, unique
  bool truncated = false;

  /// Sorts and deduplicates edges and terminations; checks indices.
  void normalize();
};

inline constexpr std::size_t kDefaultMaxStates = 10'000;

/// Breadth-first closure of step_relation() from `t`; states are identified
/// by structural equality and numbered in discovery order. When a new
/// state would exceed `max_states`, exploration stops and the result is
/// marked truncated.
Lts generate_lts(const Term& t, const CommFn& f, std::size_t max_states = kDefaultMaxStates,
                 std::size_t max_unfold_depth = kDefaultUnfoldDepth);

/// `states N`, then `edge <src> <action> <dst>` and `term <state> <action>`
/// lines.
std::string to_lts_text(const Lts& lts);
/// Parses the format written by to_lts_text(). Throws ParseError.
Lts from_lts_text(const std::string& text);

/// Aldebaran `.aut`. Termination flags become edges labelled `<action>✓`
/// into one extra final state numbered after all others.
std::string to_aut(const Lts& lts);

}  // namespace acp
