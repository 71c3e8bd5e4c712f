#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "acpkit/sos.hpp"

namespace acp {

/// Hennessy-Milner formula used as a distinguishing experiment.
struct Formula {
  enum class Kind { True, Terminates, Diamond, Not };

  Kind kind = Kind::True;
  Action action;                  // Terminates, Diamond
  std::vector<Formula> children;  // Diamond: conjunction; Not: exactly one

  static Formula truth() { return {}; }
  static Formula terminates(Action a) { return {Kind::Terminates, std::move(a), {}}; }
  static Formula diamond(Action a, std::vector<Formula> conj) {
    return {Kind::Diamond, std::move(a), std::move(conj)};
  }
  static Formula negate(Formula f) { return {Kind::Not, {}, {std::move(f)}}; }

  /// Nesting depth of diamonds.
  std::size_t modal_depth() const;

  friend bool operator==(const Formula&, const Formula&) = default;
};

bool satisfies(const Lts& lts, std::size_t state, const Formula& f);
std::string render_formula(const Formula& f);

/// Blocks over the disjoint union of two LTSs: states of the first keep
/// their index, states of the second are offset by its state count.
using Partition = std::vector<std::vector<std::size_t>>;

struct BisimResult {
  bool bisimilar = false;
  Partition partition;               // final, stable partition
  std::size_t rounds = 0;            // refinement rounds until stable
  std::optional<Formula> witness;    // satisfied by the left state only
  std::vector<std::string> explanation;  // one refinement step per line
};

/// Strong bisimilarity by signature refinement on the disjoint union. The
/// initial partition groups states by their set of termination actions;
/// each round splits blocks by (action, target block) signatures.
///
/// Throws BudgetError (InconclusiveTruncated) if either LTS is truncated.
BisimResult bisimilar(const Lts& l1, std::size_t s1, const Lts& l2, std::size_t s2);

inline constexpr std::size_t kDefaultNaiveBound = 2000;

/// Greatest-fixpoint computation straight from the definition: start with
/// all pairs and drop pairs violating a clause until nothing changes.
/// Throws BudgetError (BoundExceeded) above `bound` combined states.
bool bisimilar_naive(const Lts& l1, std::size_t s1, const Lts& l2, std::size_t s2,
                     std::size_t bound = kDefaultNaiveBound);

/// Disjoint union; the second LTS's states are shifted by l1.num_states.
Lts disjoint_union(const Lts& l1, const Lts& l2);

std::string render_partition(const Partition& p, std::size_t left_states);

}  // namespace acp
