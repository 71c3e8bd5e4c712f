#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "acpkit/term.hpp"

namespace acp {

/// An action or the inaction constant (nullopt).
using MaybeAction = std::optional<Action>;

std::string to_string(const MaybeAction& a);

/// Communication function over an alphabet. Pairs are stored unordered, so
/// the function is commutative by construction; unlisted pairs and any pair
/// involving inaction yield inaction.
class CommFn {
 public:
  CommFn() = default;
  explicit CommFn(ActionSet alphabet) : alphabet_(std::move(alphabet)) {}

  const ActionSet& alphabet() const { return alphabet_; }
  void declare(const Action& a) { alphabet_.insert(a); }
  bool knows(const Action& a) const { return alphabet_.count(a) != 0; }

  /// Sets gamma(a, b) = gamma(b, a) = result. Throws ValidationError
  /// (UnknownAction) for names outside the alphabet.
  void set(const Action& a, const Action& b, MaybeAction result);

  /// Throws ValidationError (UnknownAction) for names outside the alphabet.
  MaybeAction gamma(const MaybeAction& a, const MaybeAction& b) const;
  /// Same lookup for two actions.
  MaybeAction gamma(const Action& a, const Action& b) const;

  /// Explicit table entries with first <= second, in key order.
  const std::map<std::pair<Action, Action>, MaybeAction>& table() const { return table_; }

  friend bool operator==(const CommFn&, const CommFn&) = default;

 private:
  void require_known(const Action& a) const;

  ActionSet alphabet_;
  std::map<std::pair<Action, Action>, MaybeAction> table_;
};

struct AssociativityViolation {
  MaybeAction a, b, c;
  MaybeAction left;   // gamma(gamma(a, b), c)
  MaybeAction right;  // gamma(a, gamma(b, c))
};

/// Brute-force associativity check over (alphabet + inaction)^3, actions
/// in alphabet order followed by inaction. Returns the first violating
/// triple, if any.
std::optional<AssociativityViolation> find_associativity_violation(const CommFn& f);

/// Throws ValidationError (NotAssociative) describing the first violation.
void validate_comm(const CommFn& f);

}  // namespace acp
