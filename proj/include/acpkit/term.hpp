#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace acp {

/// An atomic action name. The inaction constant is not an Action; it is
/// represented by Term::delta() and, where an action-or-inaction value is
/// needed, by an empty std::optional<Action>.
struct Action {
  std::string name;

  Action() = default;
  explicit Action(std::string n) : name(std::move(n)) {}

  friend auto operator<=>(const Action&, const Action&) = default;
  friend bool operator==(const Action&, const Action&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Action& a) { return os << a.name; }

using ActionSet = std::set<Action>;

enum class Op : std::uint8_t {
  Inaction,
  Action,
  Var,
  Alt,
  Seq,
  Par,
  LeftMerge,
  CommMerge,
  Encap,
  Rec,
};

class RecSpec;

/// Immutable ACP term with guarded recursion constants. Copies share
/// structure; equality and hashing are structural.
class Term {
 public:
  struct Node;

  static Term delta();
  static Term action(Action a);
  static Term action(std::string name) { return action(Action(std::move(name))); }
  static Term var(std::string name);
  static Term alt(Term l, Term r);
  static Term seq(Term l, Term r);
  static Term par(Term l, Term r);
  static Term left_merge(Term l, Term r);
  static Term comm_merge(Term l, Term r);
  static Term encap(ActionSet blocked, Term body);
  /// Throws std::invalid_argument unless `x` is a left-hand side of `spec`.
  static Term rec(std::string x, std::shared_ptr<const RecSpec> spec);
  static Term rec(std::string x, RecSpec spec);
  /// Generic binary constructor for Alt, Seq, Par, LeftMerge and CommMerge.
  static Term binary(Op op, Term l, Term r);

  Op op() const;
  bool is(Op o) const { return op() == o; }
  bool is_binary() const;

  const Action& action_name() const;    // Op::Action
  const std::string& var_name() const;  // Op::Var and Op::Rec
  const ActionSet& blocked() const;     // Op::Encap
  const RecSpec& spec() const;          // Op::Rec
  const std::shared_ptr<const RecSpec>& spec_ptr() const;

  const Term& left() const;   // binary operators
  const Term& right() const;  // binary operators
  const Term& body() const;   // Op::Encap

  /// Children in positional order: binary operators have two, Encap one.
  std::size_t arity() const;
  const Term& child(std::size_t i) const;
  /// Rebuild this node with one child replaced.
  Term with_child(std::size_t i, Term c) const;

  std::size_t hash() const;
  /// Number of nodes, not counting the bodies of recursion constants.
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

struct Equation {
  std::string var;
  Term rhs;

  friend bool operator==(const Equation&, const Equation&) = default;
};

/// A recursive specification: an ordered list of recursion equations.
/// Construction does not validate; see validate_spec().
class RecSpec {
 public:
  RecSpec() = default;
  explicit RecSpec(std::vector<Equation> eqs);

  const std::vector<Equation>& equations() const { return eqs_; }
  std::size_t size() const { return eqs_.size(); }
  bool empty() const { return eqs_.empty(); }

  /// Right-hand side of the first equation for `x`, or nullptr.
  const Term* find(const std::string& x) const;
  bool defines(const std::string& x) const { return find(x) != nullptr; }
  std::set<std::string> vars() const;

  std::size_t hash() const { return hash_; }

  friend bool operator==(const RecSpec& a, const RecSpec& b);

 private:
  std::vector<Equation> eqs_;
  std::size_t hash_ = 0;
};

/// Variables with a free occurrence in `t`.
std::set<std::string> free_vars(const Term& t);
bool is_closed(const Term& t);

/// Replace every free occurrence of each X in vars(spec) by the constant
/// <X|spec>. Recursion constants already in `t` are left untouched.
Term subst_spec(const Term& t, const std::shared_ptr<const RecSpec>& spec);

/// Syntactic guardedness: every free variable occurrence sits inside the
/// right operand of some `a . t'` with `a` an action.
bool is_guarded(const Term& t);

/// Membership in the linear terms: delta, a, a . X, and sums of these.
bool is_linear_term(const Term& t);
bool is_linear_spec(const RecSpec& spec);

/// Left-nested sum; the empty sum is delta.
Term sum(const std::vector<Term>& ts);

/// Summands of a (possibly nested) Alt, left to right.
std::vector<Term> flatten_alt(const Term& t);

}  // namespace acp

template <>
struct std::hash<acp::Action> {
  std::size_t operator()(const acp::Action& a) const noexcept {
    return std::hash<std::string>{}(a.name);
  }
};

template <>
struct std::hash<acp::Term> {
  std::size_t operator()(const acp::Term& t) const noexcept { return t.hash(); }
};
