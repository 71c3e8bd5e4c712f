#include "acpkit/term.hpp"

#include <optional>
#include <stdexcept>

namespace acp {

struct Term::Node {
  Op op;
  std::size_t hash = 0;
  std::size_t size = 1;
  Action action;        // Op::Action
  std::string name;     // Op::Var, Op::Rec
  ActionSet blocked;    // Op::Encap
  std::shared_ptr<const RecSpec> spec;  // Op::Rec
  std::optional<Term> lt;
  std::optional<Term> rt;
};

namespace {

inline std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::shared_ptr<const Term::Node>& delta_node() {
  static const std::shared_ptr<const Term::Node> node = [] {
    auto n = std::make_shared<Term::Node>();
    n->op = Op::Inaction;
    n->hash = mix(0, static_cast<std::size_t>(Op::Inaction));
    return std::shared_ptr<const Term::Node>(std::move(n));
  }();
  return node;
}

}  // namespace

Term Term::delta() { return Term(delta_node()); }

Term Term::action(Action a) {
  auto n = std::make_shared<Node>();
  n->op = Op::Action;
  n->hash = mix(static_cast<std::size_t>(Op::Action), std::hash<std::string>{}(a.name));
  n->action = std::move(a);
  return Term(std::move(n));
}

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->hash = mix(static_cast<std::size_t>(Op::Var), std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::binary(Op op, Term l, Term r) {
  switch (op) {
    case Op::Alt:
    case Op::Seq:
    case Op::Par:
    case Op::LeftMerge:
    case Op::CommMerge:
      break;
    default:
      throw std::invalid_argument("Term::binary: not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(mix(static_cast<std::size_t>(op), l.hash()), r.hash());
  n->size = 1 + l.size() + r.size();
  n->lt = std::move(l);
  n->rt = std::move(r);
  return Term(std::move(n));
}

Term Term::alt(Term l, Term r) { return binary(Op::Alt, std::move(l), std::move(r)); }
Term Term::seq(Term l, Term r) { return binary(Op::Seq, std::move(l), std::move(r)); }
Term Term::par(Term l, Term r) { return binary(Op::Par, std::move(l), std::move(r)); }
Term Term::left_merge(Term l, Term r) { return binary(Op::LeftMerge, std::move(l), std::move(r)); }
Term Term::comm_merge(Term l, Term r) { return binary(Op::CommMerge, std::move(l), std::move(r)); }

Term Term::encap(ActionSet blocked, Term body) {
  auto n = std::make_shared<Node>();
  n->op = Op::Encap;
  std::size_t h = static_cast<std::size_t>(Op::Encap);
  for (const auto& a : blocked) h = mix(h, std::hash<std::string>{}(a.name));
  n->hash = mix(h, body.hash());
  n->size = 1 + body.size();
  n->blocked = std::move(blocked);
  n->lt = std::move(body);
  return Term(std::move(n));
}

Term Term::rec(std::string x, std::shared_ptr<const RecSpec> spec) {
  if (!spec || !spec->defines(x)) {
    throw std::invalid_argument("recursion constant <" + x + "|E> requires " + x + " in vars(E)");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Rec;
  n->hash = mix(mix(static_cast<std::size_t>(Op::Rec), std::hash<std::string>{}(x)), spec->hash());
  n->name = std::move(x);
  n->spec = std::move(spec);
  return Term(std::move(n));
}

Term Term::rec(std::string x, RecSpec spec) {
  return rec(std::move(x), std::make_shared<const RecSpec>(std::move(spec)));
}

Op Term::op() const { return node_->op; }

bool Term::is_binary() const {
  switch (node_->op) {
    case Op::Alt:
    case Op::Seq:
    case Op::Par:
    case Op::LeftMerge:
    case Op::CommMerge:
      return true;
    default:
      return false;
  }
}

const Action& Term::action_name() const { return node_->action; }
const std::string& Term::var_name() const { return node_->name; }
const ActionSet& Term::blocked() const { return node_->blocked; }
const RecSpec& Term::spec() const { return *node_->spec; }
const std::shared_ptr<const RecSpec>& Term::spec_ptr() const { return node_->spec; }
const Term& Term::left() const { return *node_->lt; }
const Term& Term::right() const { return *node_->rt; }
const Term& Term::body() const { return *node_->lt; }

std::size_t Term::arity() const {
  if (is_binary()) return 2;
  if (node_->op == Op::Encap) return 1;
  return 0;
}

const Term& Term::child(std::size_t i) const {
  if (i >= arity()) throw std::out_of_range("Term::child");
  return i == 0 ? *node_->lt : *node_->rt;
}

Term Term::with_child(std::size_t i, Term c) const {
  if (i >= arity()) throw std::out_of_range("Term::with_child");
  if (node_->op == Op::Encap) return encap(node_->blocked, std::move(c));
  return i == 0 ? binary(node_->op, std::move(c), right()) : binary(node_->op, left(), std::move(c));
}

std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  const Term::Node* x = a.node_.get();
  const Term::Node* y = b.node_.get();
  if (x == y) return true;
  if (x->hash != y->hash || x->op != y->op || x->size != y->size) return false;
  switch (x->op) {
    case Op::Inaction:
      return true;
    case Op::Action:
      return x->action == y->action;
    case Op::Var:
      return x->name == y->name;
    case Op::Encap:
      return x->blocked == y->blocked && *x->lt == *y->lt;
    case Op::Rec:
      return x->name == y->name && (x->spec == y->spec || *x->spec == *y->spec);
    default:
      return *x->lt == *y->lt && *x->rt == *y->rt;
  }
}

RecSpec::RecSpec(std::vector<Equation> eqs) : eqs_(std::move(eqs)) {
  std::size_t h = 0x5bd1e995;
  for (const auto& e : eqs_) h = mix(mix(h, std::hash<std::string>{}(e.var)), e.rhs.hash());
  hash_ = h;
}

const Term* RecSpec::find(const std::string& x) const {
  for (const auto& e : eqs_) {
    if (e.var == x) return &e.rhs;
  }
  return nullptr;
}

std::set<std::string> RecSpec::vars() const {
  std::set<std::string> out;
  for (const auto& e : eqs_) out.insert(e.var);
  return out;
}

bool operator==(const RecSpec& a, const RecSpec& b) {
  if (&a == &b) return true;
  return a.hash_ == b.hash_ && a.eqs_ == b.eqs_;
}

namespace {

void collect_free(const Term& t, std::set<std::string>& out) {
  switch (t.op()) {
    case Op::Var:
      out.insert(t.var_name());
      return;
    case Op::Rec: {
      // Variables of the inline specification are bound by it.
      const auto bound = t.spec().vars();
      std::set<std::string> inner;
      for (const auto& e : t.spec().equations()) collect_free(e.rhs, inner);
      for (const auto& v : inner) {
        if (!bound.count(v)) out.insert(v);
      }
      return;
    }
    default:
      for (std::size_t i = 0; i < t.arity(); ++i) collect_free(t.child(i), out);
  }
}

bool guarded_walk(const Term& t, bool guarded) {
  switch (t.op()) {
    case Op::Var:
      return guarded;
    case Op::Rec:
    case Op::Inaction:
    case Op::Action:
      return true;
    case Op::Seq:
      if (t.left().is(Op::Action)) return guarded_walk(t.right(), true);
      return guarded_walk(t.left(), guarded) && guarded_walk(t.right(), guarded);
    default:
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (!guarded_walk(t.child(i), guarded)) return false;
      }
      return true;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

bool is_closed(const Term& t) { return free_vars(t).empty(); }

Term subst_spec(const Term& t, const std::shared_ptr<const RecSpec>& spec) {
  switch (t.op()) {
    case Op::Var:
      return spec->defines(t.var_name()) ? Term::rec(t.var_name(), spec) : t;
    case Op::Inaction:
    case Op::Action:
    case Op::Rec:
      return t;
    case Op::Encap:
      return Term::encap(t.blocked(), subst_spec(t.body(), spec));
    default:
      return Term::binary(t.op(), subst_spec(t.left(), spec), subst_spec(t.right(), spec));
  }
}

bool is_guarded(const Term& t) { return guarded_walk(t, false); }

bool is_linear_term(const Term& t) {
  switch (t.op()) {
    case Op::Inaction:
    case Op::Action:
      return true;
    case Op::Seq:
      return t.left().is(Op::Action) && t.right().is(Op::Var);
    case Op::Alt:
      return is_linear_term(t.left()) && is_linear_term(t.right());
    default:
      return false;
  }
}

bool is_linear_spec(const RecSpec& spec) {
  for (const auto& e : spec.equations()) {
    if (!is_linear_term(e.rhs)) return false;
  }
  return true;
}

Term sum(const std::vector<Term>& ts) {
  if (ts.empty()) return Term::delta();
  Term acc = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) acc = Term::alt(std::move(acc), ts[i]);
  return acc;
}

std::vector<Term> flatten_alt(const Term& t) {
  std::vector<Term> out;
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->is(Op::Alt)) {
      stack.push_back(&cur->right());
      stack.push_back(&cur->left());
    } else {
      out.push_back(*cur);
    }
  }
  return out;
}

}  // namespace acp
