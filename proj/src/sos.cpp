#include "acpkit/sos.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "acpkit/errors.hpp"

namespace acp {
namespace {

struct StepKeyHash {
  std::size_t operator()(const std::pair<Action, Term>& s) const noexcept {
    return std::hash<Action>{}(s.first) * 31 + s.second.hash();
  }
};

class StepSet {
 public:
  void add(const Action& a, Term t) {
    std::pair<Action, Term> key{a, std::move(t)};
    if (seen_.insert(key).second) out_.steps.push_back(std::move(key));
  }
  void terminate(const Action& a) { out_.terminations.insert(a); }
  Transitions take() { return std::move(out_); }

 private:
  Transitions out_;
  std::unordered_set<std::pair<Action, Term>, StepKeyHash> seen_;
};

class Semantics {
 public:
  Semantics(const CommFn& f, std::size_t max_depth) : f_(f), max_depth_(max_depth) {}

  Transitions of(const Term& t, std::size_t depth) {
    StepSet out;
    switch (t.op()) {
      case Op::Inaction:
        break;
      case Op::Action:
        out.terminate(t.action_name());
        break;
      case Op::Var:
        throw ValidationError(ValidationError::Kind::UnguardedTerm,
                              "free variable " + t.var_name() + " has no transitions");
      case Op::Alt: {
        Transitions l = of(t.left(), depth);
        Transitions r = of(t.right(), depth);
        for (auto& [a, x] : l.steps) out.add(a, std::move(x));
        for (auto& [a, y] : r.steps) out.add(a, std::move(y));
        for (const auto& a : l.terminations) out.terminate(a);
        for (const auto& a : r.terminations) out.terminate(a);
        break;
      }
      case Op::Seq: {
        Transitions l = of(t.left(), depth);
        for (const auto& a : l.terminations) out.add(a, t.right());
        for (auto& [a, x] : l.steps) out.add(a, Term::seq(std::move(x), t.right()));
        break;
      }
      case Op::Par: {
        const Term& x = t.left();
        const Term& y = t.right();
        Transitions l = of(x, depth);
        Transitions r = of(y, depth);
        for (const auto& a : l.terminations) out.add(a, y);
        for (const auto& a : r.terminations) out.add(a, x);
        for (const auto& [a, x1] : l.steps) out.add(a, Term::par(x1, y));
        for (const auto& [a, y1] : r.steps) out.add(a, Term::par(x, y1));
        synchronise(l, r, out);
        break;
      }
      case Op::LeftMerge: {
        Transitions l = of(t.left(), depth);
        for (const auto& a : l.terminations) out.add(a, t.right());
        for (const auto& [a, x1] : l.steps) out.add(a, Term::par(x1, t.right()));
        break;
      }
      case Op::CommMerge:
        synchronise(of(t.left(), depth), of(t.right(), depth), out);
        break;
      case Op::Encap: {
        const ActionSet& h = t.blocked();
        Transitions b = of(t.body(), depth);
        for (const auto& a : b.terminations) {
          if (!h.count(a)) out.terminate(a);
        }
        for (auto& [a, x1] : b.steps) {
          if (!h.count(a)) out.add(a, Term::encap(h, std::move(x1)));
        }
        break;
      }
      case Op::Rec: {
        if (depth >= max_depth_) {
          throw BudgetError(BudgetError::Kind::UnguardedRecursionDepth,
                            "more than " + std::to_string(max_depth_) +
                                " nested recursion unfoldings without an action prefix at <" +
                                t.var_name() + " | ...>");
        }
        return of(subst_spec(*t.spec().find(t.var_name()), t.spec_ptr()), depth + 1);
      }
    }
    return out.take();
  }

 private:
  // The four communication rules shared by || and |.
  void synchronise(const Transitions& l, const Transitions& r, StepSet& out) const {
    for (const auto& a : l.terminations) {
      for (const auto& b : r.terminations) {
        if (auto c = f_.gamma(a, b)) out.terminate(*c);
      }
      for (const auto& [b, y1] : r.steps) {
        if (auto c = f_.gamma(a, b)) out.add(*c, y1);
      }
    }
    for (const auto& [a, x1] : l.steps) {
      for (const auto& b : r.terminations) {
        if (auto c = f_.gamma(a, b)) out.add(*c, x1);
      }
      for (const auto& [b, y1] : r.steps) {
        if (auto c = f_.gamma(a, b)) out.add(*c, Term::par(x1, y1));
      }
    }
  }

  const CommFn& f_;
  std::size_t max_depth_;
};

}  // namespace

Transitions step_relation(const Term& t, const CommFn& f, std::size_t max_unfold_depth) {
  return Semantics(f, max_unfold_depth).of(t, 0);
}

void Lts::normalize() {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(terminations.begin(), terminations.end());
  terminations.erase(std::unique(terminations.begin(), terminations.end()), terminations.end());
  for (const auto& e : edges) {
    if (e.src >= num_states || e.dst >= num_states) {
      throw std::out_of_range("Lts edge references a missing state");
    }
  }
  for (const auto& tf : terminations) {
    if (tf.state >= num_states) throw std::out_of_range("Lts termination references a missing state");
  }
}

Lts generate_lts(const Term& t, const CommFn& f, std::size_t max_states,
                 std::size_t max_unfold_depth) {
  if (max_states == 0) throw std::invalid_argument("generate_lts: max_states must be >= 1");
  Semantics sem(f, max_unfold_depth);
  Lts lts;
  std::unordered_map<Term, std::size_t, TermHash> index;
  index.emplace(t, 0);
  lts.state_terms.push_back(t);
  lts.num_states = 1;

  for (std::size_t cur = 0; cur < lts.num_states && !lts.truncated; ++cur) {
    Transitions tr = sem.of(lts.state_terms[cur], 0);
    for (const auto& a : tr.terminations) lts.terminations.push_back({cur, a});
    for (auto& [a, next] : tr.steps) {
      auto it = index.find(next);
      if (it == index.end()) {
        if (lts.num_states == max_states) {
          lts.truncated = true;
          break;
        }
        it = index.emplace(next, lts.num_states).first;
        lts.state_terms.push_back(std::move(next));
        ++lts.num_states;
      }
      lts.edges.push_back({cur, a, it->second});
    }
  }
  lts.normalize();
  return lts;
}

std::string to_lts_text(const Lts& lts) {
  std::ostringstream os;
  os << "states " << lts.num_states << '\n';
  if (lts.truncated) os << "truncated\n";
  for (const auto& e : lts.edges) os << "edge " << e.src << ' ' << e.action << ' ' << e.dst << '\n';
  for (const auto& t : lts.terminations) os << "term " << t.state << ' ' << t.action << '\n';
  return os.str();
}

Lts from_lts_text(const std::string& text) {
  Lts lts;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto bad = [&](const std::string& why) {
      return ParseError(ParseError::Kind::Syntax, lineno, 1, why);
    };
    if (kw == "states") {
      if (!(ls >> lts.num_states)) throw bad("expected a state count");
      have_header = true;
    } else if (!have_header) {
      throw bad("expected 'states N' first");
    } else if (kw == "truncated") {
      lts.truncated = true;
    } else if (kw == "edge") {
      Edge e;
      if (!(ls >> e.src >> e.action.name >> e.dst)) throw bad("expected 'edge <src> <action> <dst>'");
      lts.edges.push_back(std::move(e));
    } else if (kw == "term") {
      TerminationFlag t;
      if (!(ls >> t.state >> t.action.name)) throw bad("expected 'term <state> <action>'");
      lts.terminations.push_back(std::move(t));
    } else {
      throw bad("unknown line kind '" + kw + "'");
    }
  }
  if (!have_header) throw ParseError(ParseError::Kind::Syntax, lineno + 1, 1, "missing 'states N'");
  try {
    lts.normalize();
  } catch (const std::out_of_range& e) {
    throw ParseError(ParseError::Kind::Syntax, lineno, 1, e.what());
  }
  return lts;
}

std::string to_aut(const Lts& lts) {
  const bool has_final = !lts.terminations.empty();
  const std::size_t final_state = lts.num_states;
  std::ostringstream os;
  os << "des (0, " << lts.edges.size() + lts.terminations.size() << ", "
     << lts.num_states + (has_final ? 1 : 0) << ")\n";
  for (const auto& e : lts.edges) {
    os << '(' << e.src << ", \"" << e.action << "\", " << e.dst << ")\n";
  }
  for (const auto& t : lts.terminations) {
    os << '(' << t.state << ", \"" << t.action << "\xE2\x9C\x93\", " << final_state << ")\n";
  }
  return os.str();
}

}  // namespace acp
