#include "acpkit/bisim.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "acpkit/errors.hpp"

namespace acp {

std::size_t Formula::modal_depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.modal_depth());
  return d + (kind == Kind::Diamond ? 1 : 0);
}

namespace {

struct Graph {
  std::vector<std::vector<std::pair<Action, std::size_t>>> succ;
  std::vector<std::vector<Action>> terms;

  explicit Graph(const Lts& lts) : succ(lts.num_states), terms(lts.num_states) {
    for (const auto& e : lts.edges) succ[e.src].emplace_back(e.action, e.dst);
    for (const auto& t : lts.terminations) terms[t.state].push_back(t.action);
    for (auto& v : terms) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
};

using Signature = std::vector<std::pair<Action, std::size_t>>;

Signature signature(const Graph& g, const std::vector<std::size_t>& block, std::size_t s) {
  Signature sig;
  sig.reserve(g.succ[s].size());
  for (const auto& [a, t] : g.succ[s]) sig.emplace_back(a, block[t]);
  std::sort(sig.begin(), sig.end());
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
  return sig;
}

class WitnessBuilder {
 public:
  WitnessBuilder(const Graph& g, const std::vector<std::vector<std::size_t>>& history,
                 std::size_t left_states)
      : g_(g), history_(history), left_states_(left_states) {}

  // A formula satisfied by s and not by t; s and t must be separated.
  Formula distinguish(std::size_t s, std::size_t t) {
    auto key = std::make_pair(s, t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Formula f = build(s, t);
    memo_.emplace(key, f);
    return f;
  }

  std::vector<std::string> lines;

 private:
  std::string name(std::size_t s) const {
    return s < left_states_ ? "left:" + std::to_string(s)
                            : "right:" + std::to_string(s - left_states_);
  }

  std::size_t separation_round(std::size_t s, std::size_t t) const {
    for (std::size_t r = 0; r < history_.size(); ++r) {
      if (history_[r][s] != history_[r][t]) return r;
    }
    throw std::logic_error("witness requested for unseparated states");
  }

  Formula build(std::size_t s, std::size_t t) {
    const std::size_t r = separation_round(s, t);
    if (r == 0) {
      for (const auto& a : g_.terms[s]) {
        if (!std::binary_search(g_.terms[t].begin(), g_.terms[t].end(), a)) {
          lines.push_back("round 0: " + name(s) + " terminates on " + a.name + ", " + name(t) +
                          " does not");
          return Formula::terminates(a);
        }
      }
      for (const auto& a : g_.terms[t]) {
        if (!std::binary_search(g_.terms[s].begin(), g_.terms[s].end(), a)) {
          lines.push_back("round 0: " + name(t) + " terminates on " + a.name + ", " + name(s) +
                          " does not");
          return Formula::negate(Formula::terminates(a));
        }
      }
      throw std::logic_error("round-0 split without differing termination sets");
    }
    const auto& prev = history_[r - 1];
    Signature ss = signature(g_, prev, s);
    Signature st = signature(g_, prev, t);
    for (const auto& [a, b] : ss) {
      if (std::binary_search(st.begin(), st.end(), std::make_pair(a, b))) continue;
      std::size_t s1 = 0;
      for (const auto& [a2, x] : g_.succ[s]) {
        if (a2 == a && prev[x] == b) {
          s1 = x;
          break;
        }
      }
      std::set<std::size_t> t_succ;
      for (const auto& [a2, y] : g_.succ[t]) {
        if (a2 == a) t_succ.insert(y);
      }
      lines.push_back("round " + std::to_string(r) + ": " + name(s) + " -" + a.name + "-> " +
                      name(s1) + " has no match among the " + std::to_string(t_succ.size()) +
                      " " + a.name + "-successor(s) of " + name(t));
      std::vector<Formula> conj;
      for (std::size_t y : t_succ) {
        Formula f = distinguish(s1, y);
        if (std::find(conj.begin(), conj.end(), f) == conj.end()) conj.push_back(std::move(f));
      }
      return Formula::diamond(a, std::move(conj));
    }
    return Formula::negate(distinguish(t, s));
  }

  const Graph& g_;
  const std::vector<std::vector<std::size_t>>& history_;
  std::size_t left_states_;
  std::map<std::pair<std::size_t, std::size_t>, Formula> memo_;
};

}  // namespace

bool satisfies(const Lts& lts, std::size_t state, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::Terminates:
      return std::binary_search(lts.terminations.begin(), lts.terminations.end(),
                                TerminationFlag{state, f.action});
    case Formula::Kind::Not:
      return !satisfies(lts, state, f.children.at(0));
    case Formula::Kind::Diamond: {
      auto lo = std::lower_bound(lts.edges.begin(), lts.edges.end(), Edge{state, f.action, 0});
      for (auto it = lo; it != lts.edges.end() && it->src == state && it->action == f.action; ++it) {
        bool all = true;
        for (const auto& c : f.children) {
          if (!satisfies(lts, it->dst, c)) {
            all = false;
            break;
          }
        }
        if (all) return true;
      }
      return false;
    }
  }
  return false;
}

std::string render_formula(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True:
      return "true";
    case Formula::Kind::Terminates:
      return "term(" + f.action.name + ")";
    case Formula::Kind::Not:
      return "!" + render_formula(f.children.at(0));
    case Formula::Kind::Diamond: {
      std::string out = "<" + f.action.name + ">";
      if (f.children.empty()) return out + "true";
      if (f.children.size() == 1) return out + render_formula(f.children[0]);
      out += "(";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += " & ";
        out += render_formula(f.children[i]);
      }
      return out + ")";
    }
  }
  return "";
}

Lts disjoint_union(const Lts& l1, const Lts& l2) {
  Lts u;
  u.num_states = l1.num_states + l2.num_states;
  u.truncated = l1.truncated || l2.truncated;
  if (!l1.state_terms.empty() && !l2.state_terms.empty()) {
    u.state_terms = l1.state_terms;
    u.state_terms.insert(u.state_terms.end(), l2.state_terms.begin(), l2.state_terms.end());
  }
  const std::size_t off = l1.num_states;
  u.edges = l1.edges;
  for (const auto& e : l2.edges) u.edges.push_back({e.src + off, e.action, e.dst + off});
  u.terminations = l1.terminations;
  for (const auto& t : l2.terminations) u.terminations.push_back({t.state + off, t.action});
  u.normalize();
  return u;
}

BisimResult bisimilar(const Lts& l1, std::size_t s1, const Lts& l2, std::size_t s2) {
  if (l1.truncated || l2.truncated) {
    throw BudgetError(BudgetError::Kind::InconclusiveTruncated,
                      "bisimilarity is inconclusive: a state budget was hit while generating the LTS");
  }
  if (s1 >= l1.num_states || s2 >= l2.num_states) throw std::out_of_range("bisimilar: state index");
  const Lts u = disjoint_union(l1, l2);
  const Graph g(u);
  const std::size_t n = u.num_states;

  std::vector<std::vector<std::size_t>> history;
  std::vector<std::size_t> block(n);
  std::size_t count = 0;
  {
    std::map<std::vector<Action>, std::size_t> ids;
    for (std::size_t s = 0; s < n; ++s) {
      auto [it, fresh] = ids.emplace(g.terms[s], ids.size());
      block[s] = it->second;
    }
    count = ids.size();
  }
  history.push_back(block);
  for (;;) {
    std::map<std::pair<std::size_t, Signature>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      auto [it, fresh] = ids.emplace(std::make_pair(block[s], signature(g, block, s)), ids.size());
      next[s] = it->second;
    }
    if (ids.size() == count) break;
    count = ids.size();
    block = std::move(next);
    history.push_back(block);
  }

  BisimResult out;
  out.rounds = history.size();
  out.partition.assign(count, {});
  for (std::size_t s = 0; s < n; ++s) out.partition[block[s]].push_back(s);

  const std::size_t a = s1;
  const std::size_t b = l1.num_states + s2;
  out.bisimilar = block[a] == block[b];
  if (!out.bisimilar) {
    WitnessBuilder wb(g, history, l1.num_states);
    out.witness = wb.distinguish(a, b);
    out.explanation = std::move(wb.lines);
  }
  return out;
}

bool bisimilar_naive(const Lts& l1, std::size_t s1, const Lts& l2, std::size_t s2,
                     std::size_t bound) {
  const std::size_t n = l1.num_states + l2.num_states;
  if (n > bound) {
    throw BudgetError(BudgetError::Kind::BoundExceeded,
                      "naive bisimulation oracle limited to " + std::to_string(bound) + " states");
  }
  const Lts u = disjoint_union(l1, l2);
  const Graph g(u);
  std::vector<char> rel(n * n, 1);
  auto related = [&](std::size_t i, std::size_t j) { return rel[i * n + j] != 0; };

  // Every a-step of i is matched by an a-step of j into the relation.
  auto simulated = [&](std::size_t i, std::size_t j, bool flip) {
    for (const auto& [a, i1] : g.succ[i]) {
      bool matched = false;
      for (const auto& [b, j1] : g.succ[j]) {
        if (a == b && (flip ? related(j1, i1) : related(i1, j1))) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!related(i, j)) continue;
        if (g.terms[i] != g.terms[j] || !simulated(i, j, false) || !simulated(j, i, true)) {
          rel[i * n + j] = 0;
          changed = true;
        }
      }
    }
  }
  return related(s1, l1.num_states + s2);
}

std::string render_partition(const Partition& p, std::size_t left_states) {
  std::ostringstream os;
  for (std::size_t b = 0; b < p.size(); ++b) {
    os << "block " << b << ":";
    for (std::size_t s : p[b]) {
      if (s < left_states) {
        os << " left:" << s;
      } else {
        os << " right:" << s - left_states;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace acp
