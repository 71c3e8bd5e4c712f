#include "acpkit/linearize.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "acpkit/errors.hpp"

namespace acp {

LinearizationResult linearize(const ValidatedSpec& spec, const std::string& x, const CommFn& f,
                              const LinearizeOptions& opts) {
  if (!spec.guarded->defines(x)) {
    throw ValidationError(ValidationError::Kind::UnknownRoot,
                          "root " + x + " is not defined by the specification");
  }
  if (opts.max_states == 0) throw std::invalid_argument("linearize: max_states must be >= 1");

  LinearizationResult out;
  std::unordered_map<Term, std::size_t, TermHash> known;
  std::deque<std::size_t> pending;

  auto allocate = [&](Term t) {
    if (out.state_map.size() == opts.max_states) {
      throw BudgetError(BudgetError::Kind::StateBudgetExceeded,
                        "linearization needs more than " + std::to_string(opts.max_states) +
                            " variables (the process may be infinite-state)");
    }
    const std::size_t k = out.state_map.size();
    if (opts.memoize) known.emplace(t, k);
    out.state_map.emplace_back(opts.prefix + std::to_string(k), std::move(t));
    pending.push_back(k);
    return k;
  };

  allocate(Term::rec(x, spec.guarded));
  out.root = out.state_map.front().first;

  HnfOptions hopts;
  hopts.fuel = opts.fuel;
  hopts.record_trace = opts.record_traces;

  std::vector<Equation> eqs;
  while (!pending.empty()) {
    const std::size_t k = pending.front();
    pending.pop_front();
    ++out.stats.stages;

    // Copy: allocate() may grow state_map.
    const Term current = out.state_map[k].second;
    HnfResult h = head_normal_form(current, f, hopts);
    out.stats.hnf_steps += h.steps;

    std::vector<Term> summands;
    std::unordered_set<Term, TermHash> seen_branch;
    for (auto& [a, cont] : h.hnf.branches) {
      if (!seen_branch.insert(Term::seq(Term::action(a), cont)).second) {
        ++out.stats.duplicates_merged;
        continue;
      }
      std::size_t target;
      auto it = opts.memoize ? known.find(cont) : known.end();
      if (it != known.end()) {
        target = it->second;
        ++out.stats.memo_hits;
      } else {
        target = allocate(cont);
      }
      summands.push_back(Term::seq(Term::action(a), Term::var(out.state_map[target].first)));
    }
    ActionSet seen_terminal;
    for (const auto& b : h.hnf.terminals) {
      if (!seen_terminal.insert(b).second) {
        ++out.stats.duplicates_merged;
        continue;
      }
      summands.push_back(Term::action(b));
    }
    eqs.push_back({out.state_map[k].first, sum(summands)});
    if (opts.record_traces) out.traces.push_back({out.state_map[k].first, std::move(h.trace)});
  }

  out.spec = RecSpec(std::move(eqs));
  out.stats.equations = out.spec.size();
  return out;
}

}  // namespace acp
