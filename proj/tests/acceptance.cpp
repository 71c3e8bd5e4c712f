// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "acpkit/errors.hpp"
#include "acpkit/hnf.hpp"
#include "acpkit/linearize.hpp"
#include "support/generators.hpp"

#ifndef ACPKIT_CLI_PATH
#error "ACPKIT_CLI_PATH must name the acpkit executable"
#endif

using namespace acp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kAxiomInstances = 200;
constexpr std::size_t kHnfTerms = 500;
constexpr std::size_t kLinearizeSpecs = 200;
constexpr std::size_t kLtsPairs = 500;
constexpr std::size_t kMaxCombinedStates = 200;
constexpr std::size_t kExpansionPairs = 200;
constexpr std::size_t kCongruencePairs = 100;
constexpr std::size_t kRoundTrips = 1000;
constexpr double kAxiomSeconds = 30.0;
constexpr double kBudgetSeconds = 1.0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << detail
            << ")" << std::endl;
  if (!ok) ++failures;
}

// Runs fn, turning any exception into a failed count with a message.
template <class Fn>
bool guarded(Fn&& fn, std::string& note) {
  try {
    return fn();
  } catch (const std::exception& e) {
    if (note.empty()) note = e.what();
    return false;
  }
}

std::string note_suffix(const std::string& note) {
  return note.empty() ? "" : "; first problem: " + note;
}

// 1 ---------------------------------------------------------------------

struct AxiomCase {
  Axiom axiom;
  std::function<std::pair<Term, Term>(testing::Gen&)> instance;
};

Term constant(testing::Gen& g) {
  return g.chance(0.15) ? Term::delta() : Term::action(g.action());
}

Term gamma_term(const CommFn& f, const Term& a, const Term& b) {
  if (!a.is(Op::Action) || !b.is(Op::Action)) return Term::delta();
  const MaybeAction r = f.gamma(a.action_name(), b.action_name());
  return r ? Term::action(*r) : Term::delta();
}

std::vector<AxiomCase> axiom_cases(const CommFn& f) {
  auto x = [](testing::Gen& g) { return g.closed(4); };
  std::vector<AxiomCase> cs;
  cs.push_back({Axiom::A1, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g);
                  return std::pair{Term::alt(p, q), Term::alt(q, p)};
                }});
  cs.push_back({Axiom::A2, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g), r = x(g);
                  return std::pair{Term::alt(p, Term::alt(q, r)), Term::alt(Term::alt(p, q), r)};
                }});
  cs.push_back({Axiom::A3, [=](testing::Gen& g) {
                  Term p = x(g);
                  return std::pair{Term::alt(p, p), p};
                }});
  cs.push_back({Axiom::A4, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g), r = x(g);
                  return std::pair{Term::seq(Term::alt(p, q), r),
                                   Term::alt(Term::seq(p, r), Term::seq(q, r))};
                }});
  cs.push_back({Axiom::A5, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g), r = x(g);
                  return std::pair{Term::seq(Term::seq(p, q), r), Term::seq(p, Term::seq(q, r))};
                }});
  cs.push_back({Axiom::A6, [=](testing::Gen& g) {
                  Term p = x(g);
                  return std::pair{Term::alt(p, Term::delta()), p};
                }});
  cs.push_back({Axiom::A7, [=](testing::Gen& g) {
                  Term p = x(g);
                  return std::pair{Term::seq(Term::delta(), p), Term::delta()};
                }});
  cs.push_back({Axiom::CM1, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g);
                  return std::pair{Term::par(p, q),
                                   Term::alt(Term::alt(Term::left_merge(p, q), Term::left_merge(q, p)),
                                             Term::comm_merge(p, q))};
                }});
  cs.push_back({Axiom::CM2, [=](testing::Gen& g) {
                  Term a = constant(g), p = x(g);
                  return std::pair{Term::left_merge(a, p), Term::seq(a, p)};
                }});
  cs.push_back({Axiom::CM3, [=](testing::Gen& g) {
                  Term a = constant(g), p = x(g), q = x(g);
                  return std::pair{Term::left_merge(Term::seq(a, p), q), Term::seq(a, Term::par(p, q))};
                }});
  cs.push_back({Axiom::CM4, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g), r = x(g);
                  return std::pair{Term::left_merge(Term::alt(p, q), r),
                                   Term::alt(Term::left_merge(p, r), Term::left_merge(q, r))};
                }});
  cs.push_back({Axiom::CM5, [=](testing::Gen& g) {
                  Term a = constant(g), b = constant(g), p = x(g);
                  return std::pair{Term::comm_merge(Term::seq(a, p), b),
                                   Term::seq(Term::comm_merge(a, b), p)};
                }});
  cs.push_back({Axiom::CM6, [=](testing::Gen& g) {
                  Term a = constant(g), b = constant(g), p = x(g);
                  return std::pair{Term::comm_merge(a, Term::seq(b, p)),
                                   Term::seq(Term::comm_merge(a, b), p)};
                }});
  cs.push_back({Axiom::CM7, [=](testing::Gen& g) {
                  Term a = constant(g), b = constant(g), p = x(g), q = x(g);
                  return std::pair{Term::comm_merge(Term::seq(a, p), Term::seq(b, q)),
                                   Term::seq(Term::comm_merge(a, b), Term::par(p, q))};
                }});
  cs.push_back({Axiom::CM8, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g), r = x(g);
                  return std::pair{Term::comm_merge(Term::alt(p, q), r),
                                   Term::alt(Term::comm_merge(p, r), Term::comm_merge(q, r))};
                }});
  cs.push_back({Axiom::CM9, [=](testing::Gen& g) {
                  Term p = x(g), q = x(g), r = x(g);
                  return std::pair{Term::comm_merge(p, Term::alt(q, r)),
                                   Term::alt(Term::comm_merge(p, q), Term::comm_merge(p, r))};
                }});
  cs.push_back({Axiom::CF, [=](testing::Gen& g) {
                  Term a = constant(g), b = constant(g);
                  return std::pair{Term::comm_merge(a, b), gamma_term(f, a, b)};
                }});
  cs.push_back({Axiom::D1, [=](testing::Gen& g) {
                  // a not in H (delta is never blocked).
                  Term a = constant(g);
                  ActionSet h = g.action_set();
                  if (a.is(Op::Action)) h.erase(a.action_name());
                  return std::pair{Term::encap(h, a), a};
                }});
  cs.push_back({Axiom::D2, [=](testing::Gen& g) {
                  const Action a = g.action();
                  ActionSet h = g.action_set();
                  h.insert(a);
                  return std::pair{Term::encap(h, Term::action(a)), Term::delta()};
                }});
  cs.push_back({Axiom::D3, [=](testing::Gen& g) {
                  ActionSet h = g.action_set();
                  Term p = x(g), q = x(g);
                  return std::pair{Term::encap(h, Term::alt(p, q)),
                                   Term::alt(Term::encap(h, p), Term::encap(h, q))};
                }});
  cs.push_back({Axiom::D4, [=](testing::Gen& g) {
                  ActionSet h = g.action_set();
                  Term p = x(g), q = x(g);
                  return std::pair{Term::encap(h, Term::seq(p, q)),
                                   Term::seq(Term::encap(h, p), Term::encap(h, q))};
                }});
  return cs;
}

void criterion_axioms() {
  const CommFn f = testing::handshake();
  const auto start = Clock::now();
  testing::Gen g(1001);
  std::size_t total = 0, ok = 0;
  std::string note;
  const auto cases = axiom_cases(f);
  for (const auto& c : cases) {
    for (std::size_t i = 0; i < kAxiomInstances; ++i) {
      auto [l, r] = c.instance(g);
      ++total;
      if (guarded([&] { return testing::bisimilar_terms(l, r, f); }, note)) {
        ++ok;
      } else if (note.empty()) {
        note = std::string(axiom_name(c.axiom)) + ": " + pretty(l) + " vs " + pretty(r);
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << cases.size() << " axioms x " << kAxiomInstances << " instances, " << ok << "/" << total
    << " bisimilar, " << secs << " s (limit " << kAxiomSeconds << " s)" << note_suffix(note);
  report(1, "axiom soundness", ok == total && cases.size() == 21 && secs < kAxiomSeconds, d.str());
}

// 2 ---------------------------------------------------------------------

bool contains_rec(const Term& t) {
  if (t.is(Op::Rec)) return true;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (contains_rec(t.child(i))) return true;
  return false;
}

void criterion_hnf() {
  const CommFn f = testing::handshake();
  testing::Gen g(2002);
  std::size_t preserved = 0, replayed = 0, with_rec = 0;
  std::string note;
  for (std::size_t i = 0; i < kHnfTerms; ++i) {
    const Term t = g.closed(4, 0.3);
    with_rec += contains_rec(t);
    guarded(
        [&] {
          const HnfResult r = head_normal_form(t, f);
          const Term h = hnf_to_term(r.hnf);
          if (replay_trace(t, r.trace) == h) ++replayed;
          else if (note.empty()) note = "replay mismatch on " + pretty(t);
          if (testing::bisimilar_terms(t, h, f)) ++preserved;
          else if (note.empty()) note = "not bisimilar: " + pretty(t);
          return true;
        },
        note);
  }
  std::ostringstream d;
  d << kHnfTerms << " terms (" << with_rec << " with recursion constants), " << preserved
    << " bisimilar to their head normal form, " << replayed << " traces replay exactly"
    << note_suffix(note);
  report(2, "head normal form preservation",
         preserved == kHnfTerms && replayed == kHnfTerms && with_rec > 0, d.str());
}

// 3 ---------------------------------------------------------------------

void criterion_linearize() {
  const CommFn f = testing::handshake();
  testing::Gen g(3003);
  std::size_t ok = 0;
  std::string note;
  for (std::size_t i = 0; i < kLinearizeSpecs; ++i) {
    const RecSpec e = g.finite_state_spec(1 + g.below(4), true);
    const bool good = guarded(
        [&] {
          const ValidatedSpec vs = validate_spec(e);
          const LinearizationResult r = linearize(vs, "X0", f);
          if (!is_linear_spec(r.spec)) return false;
          for (const auto& eq : r.spec.equations())
            for (const auto& v : free_vars(eq.rhs))
              if (!r.spec.defines(v)) return false;
          return testing::bisimilar_terms(Term::rec("X0", vs.original), Term::rec(r.root, r.spec), f);
        },
        note);
    if (good) ++ok;
    else if (note.empty()) note = pretty(e);
  }

  auto golden = [&](const RecSpec& e) {
    return pretty(linearize(validate_spec(e), "X", f).spec);
  };
  const Term a = Term::action("a"), b = Term::action("b"), c = Term::action("c");
  const Term X = Term::var("X");
  const std::string g1 = golden(RecSpec({{"X", Term::seq(a, X)}}));
  const std::string g2 = golden(RecSpec({{"X", Term::seq(a, Term::alt(Term::seq(b, X), c))}}));
  const bool goldens = g1 == "X0 = a . X0" && g2 == "X0 = a . X1, X1 = b . X0 + c";

  std::ostringstream d;
  d << ok << "/" << kLinearizeSpecs << " random specs linear, closed and bisimilar; goldens "
    << (goldens ? "match" : "differ: [" + g1 + "] [" + g2 + "]") << note_suffix(note);
  report(3, "linearizer correctness", ok == kLinearizeSpecs && goldens, d.str());
}

// 4 ---------------------------------------------------------------------

void criterion_budget() {
  const CommFn f = testing::handshake();
  const Term a = Term::action("a"), b = Term::action("b"), X = Term::var("X");

  LinearizeOptions o;
  o.max_states = 100;
  const auto start = Clock::now();
  bool first = false;
  try {
    linearize(validate_spec(RecSpec({{"X", Term::seq(a, Term::seq(X, b))}})), "X", f, o);
  } catch (const BudgetError& e) {
    first = e.kind() == BudgetError::Kind::StateBudgetExceeded;
  }
  const double secs = seconds_since(start);

  o.memoize = false;
  bool second = false;
  try {
    linearize(validate_spec(RecSpec({{"X", Term::seq(a, X)}})), "X", f, o);
  } catch (const BudgetError& e) {
    second = e.kind() == BudgetError::Kind::StateBudgetExceeded;
  }

  std::ostringstream d;
  d << "X = a.X.b: " << (first ? "budget exceeded" : "no budget error") << " in " << secs
    << " s; X = a.X without memoization: " << (second ? "budget exceeded" : "no budget error");
  report(4, "infinite-state honesty", first && secs < kBudgetSeconds && second, d.str());
}

// 5 ---------------------------------------------------------------------

void criterion_bisim() {
  testing::Gen g(5005);
  std::size_t agree = 0, equal = 0, witnesses = 0, distinct = 0, max_states = 0;
  std::string note;
  for (std::size_t i = 0; i < kLtsPairs; ++i) {
    const Lts l = g.lts(1 + g.below(kMaxCombinedStates / 3));
    const Lts r = g.chance(0.5) ? g.bisimilar_copy(l)
                                : g.lts(1 + g.below(kMaxCombinedStates - l.num_states));
    max_states = std::max(max_states, l.num_states + r.num_states);
    guarded(
        [&] {
          const BisimResult res = bisimilar(l, 0, r, 0);
          const bool naive = bisimilar_naive(l, 0, r, 0, kMaxCombinedStates);
          if (res.bisimilar == naive) ++agree;
          if (res.bisimilar) {
            ++equal;
          } else {
            ++distinct;
            if (res.witness && satisfies(l, 0, *res.witness) && !satisfies(r, 0, *res.witness))
              ++witnesses;
          }
          return true;
        },
        note);
  }
  std::ostringstream d;
  d << agree << "/" << kLtsPairs << " verdicts agree with the naive fixpoint (" << equal
    << " bisimilar, largest union " << max_states << " states); " << witnesses << "/" << distinct
    << " witnesses replay" << note_suffix(note);
  report(5, "bisimulation checker equivalence",
         agree == kLtsPairs && witnesses == distinct && max_states <= kMaxCombinedStates && equal > 0 &&
             distinct > 0,
         d.str());
}

// 6 ---------------------------------------------------------------------

void criterion_expansion() {
  const CommFn f = testing::handshake();
  testing::Gen g(6006);
  std::size_t ok = 0;
  std::string note;
  for (std::size_t i = 0; i < kExpansionPairs; ++i) {
    const Term x = g.closed(4, 0.1), y = g.closed(4, 0.1);
    const Term lhs = Term::par(x, y);
    const Term rhs =
        Term::alt(Term::alt(Term::left_merge(x, y), Term::left_merge(y, x)), Term::comm_merge(x, y));
    if (guarded([&] { return testing::bisimilar_terms(lhs, rhs, f); }, note)) ++ok;
  }
  std::ostringstream d;
  d << ok << "/" << kExpansionPairs << " pairs" << note_suffix(note);
  report(6, "expansion law", ok == kExpansionPairs, d.str());
}

// 7 ---------------------------------------------------------------------

// A term bisimilar to t, produced by a different route.
Term bisimilar_variant(testing::Gen& g, const Term& t, const CommFn& f) {
  switch (g.below(4)) {
    case 0:
      return hnf_to_term(head_normal_form(t, f).hnf);
    case 1:
      return Term::alt(t, t);
    case 2:
      return Term::alt(Term::delta(), t);
    default:
      return Term::encap({}, t);
  }
}

void criterion_congruence() {
  const CommFn f = testing::handshake();
  testing::Gen g(7007);
  std::size_t pairs = 0, contexts = 0, preserved = 0;
  std::string note;
  while (pairs < kCongruencePairs) {
    Term t = Term::delta(), u = Term::delta();
    if (g.chance(0.3)) {
      const ValidatedSpec vs = validate_spec(g.finite_state_spec(1 + g.below(3), true));
      t = Term::rec("X0", vs.guarded);
      const LinearizationResult r = linearize(vs, "X0", f);
      u = Term::rec(r.root, r.spec);
    } else {
      t = g.closed(3, 0.2);
      u = bisimilar_variant(g, t, f);
    }
    if (!testing::bisimilar_terms(t, u, f)) {
      if (note.empty()) note = "generated pair not bisimilar: " + pretty(t);
      ++pairs;
      continue;
    }
    ++pairs;
    const Term s = g.closed(3, 0.1);
    const ActionSet h = g.action_set();
    const std::vector<std::pair<Term, Term>> ctx{
        {Term::alt(t, s), Term::alt(u, s)},
        {Term::alt(s, t), Term::alt(s, u)},
        {Term::seq(t, s), Term::seq(u, s)},
        {Term::seq(s, t), Term::seq(s, u)},
        {Term::par(t, s), Term::par(u, s)},
        {Term::par(s, t), Term::par(s, u)},
        {Term::left_merge(t, s), Term::left_merge(u, s)},
        {Term::left_merge(s, t), Term::left_merge(s, u)},
        {Term::comm_merge(t, s), Term::comm_merge(u, s)},
        {Term::comm_merge(s, t), Term::comm_merge(s, u)},
        {Term::encap(h, t), Term::encap(h, u)},
    };
    for (const auto& [l, r] : ctx) {
      ++contexts;
      if (guarded([&] { return testing::bisimilar_terms(l, r, f); }, note)) ++preserved;
      else if (note.empty()) note = pretty(l) + " vs " + pretty(r);
    }
  }
  std::ostringstream d;
  d << pairs << " bisimilar pairs, " << preserved << "/" << contexts << " one-level contexts preserve bisimilarity"
    << note_suffix(note);
  report(7, "congruence", preserved == contexts && contexts == pairs * 11, d.str());
}

// 8 ---------------------------------------------------------------------

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ACPKIT_CLI_PATH + "\" " + args + " 2>&1";
  std::string out;
  if (FILE* p = popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    out += "\nexit " + std::to_string(pclose(p));
  }
  return out;
}

void criterion_round_trip() {
  testing::Gen g(8008);
  const ActionSet abc{Action("a"), Action("b"), Action("c")};
  std::size_t ok = 0;
  std::string note;
  for (std::size_t i = 0; i < kRoundTrips; ++i) {
    bool same = false;
    std::string text;
    guarded(
        [&] {
          if (i % 2 == 0) {
            const Term t = g.open(5);
            text = pretty(t);
            same = parse_term(text, abc, true) == t;
          } else {
            SpecFile file;
            file.comm = g.comm_table();
            file.spec = g.finite_state_spec(1 + g.below(3), true);
            if (g.chance(0.5)) file.root = file.spec.equations().back().var;
            text = pretty(file);
            same = parse_spec_file(text) == file;
          }
          return same;
        },
        note);
    if (same) ++ok;
    else if (note.empty()) note = text;
  }

  const auto dir = std::filesystem::temp_directory_path() / "acpkit_acceptance";
  std::filesystem::create_directories(dir);
  const auto f1 = (dir / "left.acp").string(), f2 = (dir / "right.acp").string();
  std::ofstream(f1) << "act a, b, c, d;\ncomm a | b = c;\n"
                       "proc P = a . P + b . Q;\nproc Q = encap({d}, (a . Q) || (b + d));\nroot P;\n";
  std::ofstream(f2) << "act a, b, c, d;\ncomm a | b = c;\nproc R = a . R + b . (a + b + c);\n";
  const std::vector<std::string> commands{
      "check " + f1 + " " + f2,
      "hnf --trace " + f1,
      "linearize --stats --trace " + f1,
      "lts --format aut " + f1,
      "prove " + f1 + " " + f2,
  };
  std::size_t stable = 0;
  for (const auto& c : commands) {
    const std::string first = run_cli(c), second = run_cli(c);
    if (first == second && !first.empty()) ++stable;
  }
  std::ostringstream d;
  d << ok << "/" << kRoundTrips << " values round-trip; " << stable << "/" << commands.size()
    << " CLI commands byte-identical across runs" << note_suffix(note);
  report(8, "parser round trip and deterministic output",
         ok == kRoundTrips && stable == commands.size(), d.str());
}

}  // namespace

int main() {
  criterion_axioms();
  criterion_hnf();
  criterion_linearize();
  criterion_budget();
  criterion_bisim();
  criterion_expansion();
  criterion_congruence();
  criterion_round_trip();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
