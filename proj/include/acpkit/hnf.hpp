#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acpkit/comm.hpp"
#include "acpkit/term.hpp"

namespace acp {

// clang-format off
enum class Axiom : std::uint8_t {
  A1, A2, A3, A4, A5, A6, A7,
  CM1, CM2, CM3, CM4, CM5, CM6, CM7, CM8, CM9,
  CF,
  D1, D2, D3, D4,
  RDP,
};
// clang-format on

std::string_view axiom_name(Axiom ax);
std::optional<Axiom> axiom_from_name(std::string_view name);

/// Child-index path from the root of a term (0 = left/only child, 1 = right).
using Path = std::vector<std::uint8_t>;

std::string render_path(const Path& p);
const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, Term replacement);

/// One rewrite step: the subterm at `path` equal to `before` is replaced by
/// `after`, justified by an instance of `axiom` read in either direction.
struct TraceStep {
  Axiom axiom;
  Path path;
  Term before;
  Term after;
};

using AxiomTrace = std::vector<TraceStep>;

/// Sum of a_i . t_i over `branches` followed by the `terminals` b_j, both
/// in derivation order. No branches and no terminals denotes delta.
struct HeadNormalForm {
  std::vector<std::pair<Action, Term>> branches;
  std::vector<Action> terminals;

  bool empty() const { return branches.empty() && terminals.empty(); }
};

inline constexpr std::size_t kDefaultHnfFuel = 1'000'000;

struct HnfOptions {
  std::size_t fuel = kDefaultHnfFuel;
  bool record_trace = true;
};

struct HnfResult {
  HeadNormalForm hnf;
  AxiomTrace trace;
  std::size_t steps = 0;
};

/// Brings a closed guarded term into head normal form by structural
/// induction, rewriting only with the ACP axioms and RDP. Every rewrite is
/// recorded so that replay_trace(t, trace) == hnf_to_term(hnf).
///
/// Sequential composition and left merge normalise only their left
/// operand; communication merge normalises both; parallel composition is
/// expanded first and then handled as a sum. Recursion constants are
/// unfolded once per encounter. Inaction summands are eliminated with A6
/// (after A1 when on the left); duplicates are kept.
///
/// Throws BudgetError (FuelExhausted) when more than `fuel` rewrite steps
/// are needed and ValidationError (UnguardedTerm) on a free variable in a
/// position that has to be normalised.
HnfResult head_normal_form(const Term& t, const CommFn& f, const HnfOptions& opts = {});

/// The term denoted by `h`, built with sum(): branches, then terminals.
Term hnf_to_term(const HeadNormalForm& h);

/// Membership in the inductively defined head normal forms: delta, a,
/// a . t, and sums of these.
bool is_head_normal_form(const Term& t);

/// Applies every step in order, checking that the subterm at each step's
/// path equals its `before`. Throws std::logic_error on a mismatch.
Term replay_trace(const Term& input, const AxiomTrace& trace);

/// True iff (before, after) or (after, before) is an instance of the
/// step's axiom, with constants ranging over actions and inaction.
bool is_axiom_instance(const TraceStep& step, const CommFn& f);

/// `<axiom> @ <path>: <before> => <after>`, one line per step.
std::string render_step(const TraceStep& step);
std::string render_trace(const AxiomTrace& trace);

}  // namespace acp
