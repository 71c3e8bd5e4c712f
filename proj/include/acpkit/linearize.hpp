#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "acpkit/comm.hpp"
#include "acpkit/hnf.hpp"
#include "acpkit/sos.hpp"
#include "acpkit/term.hpp"
#include "acpkit/validate.hpp"

namespace acp {

struct LinearizeOptions {
  std::size_t max_states = kDefaultMaxStates;
  std::size_t fuel = kDefaultHnfFuel;
  /// Reuse the variable of a structurally equal continuation. Without it
  /// every branch gets a fresh variable and only finite (non-recursive)
  /// processes terminate.
  bool memoize = true;
  /// Keep the head normal form trace of every stage.
  bool record_traces = false;
  /// Generated variables are `<prefix>0`, `<prefix>1`, ... in allocation
  /// order.
  std::string prefix = "X";
};

struct LinearizeStats {
  std::size_t stages = 0;
  std::size_t equations = 0;
  std::size_t memo_hits = 0;
  std::size_t duplicates_merged = 0;
  std::size_t hnf_steps = 0;
};

struct StageTrace {
  std::string var;
  AxiomTrace trace;
};

struct LinearizationResult {
  RecSpec spec;  // linear; equations in allocation order
  std::string root;
  /// Generated variable and the closed term <t_k|E> it stands for, in
  /// allocation order.
  std::vector<std::pair<std::string, Term>> state_map;
  LinearizeStats stats;
  std::vector<StageTrace> traces;  // when record_traces is set
};

/// Reduces <x|E> to a linear recursive specification with a FIFO worklist:
/// each stage takes the oldest pending variable, brings the term it stands
/// for into head normal form, emits `X_k = sum a_i . X_(succ i) + sum b_j`
/// and queues every continuation that has no variable yet. Duplicate
/// branches and terminals are merged before emission.
///
/// Throws BudgetError (StateBudgetExceeded) when more than `max_states`
/// variables would be needed, ValidationError (UnknownRoot) if `x` is not
/// defined, plus whatever head_normal_form() throws.
LinearizationResult linearize(const ValidatedSpec& spec, const std::string& x, const CommFn& f,
                              const LinearizeOptions& opts = {});

}  // namespace acp
