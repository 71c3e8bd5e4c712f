#include "acpkit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "acpkit/bisim.hpp"
#include "acpkit/errors.hpp"
#include "acpkit/hnf.hpp"
#include "acpkit/linearize.hpp"
#include "acpkit/sos.hpp"
#include "acpkit/syntax.hpp"
#include "acpkit/validate.hpp"

namespace acp::cli {
namespace {

struct RunConfig {
  std::size_t max_states = kDefaultMaxStates;
  std::size_t fuel = kDefaultHnfFuel;
  std::size_t unfold_budget = kDefaultUnfoldBudget;
  bool no_memo = false;
  bool trace = false;
  bool stats = false;
  std::string format;
};

// Unreadable file, or a parse error prefixed with its file name.
struct InputError : Error {
  using Error::Error;
};

std::size_t default_max_states() {
  if (const char* env = std::getenv("ACPKIT_MAX_STATES")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size() && v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return kDefaultMaxStates;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct LoadedFile {
  std::string path;
  SpecFile file;
  ValidatedSpec validated;
};

// Parses and validates; every failure propagates as an exception.
LoadedFile load(const std::string& path, const RunConfig& cfg) {
  LoadedFile out;
  out.path = path;
  try {
    out.file = parse_spec_file(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
  validate_comm(out.file.comm);
  out.validated = validate_spec(out.file.spec, cfg.unfold_budget);
  return out;
}

std::string resolve_root(const LoadedFile& lf, const std::string& requested) {
  if (!requested.empty()) {
    if (!lf.file.spec.defines(requested)) {
      throw ValidationError(ValidationError::Kind::UnknownRoot,
                            lf.path + ": root " + requested + " has no proc equation");
    }
    return requested;
  }
  if (lf.file.root) return *lf.file.root;
  if (!lf.file.spec.empty()) return lf.file.spec.equations().front().var;
  throw ValidationError(ValidationError::Kind::UnknownRoot, lf.path + ": no proc equations");
}

LinearizeOptions linearize_options(const RunConfig& cfg) {
  LinearizeOptions o;
  o.max_states = cfg.max_states;
  o.fuel = cfg.fuel;
  o.memoize = !cfg.no_memo;
  o.record_traces = cfg.trace;
  return o;
}

void print_comment_block(std::ostream& out, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << "// " << line << '\n';
}

void print_lts(std::ostream& out, const Lts& lts, const std::string& format) {
  out << (format == "aut" ? to_aut(lts) : to_lts_text(lts));
}

int cmd_check(const std::vector<std::string>& files, const RunConfig& cfg, std::ostream& out,
              std::ostream& err) {
  int worst = kExitOk;
  for (const auto& path : files) {
    SpecFile file;
    try {
      file = parse_spec_file(read_file(path));
    } catch (const ParseError& e) {
      err << "error: " << path << ":" << e.what() << '\n';
      worst = std::max(worst, kExitParse);
      continue;
    } catch (const InputError& e) {
      err << "error: " << e.what() << '\n';
      worst = std::max(worst, kExitParse);
      continue;
    }
    bool ok = true;
    try {
      validate_comm(file.comm);
    } catch (const ValidationError& e) {
      err << "error: " << path << ": " << e.what() << '\n';
      ok = false;
    }
    try {
      validate_spec(file.spec, cfg.unfold_budget);
    } catch (const ValidationError& e) {
      err << "error: " << path << ": " << e.what() << '\n';
      ok = false;
    }
    if (ok) {
      out << path << ": OK\n";
    } else {
      worst = std::max(worst, kExitValidation);
    }
  }
  return worst;
}

int cmd_hnf(const std::string& path, const std::string& root, const RunConfig& cfg,
            std::ostream& out) {
  LoadedFile lf = load(path, cfg);
  const std::string x = resolve_root(lf, root);
  HnfOptions o;
  o.fuel = cfg.fuel;
  o.record_trace = cfg.trace;
  HnfResult r = head_normal_form(Term::rec(x, lf.validated.guarded), lf.file.comm, o);
  out << pretty(hnf_to_term(r.hnf)) << '\n';
  if (cfg.stats) out << "// steps: " << r.steps << '\n';
  if (cfg.trace) print_comment_block(out, render_trace(r.trace));
  return kExitOk;
}

int cmd_linearize(const std::string& path, const std::string& root, const RunConfig& cfg,
                  std::ostream& out) {
  LoadedFile lf = load(path, cfg);
  const std::string x = resolve_root(lf, root);
  LinearizationResult r = linearize(lf.validated, x, lf.file.comm, linearize_options(cfg));

  if (cfg.format == "lts" || cfg.format == "aut") {
    Lts lts = generate_lts(Term::rec(r.root, r.spec), lf.file.comm, cfg.max_states);
    print_lts(out, lts, cfg.format);
    return lts.truncated ? kExitBudget : kExitOk;
  }

  if (cfg.stats) {
    out << "// stages: " << r.stats.stages << '\n'
        << "// equations: " << r.stats.equations << '\n'
        << "// memo hits: " << r.stats.memo_hits << '\n'
        << "// duplicates merged: " << r.stats.duplicates_merged << '\n'
        << "// hnf steps: " << r.stats.hnf_steps << '\n';
    for (const auto& [var, term] : r.state_map) out << "// " << var << " := " << pretty(term) << '\n';
  }
  if (cfg.trace) {
    for (const auto& st : r.traces) {
      out << "// stage " << st.var << '\n';
      std::istringstream in(render_trace(st.trace));
      std::string line;
      while (std::getline(in, line)) out << "//   " << line << '\n';
    }
  }
  SpecFile result;
  result.comm = lf.file.comm;
  result.spec = r.spec;
  result.root = r.root;
  out << pretty(result);
  return kExitOk;
}

int cmd_lts(const std::string& path, const std::string& root, const RunConfig& cfg,
            std::ostream& out, std::ostream& err) {
  LoadedFile lf = load(path, cfg);
  const std::string x = resolve_root(lf, root);
  Lts lts = generate_lts(Term::rec(x, lf.validated.guarded), lf.file.comm, cfg.max_states);
  print_lts(out, lts, cfg.format);
  if (lts.truncated) {
    err << "warning: state budget of " << cfg.max_states << " reached; LTS is truncated\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_prove(const std::string& path1, const std::string& root1, const std::string& path2,
              const std::string& root2, const RunConfig& cfg, std::ostream& out) {
  LoadedFile left = load(path1, cfg);
  LoadedFile right = load(path2, cfg);
  const std::string x1 = resolve_root(left, root1);
  const std::string x2 = resolve_root(right, root2);

  Lts lts[2];
  const LoadedFile* files[2] = {&left, &right};
  const std::string* roots[2] = {&x1, &x2};
  for (int i = 0; i < 2; ++i) {
    try {
      LinearizationResult r =
          linearize(files[i]->validated, *roots[i], files[i]->file.comm, linearize_options(cfg));
      lts[i] = generate_lts(Term::rec(r.root, r.spec), files[i]->file.comm, cfg.max_states);
    } catch (const BudgetError& e) {
      out << "Inconclusive: " << files[i]->path << ": " << e.what() << '\n';
      return kExitBudget;
    }
    if (lts[i].truncated) {
      out << "Inconclusive: " << files[i]->path << ": LTS exceeds " << cfg.max_states
          << " states\n";
      return kExitBudget;
    }
  }

  BisimResult res = bisimilar(lts[0], 0, lts[1], 0);
  if (res.bisimilar) {
    out << "Equal (bisimilar; hence derivably equal in ACP with guarded recursion)\n";
    out << "certificate: stable partition of the disjoint union after " << res.rounds
        << " round(s)\n";
    out << render_partition(res.partition, lts[0].num_states);
    return kExitOk;
  }
  out << "NotEqual\n";
  out << "distinguishing formula (holds for left, fails for right): "
      << render_formula(*res.witness) << '\n';
  for (const auto& line : res.explanation) out << line << '\n';
  return kExitNotEqual;
}

void add_budget_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--max-states", cfg.max_states, "state budget for linearization and LTS generation")
      ->check(CLI::PositiveNumber);
  sub->add_option("--fuel", cfg.fuel, "rewrite-step budget per head normal form")
      ->check(CLI::PositiveNumber);
  sub->add_option("--unfold-budget", cfg.unfold_budget,
                  "unfolding rounds allowed to make an equation guarded")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toolkit for ACP with guarded recursion", "acpkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.max_states = default_max_states();
  std::vector<std::string> check_files;
  std::string file1, file2, root, root1, root2;

  auto* check = app.add_subcommand("check", "validate alphabet, communication function and guardedness");
  check->add_option("files", check_files, "input .acp files")->required();
  check->add_option("--unfold-budget", cfg.unfold_budget,
                    "unfolding rounds allowed to make an equation guarded")
      ->check(CLI::PositiveNumber);

  auto* hnf = app.add_subcommand("hnf", "head normal form of the root recursion constant");
  hnf->add_option("file", file1, "input .acp file")->required();
  hnf->add_option("--root", root, "root variable (default: root directive or first proc)");
  hnf->add_flag("--trace", cfg.trace, "print the axiom trace");
  hnf->add_flag("--stats", cfg.stats, "print the number of rewrite steps");
  add_budget_flags(hnf, cfg);

  auto* lin = app.add_subcommand("linearize", "reduce the root to a linear recursive specification");
  lin->add_option("file", file1, "input .acp file")->required();
  lin->add_option("--root", root, "root variable (default: root directive or first proc)");
  lin->add_flag("--no-memo", cfg.no_memo, "allocate a fresh variable for every branch");
  lin->add_flag("--trace", cfg.trace, "print per-stage head normal form traces");
  lin->add_flag("--stats", cfg.stats, "print stage counts and the state map");
  lin->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"acp", "lts", "aut"}))
      ->default_str("acp");
  add_budget_flags(lin, cfg);

  auto* lts = app.add_subcommand("lts", "labelled transition system of the root");
  lts->add_option("file", file1, "input .acp file")->required();
  lts->add_option("--root", root, "root variable (default: root directive or first proc)");
  lts->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"lts", "aut"}))
      ->default_str("lts");
  add_budget_flags(lts, cfg);

  auto* prove = app.add_subcommand("prove", "decide equality of two roots by bisimilarity");
  prove->add_option("file1", file1, "left .acp file")->required();
  prove->add_option("file2", file2, "right .acp file")->required();
  prove->add_option("--root1", root1, "left root variable");
  prove->add_option("--root2", root2, "right root variable");
  prove->add_flag("--no-memo", cfg.no_memo, "allocate a fresh variable for every branch");
  add_budget_flags(prove, cfg);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*check) return cmd_check(check_files, cfg, out, err);
    if (*hnf) return cmd_hnf(file1, root, cfg, out);
    if (*lin) return cmd_linearize(file1, root, cfg, out);
    if (*lts) return cmd_lts(file1, root, cfg, out, err);
    if (*prove) return cmd_prove(file1, root1, file2, root2, cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  }
  return kExitValidation;
}

}  // namespace acp::cli
