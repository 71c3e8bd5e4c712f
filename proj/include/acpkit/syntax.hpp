#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "acpkit/comm.hpp"
#include "acpkit/term.hpp"

namespace acp {

/// Contents of an `.acp` file.
///
///     act a, b, c;          // alphabet
///     comm a | b = c;       // communication function entries
///     proc X = a . X + b;   // recursion equations
///     root X;               // optional root variable
struct SpecFile {
  CommFn comm;  // carries the alphabet
  RecSpec spec;
  std::optional<std::string> root;

  const ActionSet& alphabet() const { return comm.alphabet(); }

  friend bool operator==(const SpecFile&, const SpecFile&) = default;
};

/// Parses a whole `.acp` file. Identifiers declared with `act` (anywhere in
/// the file) are actions; every other identifier is a recursion variable
/// and must be bound by a `proc` equation or an enclosing `<X | ...>`.
///
/// Term syntax, loosest first: `+` (left-assoc); `||`, `|_`, `|` at one
/// level, where a chain must repeat a single operator (left-assoc) and
/// mixing needs parentheses; `.` (right-assoc). Primaries are `delta`,
/// names, `( t )`, `encap({a, b}, t)` and `<X | X = t, Y = u>`. The
/// aliases `δ`, `·`, `∥`, `⫦` and `∂` are accepted.
///
/// Throws ParseError with 1-based line and column.
SpecFile parse_spec_file(std::string_view text);

/// Parses a single term over the given alphabet; the only variables that
/// may occur are the ones bound by inline recursion constants, unless
/// `allow_free_vars` is set.
Term parse_term(std::string_view text, const ActionSet& alphabet, bool allow_free_vars = false);

/// Minimal-parenthesis rendering that parse_term() reads back to an equal
/// term.
std::string pretty(const Term& t);
/// `X = t, Y = u` (the inside of an inline recursion constant).
std::string pretty(const RecSpec& spec);
/// A complete `.acp` file.
std::string pretty(const SpecFile& file);

/// Identifier rule shared by the lexer and the printer.
bool is_identifier(std::string_view s);

}  // namespace acp
