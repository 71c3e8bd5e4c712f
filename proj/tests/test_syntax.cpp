#include <doctest.h>

#include "acpkit/errors.hpp"
#include "acpkit/syntax.hpp"
#include "support/generators.hpp"

using namespace acp;

namespace {

const ActionSet kAbc{Action("a"), Action("b"), Action("c")};

Term a() { return Term::action("a"); }
Term b() { return Term::action("b"); }
Term c() { return Term::action("c"); }

Term parse(const std::string& s) { return parse_term(s, kAbc, true); }

ParseError::Kind parse_error_kind(const std::string& s) {
  try {
    parse(s);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("no parse error for " << s);
  return ParseError::Kind::Syntax;
}

}  // namespace

TEST_CASE("precedence") {
  CHECK(parse("a . b + c") == Term::alt(Term::seq(a(), b()), c()));
  CHECK(parse("a . b . c") == Term::seq(a(), Term::seq(b(), c())));
  CHECK(parse("a + b + c") == Term::alt(Term::alt(a(), b()), c()));
  CHECK(parse("a || b || c") == Term::par(Term::par(a(), b()), c()));
  CHECK(parse("a . b || c + a") == Term::alt(Term::par(Term::seq(a(), b()), c()), a()));
  CHECK(parse("a |_ (b | c)") == Term::left_merge(a(), Term::comm_merge(b(), c())));
  CHECK(parse("delta") == Term::delta());
  CHECK(parse("encap({a, b}, a . c)") ==
        Term::encap({Action("a"), Action("b")}, Term::seq(a(), c())));
  CHECK(parse("encap({}, a)") == Term::encap({}, a()));
}

TEST_CASE("unicode notation") {
  CHECK(parse("a · b ∥ c") == Term::par(Term::seq(a(), b()), c()));
  CHECK(parse("a ⫦ δ") == Term::left_merge(a(), Term::delta()));
  CHECK(parse("∂({a}, a)") == Term::encap({Action("a")}, a()));
}

TEST_CASE("mixed merges need parentheses") {
  CHECK(parse_error_kind("a || b |_ c") == ParseError::Kind::MixedMergeWithoutParens);
  CHECK(parse_error_kind("a | b || c") == ParseError::Kind::MixedMergeWithoutParens);
  CHECK(parse("(a || b) |_ c") == Term::left_merge(Term::par(a(), b()), c()));
}

TEST_CASE("errors carry positions") {
  CHECK(parse_error_kind("a + ") == ParseError::Kind::Syntax);
  CHECK(parse_error_kind("a . (b") == ParseError::Kind::Syntax);
  try {
    parse_term("a + zz", kAbc, false);
    FAIL("expected UndeclaredAction");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UndeclaredAction);
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
  try {
    parse_spec_file("act a;\nproc X = a .\n  ;\n");
    FAIL("expected Syntax");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("recursion constants") {
  const Term x = Term::rec("X", RecSpec({{"X", Term::seq(a(), Term::var("X"))}}));
  CHECK(pretty(x) == "<X | X = a . X>");
  CHECK(parse("<X | X = a . X>") == x);
  const Term y = parse("<Y | X = a . Y, Y = b . X + c>");
  CHECK(y.var_name() == "Y");
  CHECK(y.spec().size() == 2);
  CHECK(free_vars(y).empty());
}

TEST_CASE("printer") {
  CHECK(pretty(Term::alt(Term::seq(a(), b()), c())) == "a . b + c");
  CHECK(pretty(Term::delta()) == "delta");
  CHECK(pretty(Term::alt(a(), Term::alt(b(), c()))) == "a + (b + c)");
  CHECK(pretty(Term::seq(Term::seq(a(), b()), c())) == "(a . b) . c");
  CHECK(pretty(Term::par(a(), Term::par(b(), c()))) == "a || (b || c)");
  CHECK(pretty(Term::left_merge(Term::par(a(), b()), c())) == "(a || b) |_ c");
}

TEST_CASE("spec files") {
  const std::string text =
      "// a buffer\n"
      "act a, b, c;\n"
      "comm a | b = c;\n"
      "proc X = a . Y;\n"
      "proc Y = b . X + c;\n"
      "root Y;\n";
  const SpecFile f = parse_spec_file(text);
  CHECK(f.alphabet() == kAbc);
  CHECK(f.comm.gamma(Action("b"), Action("a")) == MaybeAction(Action("c")));
  CHECK(f.spec.size() == 2);
  CHECK(f.root == std::optional<std::string>("Y"));
  CHECK(pretty(f) ==
        "act a, b, c;\n"
        "comm a | b = c;\n"
        "proc X = a . Y;\n"
        "proc Y = b . X + c;\n"
        "root Y;\n");
  CHECK(parse_spec_file(pretty(f)) == f);

  // Process variables may be used before their equation.
  CHECK_NOTHROW(parse_spec_file("act a; proc X = a . Z; proc Z = a;"));
  CHECK_THROWS_AS(parse_spec_file("act a; proc X = a; root Q;"), Error);
  CHECK_THROWS_AS(parse_spec_file("act a; comm a | q = a;"), ParseError);
}

TEST_CASE("round trip on random terms and specs") {
  testing::Gen g(71);
  for (int i = 0; i < 500; ++i) {
    const Term t = g.open(5);
    const std::string s = pretty(t);
    CHECK_MESSAGE(parse(s) == t, s);
  }
  for (int i = 0; i < 200; ++i) {
    SpecFile f;
    f.comm = g.comm_table();
    f.spec = g.finite_state_spec(1 + g.below(3), true);
    if (g.chance(0.5)) f.root = f.spec.equations()[g.below(f.spec.size())].var;
    const std::string s = pretty(f);
    CHECK_MESSAGE(parse_spec_file(s) == f, s);
  }
}

TEST_CASE("identifiers") {
  CHECK(is_identifier("X0"));
  CHECK(is_identifier("send_1"));
  CHECK_FALSE(is_identifier("0X"));
  CHECK_FALSE(is_identifier("proc"));
  CHECK_FALSE(is_identifier(""));
}
