#include <doctest.h>

#include <chrono>

#include "acpkit/errors.hpp"
#include "acpkit/linearize.hpp"
#include "acpkit/syntax.hpp"
#include "support/generators.hpp"

using namespace acp;

namespace {

Term a() { return Term::action("a"); }
Term b() { return Term::action("b"); }
Term c() { return Term::action("c"); }
Term v(const char* n) { return Term::var(n); }

LinearizationResult lin(const RecSpec& e, LinearizeOptions o = {}) {
  return linearize(validate_spec(e), "X", testing::handshake(), o);
}

}  // namespace

TEST_CASE("single loop") {
  const LinearizationResult r = lin(RecSpec({{"X", Term::seq(a(), v("X"))}}));
  CHECK(r.root == "X0");
  CHECK(pretty(r.spec) == "X0 = a . X0");
  CHECK(r.stats.memo_hits == 1);
}

TEST_CASE("two stages with a memo hit") {
  const RecSpec e({{"X", Term::seq(a(), Term::alt(Term::seq(b(), v("X")), c()))}});
  const LinearizationResult r = lin(e);
  CHECK(pretty(r.spec) == "X0 = a . X1, X1 = b . X0 + c");
  CHECK(r.stats.stages == 2);
  CHECK(r.stats.memo_hits == 1);
  REQUIRE(r.state_map.size() == 2);
  auto ep = std::make_shared<const RecSpec>(e);
  CHECK(r.state_map[0].second == Term::rec("X", ep));
  const CommFn f = testing::handshake();
  CHECK(testing::bisimilar_terms(Term::rec("X", ep), Term::rec(r.root, r.spec), f));
}

TEST_CASE("infinite-state process exhausts the budget quickly") {
  const RecSpec e({{"X", Term::seq(a(), Term::seq(v("X"), b()))}});
  LinearizeOptions o;
  o.max_states = 100;
  const auto start = std::chrono::steady_clock::now();
  try {
    lin(e, o);
    FAIL("expected StateBudgetExceeded");
  } catch (const BudgetError& err) {
    CHECK(err.kind() == BudgetError::Kind::StateBudgetExceeded);
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
}

TEST_CASE("without memoization even a single loop is infinite") {
  LinearizeOptions o;
  o.max_states = 100;
  o.memoize = false;
  CHECK_THROWS_AS(lin(RecSpec({{"X", Term::seq(a(), v("X"))}}), o), BudgetError);
  // A finite process still works.
  CHECK(lin(RecSpec({{"X", Term::seq(a(), b())}}), o).spec.size() == 2);
}

TEST_CASE("linear input is renamed") {
  const RecSpec e({{"X", Term::alt(Term::seq(a(), v("Y")), b())},
                   {"Y", Term::seq(c(), v("X"))},
                   {"Z", Term::seq(a(), v("Z"))}});
  const LinearizationResult r = lin(e);
  CHECK(pretty(r.spec) == "X0 = a . X1 + b, X1 = c . X0");
}

TEST_CASE("duplicate summands are merged") {
  const LinearizationResult r = lin(RecSpec({{"X", Term::alt(Term::alt(a(), a()), Term::seq(b(), v("X")))}}));
  CHECK(r.stats.duplicates_merged == 1);
  CHECK(pretty(r.spec) == "X0 = b . X0 + a");
}

TEST_CASE("traces are recorded per stage") {
  LinearizeOptions o;
  o.record_traces = true;
  const LinearizationResult r = lin(RecSpec({{"X", Term::seq(a(), Term::alt(Term::seq(b(), v("X")), c()))}}), o);
  REQUIRE(r.traces.size() == 2);
  CHECK(r.traces[0].var == "X0");
}

TEST_CASE("unknown root") {
  CHECK_THROWS_AS(linearize(validate_spec(RecSpec({{"X", a()}})), "Q", testing::handshake()),
                  ValidationError);
}

TEST_CASE("random finite-state specs linearize to bisimilar linear specs") {
  const CommFn f = testing::handshake();
  testing::Gen g(61);
  for (int i = 0; i < 100; ++i) {
    const ValidatedSpec vs = validate_spec(g.finite_state_spec(1 + g.below(3), true));
    const LinearizationResult r = linearize(vs, "X0", f);
    CHECK(is_linear_spec(r.spec));
    for (const auto& eq : r.spec.equations()) {
      for (const auto& x : free_vars(eq.rhs)) CHECK(r.spec.defines(x));
    }
    CHECK(testing::bisimilar_terms(Term::rec("X0", vs.original), Term::rec(r.root, r.spec), f));
  }
}
