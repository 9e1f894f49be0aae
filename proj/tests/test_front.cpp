#include <doctest.h>

#include <set>

#include "gplp/errors.hpp"
#include "gplp/front/arith.hpp"
#include "gplp/front/program.hpp"
#include "gplp/front/unify.hpp"
#include "support.hpp"

using namespace gplp;

namespace {

std::set<std::string> predicates(const Program& p) {
  std::set<std::string> out;
  for (const auto& c : p.clauses()) out.insert(c.head->indicator());
  return out;
}

// Sides of the single `=` item in a query.
std::pair<TermPtr, TermPtr> sides(const std::string& text) {
  auto q = parse_query(text);
  REQUIRE(q.items.size() == 1);
  if (auto* u = std::get_if<UnifyItem>(&q.items[0])) return {u->lhs, u->rhs};
  auto& c = std::get<ConstraintItem>(q.items[0]);
  return {c.lhs, c.rhs};
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("kalman program") {
    auto p = parse_program(testing::kalman_program(0, 1, 1, 1, {2.5}));
    auto preds = predicates(p);
    for (const char* name : {"kf/2", "kf_part/4", "trans/3", "emit/3", "obs/2"})
      CHECK(preds.count(name) == 1);
    CHECK(p.clauses_for("kf_part/4").size() == 2);
    std::set<std::string> switches;
    for (const auto& s : p.switches()) {
      switches.insert(to_string(s.pattern));
      CHECK(std::holds_alternative<Gaussian>(s.dist));
    }
    CHECK(switches == std::set<std::string>{"init", "trans_err", "obs_err"});
  }

  TEST_CASE("a fact is a bodyless clause") {
    auto p = parse_program("q(X).");
    REQUIRE(p.clauses().size() == 1);
    CHECK(p.clauses()[0].body.empty());
    CHECK(p.facts().empty());  // not ground
  }

  TEST_CASE("probabilities must sum to one") {
    try {
      parse_program("values(m, [a, b]).\n:- set_sw(m, [0.3, 0.6]).\n");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("0.9") != std::string::npos);
    }
  }

  TEST_CASE("validation errors") {
    CHECK_THROWS_AS(parse_program("values(m, [a]).\n:- set_sw(m, [1.0]).\n"
                                  ":- set_sw(m, [1.0]).\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_program("values(g, real).\n:- set_sw(g, norm(0, 0)).\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_program("values(g, real).\n:- set_sw(g, norm(0, -1)).\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_program("values(g, real).\n"), ValidationError);
    CHECK_THROWS_AS(parse_program("values(m, [a]).\n:- set_sw(m, norm(0, 1)).\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_program("values(g, real).\n:- set_sw(g, [1.0]).\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_program("values(m, [a, b]).\n:- set_sw(m, [1.2, -0.2]).\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_program(":- set_sw(m, [1.0]).\n"), ValidationError);
    CHECK_THROWS_AS(parse_program("p(X) :- msw(nope, X).\n"), ValidationError);
  }

  TEST_CASE("discrete switch without set_sw is uniform") {
    auto p = parse_program("values(c, [h, t, e, f]).\n");
    REQUIRE(p.switches().size() == 1);
    CHECK(p.switches()[0].defaulted);
    const auto& d = std::get<Discrete>(p.switches()[0].dist);
    for (double x : d.probs) CHECK(x == 0.25);
  }

  TEST_CASE("parameterized families") {
    auto p = parse_program(testing::kMixture);
    auto st_a = parse_query("msw(st(a), Z).");
    auto& m = std::get<MswItem>(st_a.items[0]);
    auto found = p.matching(m.switch_term);
    REQUIRE(found.size() == 1);
    CHECK(std::get<Gaussian>(found[0]->dist).mean == 2.0);
    auto open = parse_query("msw(st(M), Z).");
    CHECK(p.matching(std::get<MswItem>(open.items[0]).switch_term).size() == 2);
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_program("p(X) :- q(X.\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() > 0);
      CHECK(e.phase() == Phase::Parse);
    }
    try {
      parse_program("p(a).\n\nq(b) :- ,.\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_program(":- dynamic(foo).\n"), ParseError);
    CHECK_THROWS_AS(parse_program("p(X) :- values(m, [a]).\n"), ParseError);
    CHECK_THROWS_AS(parse_query("widget(X)"), ParseError);
  }

  TEST_CASE("comments are ignored") {
    auto p = parse_program("% heading\np(1). % trailing\n%p(2).\n");
    CHECK(p.clauses().size() == 1);
  }

  TEST_CASE("queries") {
    auto w = parse_query("widget(X).");
    REQUIRE(w.items.size() == 1);
    CHECK(std::holds_alternative<CallItem>(w.items[0]));
    CHECK(w.variables == std::vector<std::string>{"X"});

    auto k = parse_query("kf(1, T).");
    REQUIRE(k.items.size() == 1);
    CHECK(to_string(k.items[0]) == "kf(1, T)");

    CHECK(parse_query("true.").items.empty());
    CHECK(parse_query("p(_, B, A), q(A).").variables ==
          std::vector<std::string>{"B", "A"});
  }

  TEST_CASE("equality is a constraint or a unification") {
    auto is_constraint = [](const std::string& text) {
      return std::holds_alternative<ConstraintItem>(parse_query(text).items.at(0));
    };
    CHECK(is_constraint("X = Y + Z."));
    CHECK(is_constraint("T = S."));
    CHECK(is_constraint("V = 2.5."));
    CHECK_FALSE(is_constraint("X = f(a)."));
    CHECK_FALSE(is_constraint("M = a."));
    CHECK(std::holds_alternative<ArithItem>(parse_query("N is I + 1.").items.at(0)));
    CHECK(std::holds_alternative<CompareItem>(parse_query("I < N.").items.at(0)));
    CHECK(std::holds_alternative<MswItem>(parse_query("msw(m, M).").items.at(0)));
    CHECK(std::holds_alternative<MswItem>(parse_query("msw(e, 1, X).").items.at(0)));
  }

  TEST_CASE("constraint permutations give the same row") {
    auto row = [](const std::string& text) {
      auto [l, r] = sides(text);
      return *linearize(*Term::compound("-", {l, r}));
    };
    LinearForm want = row("V = 2*X + 1.");
    for (const char* text : {"V = 1 + X*2.", "2*X + 1 = V.", "V = X + X + 1.",
                             "V - 1 = 2*X."}) {
      LinearForm got = row(text);
      CHECK((got.approx_equal(want, 1e-15) || got.approx_equal(-want, 1e-15)));
    }
    CHECK_FALSE(linearize(*sides("V = X*Y.").second).has_value());
  }

  TEST_CASE("negative literals and unary minus") {
    auto [l, r] = sides("X = -2.5.");
    (void)l;
    CHECK(r->is_number());
    CHECK(r->number() == -2.5);
    auto [l2, r2] = sides("X = - Y.");
    (void)l2;
    auto f = linearize(*r2);
    REQUIRE(f.has_value());
    CHECK(f->coeff("Y") == -1.0);
  }

  TEST_CASE("round trip through the printer") {
    for (const char* name : {"mixture.pl", "q.pl", "kalman.pl", "hybrid.pl"}) {
      CAPTURE(name);
      auto p = testing::load(name);
      auto text = print_program(p);
      auto again = parse_program(text);
      CHECK(structurally_equal(p, again));
      CHECK(print_program(again) == text);
    }
  }
}

TEST_SUITE("unify") {
  TEST_CASE("clause head of the filter") {
    auto [a, b] = sides("kf_part(0, 1, S, T) = kf_part(I, N, S1, T1).");
    auto s = unify(a, b);
    REQUIRE(s.has_value());
    CHECK(to_string(gplp::apply(Term::variable("I"), *s)) == "0");
    CHECK(to_string(gplp::apply(Term::variable("N"), *s)) == "1");
    CHECK(to_string(gplp::apply(Term::variable("S1"), *s)) == "S");
    CHECK(to_string(gplp::apply(Term::variable("T1"), *s)) == "T");
    CHECK(s->size() == 4);
  }

  TEST_CASE("identical terms need no bindings") {
    auto [a, b] = sides("f(X) = f(X).");
    auto s = unify(a, b);
    REQUIRE(s.has_value());
    CHECK(s->empty());
  }

  TEST_CASE("occurs check") {
    auto [a, b] = sides("X = f(X).");
    CHECK_FALSE(unify(a, b).has_value());
  }

  TEST_CASE("clashes") {
    auto [a, b] = sides("f(a, X) = f(b, X).");
    CHECK_FALSE(unify(a, b).has_value());
    auto [c, d] = sides("f(X) = g(X).");
    CHECK_FALSE(unify(c, d).has_value());
    auto [e, f] = sides("f(X, X) = f(a, b).");
    CHECK_FALSE(unify(e, f).has_value());
  }

  TEST_CASE("numbers unify by value") {
    auto [a, b] = sides("p(1) = p(1.0).");
    CHECK(unify(a, b).has_value());
    auto [c, d] = sides("p(1) = p(1.5).");
    CHECK_FALSE(unify(c, d).has_value());
  }

  TEST_CASE("bindings chain through variables") {
    auto [a, b] = sides("f(X, Y, a) = f(Y, Z, Z).");
    auto s = unify(a, b);
    REQUIRE(s.has_value());
    for (const char* v : {"X", "Y", "Z"})
      CHECK(to_string(gplp::apply(Term::variable(v), *s)) == "a");
  }
}
