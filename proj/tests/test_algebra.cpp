#include <doctest.h>

#include <array>

#include "gplp/algebra/success_function.hpp"
#include "gplp/errors.hpp"
#include "support.hpp"

using namespace gplp;
using testing::form;
using testing::pdf;
using testing::var;

TEST_SUITE("linear_form") {
  TEST_CASE("zero coefficients are never stored") {
    LinearForm f = var("X") + var("Y") - var("Y");
    CHECK(f.coeffs().size() == 1);
    CHECK(f.mentions("X"));
    CHECK_FALSE(f.mentions("Y"));
  }

  TEST_CASE("substitution and leading variable") {
    LinearForm f = var("X") - var("Z") + LinearForm(0.5);
    LinearForm g = f.substitute("Z", var("Y") + LinearForm(1.0));
    CHECK(g.coeff("X") == 1.0);
    CHECK(g.coeff("Y") == -1.0);
    CHECK(g.constant() == doctest::Approx(-0.5));
    CHECK(g.leading_variable() == "X");
    CHECK(LinearForm(3.0).leading_variable().empty());
  }

  TEST_CASE("evaluate needs every variable") {
    LinearForm f = form({{"X", 2.0}, {"Y", -1.0}}, 1.0);
    CHECK(f.evaluate({{"X", 1.5}, {"Y", 4.0}}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(f.evaluate({{"X", 1.0}}), AlgebraError);
  }

  TEST_CASE("reals print with 12 significant digits") {
    CHECK(format_real(5.0 / 3.0) == "1.66666666667");
    CHECK(format_real(2.5) == "2.5");
    CHECK(format_real(1.0) == "1");
  }
}

TEST_SUITE("constraint_set") {
  TEST_CASE("rows are kept with unit pivots") {
    auto c = ConstraintSet::of({form({{"Y", 2.0}, {"X", -2.0}, {"Z", 2.0}})});
    REQUIRE(c.size() == 1);
    const auto& row = c.rows().front();
    CHECK(row.leading_variable() == "X");
    CHECK(row.coeff("X") == 1.0);
  }

  TEST_CASE("inconsistent rows collapse to unsat") {
    ConstraintSet c;
    c.add(var("X") - LinearForm(1.0));
    CHECK(c.satisfiable());
    c.add(var("X") - LinearForm(2.0));
    CHECK_FALSE(c.satisfiable());
  }

  TEST_CASE("tolerance on residuals") {
    ConstraintSet c;
    c.add(var("X"));
    c.add(var("X") + LinearForm(1e-10));
    CHECK(c.satisfiable());
    c.add(var("X") + LinearForm(1e-8));
    CHECK_FALSE(c.satisfiable());
  }

  TEST_CASE("solved forms and elimination") {
    // X = Y + Z
    auto c = ConstraintSet::of({var("X") - var("Y") - var("Z")});
    auto y = c.solved_form("Y");
    REQUIRE(y.has_value());
    CHECK(y->approx_equal(var("X") - var("Z"), 1e-15));
    CHECK_FALSE(c.solved_form("W").has_value());

    auto both = ConstraintSet::of({var("T") - var("N"),
                                   var("N") + var("E") - LinearForm(2.5)});
    LinearForm solved;
    auto rest = both.eliminate("N", &solved);
    CHECK(rest.size() == 1);
    CHECK_FALSE(rest.mentions("N"));
    CHECK(rest.holds({{"T", 1.0}, {"E", 1.5}}));
    CHECK_FALSE(rest.holds({{"T", 1.0}, {"E", 1.0}}));
  }
}

namespace {

SuccessFunction term(double coeff, std::map<std::string, DeltaValue> deltas,
                     std::vector<GaussianFactor> gs,
                     std::vector<LinearForm> rows = {}) {
  ConstrainedTerm t;
  t.ppdf.coeff = coeff;
  t.ppdf.deltas = std::move(deltas);
  t.ppdf.gaussians = std::move(gs);
  t.constraints = ConstraintSet::of(std::move(rows));
  return simplify(SuccessFunction({t}));
}

SuccessFunction sum(std::initializer_list<SuccessFunction> parts) {
  SuccessFunction out;
  for (const auto& p : parts) out += p;
  return out;
}

GaussianFactor N(LinearForm arg, double mean, double variance) {
  return {std::move(arg), mean, variance};
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("join with the unit is the identity") {
    auto psi = term(0.3, {{"M", std::string("a")}}, {N(var("Z"), 2.0, 1.0)});
    CHECK(approx_equal(join(psi, SuccessFunction::one()), psi, 1e-15));
    CHECK(approx_equal(join(SuccessFunction::one(), psi), psi, 1e-15));
  }

  TEST_CASE("join of a constraint with a Gaussian keeps both") {
    auto c = SuccessFunction::constraint(var("X") - var("Y") - var("Z"));
    auto g = SuccessFunction::gaussian(var("Y"), 0.5, 0.1);
    auto j = join(c, g);
    REQUIRE(j.size() == 1);
    CHECK(j.ppdf(0).gaussians.size() == 1);
    CHECK(j.constraints(0).size() == 1);
    CHECK(j.constraints(0).holds({{"X", 3.0}, {"Y", 1.0}, {"Z", 2.0}}));
    CHECK(to_string(j) == "1 * N(Y; 0.5, 0.1) | X = Y + Z");
  }

  TEST_CASE("conflicting deltas eliminate the term") {
    auto a = SuccessFunction::delta("M", std::string("a"));
    auto b = SuccessFunction::delta("M", std::string("b"));
    CHECK(join(a, b).is_zero());
    CHECK(join(a, a).size() == 1);
  }

  TEST_CASE("join of the switch pmf with the mixture goal") {
    auto msw = sum({SuccessFunction::delta("M", std::string("a"), 0.3),
                    SuccessFunction::delta("M", std::string("b"), 0.7)});
    LinearForm row = var("X") - var("Y") - var("Z");
    auto g3 = sum({term(1.0, {{"M", std::string("a")}},
                        {N(var("Z"), 2.0, 1.0), N(var("Y"), 0.5, 0.1)}, {row}),
                   term(1.0, {{"M", std::string("b")}},
                        {N(var("Z"), 3.0, 1.0), N(var("Y"), 0.5, 0.1)}, {row})});
    auto g2 = join(msw, g3);
    REQUIRE(g2.size() == 2);
    CHECK(g2.ppdf(0).coeff == doctest::Approx(0.3));
    CHECK(g2.ppdf(1).coeff == doctest::Approx(0.7));

    std::array<std::string, 1> m{"M"};
    auto g2m = marginalize(g2, m);
    auto want = sum({term(0.3, {}, {N(var("Z"), 2.0, 1.0), N(var("Y"), 0.5, 0.1)}, {row}),
                     term(0.7, {}, {N(var("Z"), 3.0, 1.0), N(var("Y"), 0.5, 0.1)}, {row})});
    CHECK(approx_equal(g2m, want, 1e-12));

    std::array<std::string, 3> all{"M", "Y", "Z"};
    auto x = marginalize(g2, all);
    auto answer = sum({term(0.3, {}, {N(var("X"), 2.5, 1.1)}),
                       term(0.7, {}, {N(var("X"), 3.5, 1.1)})});
    CHECK(approx_equal(x, answer, 1e-12));
  }

  TEST_CASE("projection replaces the constrained variable") {
    auto psi = term(0.3, {}, {N(var("Z"), 2.0, 1.0), N(var("Y"), 0.5, 0.1)},
                    {var("X") - var("Y") - var("Z")});
    auto p = project(psi, "Y");
    auto want = term(0.3, {}, {N(var("Z"), 2.0, 1.0), N(var("X") - var("Z"), 0.5, 0.1)});
    CHECK(approx_equal(p, want, 1e-12));
    CHECK(approx_equal(project(want, "Y"), want, 1e-15));
  }

  TEST_CASE("integration of the projected mixture component") {
    auto psi = term(0.3, {}, {N(var("Z"), 2.0, 1.0), N(var("X") - var("Z"), 0.5, 0.1)});
    auto out = integrate_out(psi, "Z");
    CHECK(approx_equal(out, term(0.3, {}, {N(var("X"), 2.5, 1.1)}), 1e-12));
    CHECK(approx_equal(integrate_out(out, "Q"), out, 0.0));
  }

  TEST_CASE("integration over the initial state of the filter") {
    double mu0 = 0.7, s0 = 2.0, ss = 0.5;
    auto psi = term(1.0, {}, {N(var("T") - var("S"), 0.0, ss), N(var("S"), mu0, s0)});
    auto out = integrate_out(psi, "S");
    CHECK(approx_equal(out, term(1.0, {}, {N(var("T"), mu0, s0 + ss)}), 1e-12));
  }

  TEST_CASE("integration refuses a constrained variable") {
    auto psi = term(1.0, {}, {N(var("Y"), 0.0, 1.0)}, {var("X") - var("Y")});
    CHECK_THROWS_AS(integrate_out(psi, "Y"), AlgebraError);
  }

  TEST_CASE("product of two factors on one variable") {
    double v1 = 2.5, mu = 0.4, sv = 1.0, sp = 2.0;
    auto psi = term(1.0, {}, {N(LinearForm(v1) - var("T"), 0.0, sv), N(var("T"), mu, sp)});
    REQUIRE(psi.size() == 1);
    REQUIRE(psi.ppdf(0).gaussians.size() == 1);
    double mean = (sp * v1 + sv * mu) / (sp + sv);
    double variance = sp * sv / (sp + sv);
    const auto& g = psi.ppdf(0).gaussians.front();
    CHECK(g.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(g.variance == doctest::Approx(variance).epsilon(1e-12));
    CHECK(psi.ppdf(0).coeff == doctest::Approx(pdf(v1, mu, sp + sv)).epsilon(1e-12));
    for (double t : {-1.0, 0.3, 2.0}) {
      double direct = pdf(v1 - t, 0.0, sv) * pdf(t, mu, sp);
      CHECK(evaluate(psi, {{"T", t}}) == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  TEST_CASE("discrete marginalization of the q example") {
    auto p = sum({term(1.0, {{"X", std::string("a")}, {"Y", 1.0}}, {}),
                  term(1.0, {{"X", std::string("a")}, {"Y", 2.0}}, {}),
                  term(1.0, {{"X", std::string("b")}, {"Y", 2.0}}, {}),
                  term(1.0, {{"X", std::string("b")}, {"Y", 3.0}}, {})});
    auto msw = sum({SuccessFunction::delta("X", std::string("a"), 0.3),
                    SuccessFunction::delta("X", std::string("b"), 0.7)});
    std::array<DeltaValue, 2> range{std::string("a"), std::string("b")};
    auto q = marginalize_discrete(join(msw, p), "X", range);
    CHECK(evaluate(q, {{"Y", 1.0}}) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(evaluate(q, {{"Y", 2.0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(evaluate(q, {{"Y", 3.0}}) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(evaluate(q, {{"Y", 4.0}}) == 0.0);
  }

  TEST_CASE("discrete marginalization rejects values outside the range") {
    auto psi = SuccessFunction::delta("X", std::string("c"));
    std::array<DeltaValue, 2> range{std::string("a"), std::string("b")};
    CHECK_THROWS_AS(marginalize_discrete(psi, "X", range), AlgebraError);
  }

  TEST_CASE("marginalizing nothing is the identity") {
    auto psi = term(0.3, {}, {N(var("X"), 2.5, 1.1)});
    CHECK(approx_equal(marginalize(psi, std::span<const std::string>{}), psi, 0.0));
  }

  TEST_CASE("evaluate the mixture answer") {
    auto psi = sum({term(0.3, {}, {N(var("X"), 2.5, 1.1)}),
                    term(0.7, {}, {N(var("X"), 3.5, 1.1)})});
    double want = 0.3 * pdf(2.5, 2.5, 1.1) + 0.7 * pdf(2.5, 3.5, 1.1);
    CHECK(evaluate(psi, {{"X", 2.5}}) == doctest::Approx(want).epsilon(1e-14));
    CHECK_THROWS_AS(evaluate(psi, {}), AlgebraError);
  }

  TEST_CASE("normalize") {
    auto psi = term(0.2, {}, {N(var("X"), 0.0, 1.0)});
    auto n = normalize(psi, "X");
    CHECK(n.ppdf(0).coeff == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(normalize(SuccessFunction::zero(), "X"), AlgebraError);
  }

  TEST_CASE("a real delta is sifted into the other factors") {
    auto psi = term(0.35, {{"Z", 1.0}}, {N(var("X") - var("Z"), 0.5, 0.1)});
    CHECK(infer_kind(psi, "Z") == VarKind::Continuous);
    auto out = marginalize(psi, "Z");
    CHECK(approx_equal(out, term(0.35, {}, {N(var("X"), 1.5, 0.1)}), 1e-12));
  }

  TEST_CASE("canonical rendering") {
    auto psi = sum({term(0.7, {}, {N(var("X"), 3.5, 1.1)}),
                    term(0.3, {}, {N(var("X"), 2.5, 1.1)})});
    CHECK(to_string(psi) == "0.3 * N(X; 2.5, 1.1) + 0.7 * N(X; 3.5, 1.1)");
    CHECK(to_string(SuccessFunction::zero()) == "0");
    CHECK(to_string(SuccessFunction::one()) == "1");
  }
}
