#include <doctest.h>

#include "gplp/algebra/success_function.hpp"
#include "gplp/engine/query.hpp"
#include "gplp/errors.hpp"
#include "gplp/oracle/closed_form.hpp"
#include "gplp/oracle/enumerate.hpp"
#include "gplp/oracle/kalman.hpp"
#include "gplp/oracle/quadrature.hpp"
#include "gplp/oracle/sampling.hpp"
#include "support.hpp"

using namespace gplp;
using testing::pdf;
using testing::rel_err;
using testing::var;

namespace {

PPDFTerm product(const std::vector<ScalarFactor>& fs) {
  PPDFTerm t;
  for (const auto& f : fs)
    t.gaussians.push_back({LinearForm::variable("V", f.a) - LinearForm(f.x), f.mu, f.s});
  return t;
}

double quad(const PPDFTerm& t) {
  auto [lo, hi] = auto_interval(t, "V");
  return quad_integrate({t, "V", lo, hi, 1e-12});
}

double answer_probability(const std::vector<EnumeratedAnswer>& xs,
                          const Assignment& a) {
  for (const auto& x : xs)
    if (x.values == a) return x.probability;
  return 0.0;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("quadrature of a single density") {
    PPDFTerm t;
    t.gaussians.push_back({var("V"), 0.3, 2.0});
    CHECK(quad(t) == doctest::Approx(1.0).epsilon(1e-11));
    t.coeff = 0.25;
    t.gaussians[0].arg = LinearForm::variable("V", -3.0) + LinearForm(1.0);
    CHECK(quad(t) == doctest::Approx(0.25 / 3.0).epsilon(1e-11));
  }

  TEST_CASE("quadrature rejects bad intervals") {
    PPDFTerm t;
    t.gaussians.push_back({var("V"), 0.0, 1.0});
    CHECK_THROWS_AS(quad_integrate({t, "V", 1.0, 0.0, 1e-12}), OracleError);
  }

  TEST_CASE("two factor integral with unit coefficients") {
    // a1 = 1, a2 = -1: no Jacobian and no extra constant.
    for (auto [x1, x2, m1, m2, s1, s2] :
         {std::array<double, 6>{0.4, -1.2, 0.5, 1.5, 0.7, 2.0},
          std::array<double, 6>{2.0, 1.0, -1.0, 0.0, 0.1, 0.3}}) {
      double a1 = 1.0, a2 = -1.0;
      auto t = product({{a1, x1, m1, s1}, {a2, x2, m2, s2}});
      double want = pdf(a2 * x1 - a1 * x2, a1 * m2 - a2 * m1, a2 * a2 * s1 + a1 * a1 * s2);
      CHECK(rel_err(quad(t), want) < 1e-9);
      CHECK(rel_err(pairwise_closed_form({{a1, x1, m1, s1}, {a2, x2, m2, s2}}), want) < 1e-12);
    }
  }

  TEST_CASE("pairwise closed form against quadrature and integrate_out") {
    testing::Rng rng(7);
    for (int round = 0; round < 40; ++round) {
      std::vector<ScalarFactor> fs;
      int n = rng.integer(2, 4);
      for (int k = 0; k < n; ++k) {
        double a = rng.uniform(0.3, 2.0) * (rng.coin() ? 1 : -1);
        fs.push_back({a, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.1, 4)});
      }
      auto t = product(fs);
      double cf = pairwise_closed_form(fs);
      CHECK(rel_err(quad(t), cf) < 1e-8);

      ConstrainedTerm ct{t, {}};
      auto out = integrate_out(SuccessFunction({ct}), "V");
      CHECK(rel_err(evaluate(out, {}), cf) < 1e-9);
    }
  }

  TEST_CASE("pair variance is symmetric and reduces to the sum for two") {
    std::vector<ScalarFactor> two{{1.0, 0.0, 0.0, 0.7}, {2.0, 0.0, 0.0, 1.3}};
    CHECK(pair_variance(two, 0, 1) == doctest::Approx(2.0 * 2.0 * 0.7 + 1.3));
    std::vector<ScalarFactor> three{{1.0, 0, 0, 0.5}, {-2.0, 0, 0, 1.5}, {0.5, 0, 0, 3.0}};
    CHECK(pair_variance(three, 0, 2) == doctest::Approx(pair_variance(three, 2, 0)));
  }

  TEST_CASE("enumeration of a coin") {
    auto p = parse_program("c(X) :- msw(coin, X).\nvalues(coin, [h, t]).\n"
                           ":- set_sw(coin, [0.4, 0.6]).\n");
    auto xs = enumerate_discrete(p, parse_query("c(X)."));
    CHECK(answer_probability(xs, {{"X", std::string("h")}}) == doctest::Approx(0.4));
    CHECK(answer_probability(xs, {{"X", std::string("t")}}) == doctest::Approx(0.6));
  }

  TEST_CASE("enumeration of the q example") {
    auto p = testing::load("q.pl");
    auto xs = enumerate_discrete(p, parse_query("q(Y)."));
    CHECK(answer_probability(xs, {{"Y", 1.0}}) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(answer_probability(xs, {{"Y", 2.0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(answer_probability(xs, {{"Y", 3.0}}) == doctest::Approx(0.7).epsilon(1e-15));
  }

  TEST_CASE("enumeration refuses continuous switches") {
    auto p = parse_program(testing::kMixture);
    CHECK_THROWS_AS(enumerate_discrete(p, parse_query("widget(X).")), OracleError);
  }

  TEST_CASE("kalman reference recursion") {
    auto [m0, p0] = kalman_reference(0.4, 1.5, 1.0, 1.0, {});
    CHECK(m0 == 0.4);
    CHECK(p0 == 1.5);
    auto [m1, p1] = kalman_reference(0.0, 1.0, 1.0, 1.0, {2.5});
    CHECK(m1 == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(p1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // Worked by hand: P 2 -> 2/3, m 2/3; then P 5/3, gain 5/8.
    auto [m2, p2] = kalman_reference(0.0, 1.0, 1.0, 1.0, {1.0, 2.0});
    CHECK(m2 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p2 == doctest::Approx(0.625).epsilon(1e-15));
  }

  TEST_CASE("sampling a single gaussian switch") {
    auto p = parse_program("g(X) :- msw(g, X).\nvalues(g, real).\n"
                           ":- set_sw(g, norm(1.0, 0.5)).\n");
    std::vector<double> grid{-0.5, 0.5, 1.0, 1.5, 2.5};
    SamplingOptions opts;
    opts.n = 40000;
    auto est = mc_density(p, parse_query("g(X)."), "X", grid, opts);
    REQUIRE(est.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // The kernel widens the density by its own variance.
      double want = pdf(grid[i], 1.0, 0.5 + opts.bandwidth * opts.bandwidth);
      CHECK(std::abs(est[i].mean - want) < 4 * est[i].std_error + 1e-12);
      CHECK(est[i].n == opts.n);
    }
    auto again = mc_density(p, parse_query("g(X)."), "X", grid, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(again[i].mean == est[i].mean);
  }
}
