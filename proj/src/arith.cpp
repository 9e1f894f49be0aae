#include "gplp/front/arith.hpp"

#include <cmath>

namespace gplp {

namespace {

bool is_arith_op(const Term& t) {
  if (!t.is_compound()) return false;
  if (t.arity() == 1) return t.name() == "-" || t.name() == "+";
  if (t.arity() != 2) return false;
  const auto& f = t.name();
  return f == "+" || f == "-" || f == "*" || f == "/";
}

}  // namespace

bool is_arith_expr(const Term& term) {
  if (term.is_variable() || term.is_number()) return true;
  if (!is_arith_op(term)) return false;
  for (const auto& a : term.args())
    if (!is_arith_expr(*a)) return false;
  return true;
}

std::optional<LinearForm> linearize(const Term& term) {
  if (term.is_number()) return LinearForm(term.number());
  if (term.is_variable()) return LinearForm::variable(term.name());
  if (!is_arith_op(term)) return std::nullopt;
  auto a = linearize(*term.args()[0]);
  if (!a) return std::nullopt;
  if (term.arity() == 1) {
    if (term.name() == "-") return -*a;
    return a;
  }
  auto b = linearize(*term.args()[1]);
  if (!b) return std::nullopt;
  const auto& f = term.name();
  if (f == "+") return *a + *b;
  if (f == "-") return *a - *b;
  if (f == "*") {
    if (a->is_constant()) return *b * a->constant();
    if (b->is_constant()) return *a * b->constant();
    return std::nullopt;
  }
  // division
  if (!b->is_constant() || b->constant() == 0.0) return std::nullopt;
  return *a * (1.0 / b->constant());
}

std::optional<double> eval_ground(const Term& term) {
  if (term.is_number()) return term.number();
  if (!is_arith_op(term)) return std::nullopt;
  auto a = eval_ground(*term.args()[0]);
  if (!a) return std::nullopt;
  if (term.arity() == 1) return term.name() == "-" ? -*a : *a;
  auto b = eval_ground(*term.args()[1]);
  if (!b) return std::nullopt;
  const auto& f = term.name();
  if (f == "+") return *a + *b;
  if (f == "-") return *a - *b;
  if (f == "*") return *a * *b;
  if (*b == 0.0) return std::nullopt;
  return *a / *b;
}

}  // namespace gplp
