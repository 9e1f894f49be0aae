#pragma once

#include <optional>

#include "gplp/algebra/linear_form.hpp"
#include "gplp/front/term.hpp"

namespace gplp {

/// Variable, number, or +, -, *, / over those (syntactic check).
bool is_arith_expr(const Term& term);

/// Linear form of an arithmetic term; nullopt when not linear (a product of
/// two variable-bearing factors, or division by one).
std::optional<LinearForm> linearize(const Term& term);

/// Value of a ground arithmetic term; nullopt otherwise.
std::optional<double> eval_ground(const Term& term);

}  // namespace gplp
