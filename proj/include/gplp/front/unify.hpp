#pragma once

#include <optional>

#include "gplp/front/term.hpp"

namespace gplp {

/// Follows variable bindings in `subst` until a non-variable or an unbound
/// variable is reached.
TermPtr deref(const TermPtr& term, const Substitution& subst);

/// Extends `subst` with a most general unifier of `a` and `b`, with occurs
/// check. When two unbound variables meet, the one from `b` is bound.
/// On failure `subst` may hold partial bindings.
bool unify(const TermPtr& a, const TermPtr& b, Substitution& subst);

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b);

}  // namespace gplp
