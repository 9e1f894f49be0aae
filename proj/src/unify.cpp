#include "gplp/front/unify.hpp"

namespace gplp {

TermPtr deref(const TermPtr& term, const Substitution& subst) {
  TermPtr t = term;
  while (t->is_variable()) {
    auto it = subst.find(t->name());
    if (it == subst.end()) break;
    t = it->second;
  }
  return t;
}

namespace {

bool occurs(const std::string& var, const TermPtr& term,
            const Substitution& subst) {
  TermPtr t = deref(term, subst);
  if (t->is_variable()) return t->name() == var;
  for (const auto& a : t->args())
    if (occurs(var, a, subst)) return true;
  return false;
}

}  // namespace

bool unify(const TermPtr& a, const TermPtr& b, Substitution& subst) {
  TermPtr x = deref(a, subst);
  TermPtr y = deref(b, subst);
  if (y->is_variable()) {
    if (x->is_variable() && x->name() == y->name()) return true;
    if (occurs(y->name(), x, subst)) return false;
    subst[y->name()] = x;
    return true;
  }
  if (x->is_variable()) {
    if (occurs(x->name(), y, subst)) return false;
    subst[x->name()] = y;
    return true;
  }
  if (x->is_number() || y->is_number())
    return x->is_number() && y->is_number() && x->number() == y->number();
  if (x->kind() != y->kind() || x->name() != y->name() ||
      x->arity() != y->arity())
    return false;
  for (std::size_t i = 0; i < x->arity(); ++i)
    if (!unify(x->args()[i], y->args()[i], subst)) return false;
  return true;
}

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b) {
  Substitution s;
  if (!unify(a, b, s)) return std::nullopt;
  return s;
}

}  // namespace gplp
