#include "gplp/engine/derivation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gplp/errors.hpp"
#include "gplp/front/arith.hpp"
#include "gplp/front/unify.hpp"

namespace gplp {

const char* step_name(StepKind kind) {
  switch (kind) {
    case StepKind::Success: return "success";
    case StepKind::PCR: return "PCR";
    case StepKind::MSW: return "MSW";
    case StepKind::CONS: return "CONS";
    case StepKind::ARITH: return "ARITH";
    case StepKind::COMPARE: return "COMPARE";
    case StepKind::UNIFY: return "UNIFY";
  }
  return "?";
}

std::vector<std::string> DerivationNode::variables() const {
  std::vector<std::string> out;
  for (const auto& item : goal) collect_variables(item, out);
  return out;
}

DeltaValue delta_value(const Term& ground) {
  if (ground.is_number()) return ground.number();
  return to_string(ground);
}

namespace {

std::string goal_text(const std::vector<BodyItem>& goal) {
  std::string s;
  for (const auto& item : goal) {
    if (!s.empty()) s += ", ";
    s += to_string(item);
  }
  return s.empty() ? "true" : s;
}

bool has_gaussian_decl(const std::vector<const SwitchDecl*>& decls) {
  return std::any_of(decls.begin(), decls.end(), [](const SwitchDecl* d) {
    return std::holds_alternative<Gaussian>(d->dist);
  });
}

bool value_in(const Term& value, const Discrete& dist) {
  for (const auto& v : dist.values) {
    if (value.is_number() && v->is_number()) {
      if (value.number() == v->number()) return true;
    } else if (structurally_equal(value, *v)) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> sorted(std::set<std::string> s) {
  return {s.begin(), s.end()};
}

// Per-path bookkeeping: the accumulated constraint store, variable typing
// and the (switch, instance) pairs used so far.
struct PathState {
  ConstraintSet store;
  std::map<std::string, VarKind> types;
  std::set<std::string> used;
};

class Deriver {
 public:
  Deriver(const Program& program, const DeriveOptions& options,
          DeriveStats& stats)
      : program_(program), options_(options), stats_(stats) {}

  std::optional<DerivationNode> run(std::vector<BodyItem> goal,
                                    const PathState& state, int depth) {
    stats_.max_depth = std::max(stats_.max_depth, depth);
    if (depth > options_.depth_limit)
      throw DerivationError("depth limit " +
                            std::to_string(options_.depth_limit) +
                            " exceeded at goal: " + goal_text(goal));
    DerivationNode node;
    node.depth = depth;
    node.goal = std::move(goal);
    if (node.goal.empty()) {
      ++stats_.successes;
      return node;
    }
    const BodyItem& first = node.goal.front();
    std::vector<BodyItem> rest(node.goal.begin() + 1, node.goal.end());
    bool ok = std::visit(
        [&](const auto& item) { return step(node, item, rest, state); },
        first);
    if (!ok) return std::nullopt;
    annotate(node);
    return node;
  }

 private:
  // Applies `theta` to the path state. False when the path fails.
  bool bind(PathState& state, const Substitution& theta) {
    if (theta.empty()) return true;
    for (const auto& var : state.store.variables()) {
      if (!theta.count(var)) continue;
      TermPtr t = gplp::apply(Term::variable(var), theta);
      auto lf = linearize(*t);
      if (!lf) return false;
      state.store = state.store.substitute(var, *lf);
      if (!state.store.satisfiable()) return false;
    }
    std::map<std::string, VarKind> updated;
    for (const auto& [var, kind] : state.types) {
      if (!theta.count(var)) {
        updated[var] = kind;
        continue;
      }
      TermPtr t = gplp::apply(Term::variable(var), theta);
      if (t->is_variable()) {
        updated[t->name()] = kind;  // checked below
      } else if (kind == VarKind::Continuous && !t->is_number()) {
        return false;
      }
    }
    for (const auto& [var, kind] : state.types) {
      if (!theta.count(var)) continue;
      TermPtr t = gplp::apply(Term::variable(var), theta);
      if (!t->is_variable()) continue;
      auto it = state.types.find(t->name());
      if (it != state.types.end() && it->second != kind)
        throw DerivationError("variable " + t->name() +
                              " is used as both continuous and discrete");
    }
    state.types = std::move(updated);
    for (const auto& v : options_.protected_vars) {
      auto it = theta.find(v);
      if (it == theta.end()) continue;
      TermPtr t = gplp::apply(it->second, theta);
      if (!t->is_ground() && !t->is_variable())
        throw DerivationError("query variable " + v +
                              " bound to non-ground term " + to_string(t));
    }
    return true;
  }

  void set_type(PathState& state, const std::string& var, VarKind kind) {
    auto [it, inserted] = state.types.emplace(var, kind);
    if (!inserted && it->second != kind)
      throw DerivationError("variable " + var +
                            " is used as both continuous and discrete");
  }

  static std::vector<BodyItem> substituted(const std::vector<BodyItem>& items,
                                           const Substitution& theta) {
    std::vector<BodyItem> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(gplp::apply(item, theta));
    return out;
  }

  bool descend(DerivationNode& node, std::vector<BodyItem> next,
               const PathState& state, const Substitution* theta) {
    auto child = run(std::move(next), state, node.depth + 1);
    if (!child) return false;
    node.children.push_back(std::move(*child));
    if (theta) node.bindings.push_back(*theta);
    return true;
  }

  bool step(DerivationNode& node, const CallItem& call,
            const std::vector<BodyItem>& rest, const PathState& state) {
    node.step = StepKind::PCR;
    const TermPtr& g = call.goal;
    std::string key = g->indicator();
    if (!program_.defines(key))
      throw DerivationError("unknown predicate " + key);
    int fresh = 0;
    for (const Clause* clause : program_.clauses_for(key)) {
      std::map<std::string, std::string> ren;
      std::vector<std::string> vars = variables_of(clause->head);
      for (const auto& item : clause->body) collect_variables(item, vars);
      for (const auto& v : vars)
        ren.emplace(v, "_G" + std::to_string(node.depth) + "_" +
                           std::to_string(++fresh));
      TermPtr head = rename(clause->head, ren);
      auto theta = unify(g, head);
      if (!theta) continue;
      PathState next_state = state;
      if (!bind(next_state, *theta)) continue;
      std::vector<BodyItem> next;
      for (const auto& item : clause->body)
        next.push_back(gplp::apply(rename(item, ren), *theta));
      for (const auto& item : rest) next.push_back(gplp::apply(item, *theta));
      if (descend(node, std::move(next), next_state, &*theta))
        node.clause_ids.push_back(clause->id);
    }
    return !node.children.empty();
  }

  bool step(DerivationNode& node, const MswItem& m,
            const std::vector<BodyItem>& rest, const PathState& state) {
    node.step = StepKind::MSW;
    node.msw = m;
    auto decls = program_.matching(m.switch_term);
    if (decls.empty())
      throw DerivationError("no switch declaration matches " +
                            to_string(m.switch_term));
    bool continuous = has_gaussian_decl(decls);
    node.continuous_outcome = continuous;
    PathState next = state;
    std::string instance =
        m.instance ? to_string(m.instance) : "@" + std::to_string(m.site);
    std::string id = to_string(m.switch_term) + "#" + instance;
    if (!next.used.insert(id).second) {
      std::string msg = "random variable instance " + id +
                        " is used more than once on one derivation path";
      auto& d = stats_.diagnostics;
      if (std::find(d.begin(), d.end(), msg) == d.end()) d.push_back(msg);
    }
    for (const auto& v : variables_of(m.switch_term))
      set_type(next, v, VarKind::Discrete);
    const TermPtr& y = m.outcome;
    if (y->is_variable()) {
      set_type(next, y->name(), continuous ? VarKind::Continuous
                                           : VarKind::Discrete);
    } else if (!y->is_ground()) {
      throw DerivationError("msw outcome must be a variable or ground: " +
                            to_string(y));
    } else {
      bool possible = false;
      for (const SwitchDecl* d : decls) {
        if (auto* g = std::get_if<Gaussian>(&d->dist)) {
          (void)g;
          possible = possible || y->is_number();
        } else if (value_in(*y, std::get<Discrete>(d->dist))) {
          possible = true;
        }
      }
      if (!possible) return false;
    }
    return descend(node, rest, next, nullptr);
  }

  bool step(DerivationNode& node, const ConstraintItem& c,
            const std::vector<BodyItem>& rest, const PathState& state) {
    const TermPtr& l = c.lhs;
    const TermPtr& r = c.rhs;
    auto discrete = [&](const TermPtr& t) {
      if (!t->is_variable()) return false;
      auto it = state.types.find(t->name());
      return it != state.types.end() && it->second == VarKind::Discrete;
    };
    bool arith = is_arith_expr(*l) && is_arith_expr(*r);
    bool simple = (l->is_variable() || !is_arith_expr(*l)) &&
                  (r->is_variable() || !is_arith_expr(*r));
    if ((!arith && simple) ||
        (l->is_variable() && r->is_variable() && (discrete(l) || discrete(r))))
      return step(node, UnifyItem{l, r}, rest, state);
    if (!arith)
      throw DerivationError("non-arithmetic operand in constraint " +
                            to_string(ConstraintItem{l, r}));
    auto lf = linearize(*l);
    auto rf = linearize(*r);
    if (!lf || !rf)
      throw DerivationError("constraint is not linear: " +
                            to_string(ConstraintItem{l, r}));
    LinearForm row = *lf - *rf;
    node.step = StepKind::CONS;
    PathState next = state;
    if (row.is_constant()) {
      if (std::abs(row.constant()) > kSatisfiabilityTolerance) return false;
    } else {
      for (const auto& v : row.variables())
        set_type(next, v, VarKind::Continuous);
      next.store.add(row);
      if (!next.store.satisfiable()) return false;
      node.constraint = row;
    }
    return descend(node, rest, next, nullptr);
  }

  bool step(DerivationNode& node, const ArithItem& a,
            const std::vector<BodyItem>& rest, const PathState& state) {
    node.step = StepKind::ARITH;
    auto v = eval_ground(*a.expr);
    if (!v)
      throw DerivationError("arithmetic on non-ground or invalid expression: " +
                            to_string(a.expr));
    bool integral = std::floor(*v) == *v && std::abs(*v) < 9.007199254740992e15;
    return bind_and_descend(node, a.target, Term::number(*v, integral), rest,
                            state);
  }

  bool step(DerivationNode& node, const CompareItem& c,
            const std::vector<BodyItem>& rest, const PathState& state) {
    node.step = StepKind::COMPARE;
    auto l = eval_ground(*c.lhs);
    auto r = eval_ground(*c.rhs);
    if (!l || !r)
      throw DerivationError("comparison on non-ground operands: " +
                            to_string(BodyItem{c}));
    bool holds = false;
    switch (c.op) {
      case CompareOp::Lt: holds = *l < *r; break;
      case CompareOp::Gt: holds = *l > *r; break;
      case CompareOp::Le: holds = *l <= *r; break;
      case CompareOp::Ge: holds = *l >= *r; break;
      case CompareOp::Eq: holds = *l == *r; break;
    }
    if (!holds) return false;
    return descend(node, rest, state, nullptr);
  }

  bool step(DerivationNode& node, const UnifyItem& u,
            const std::vector<BodyItem>& rest, const PathState& state) {
    node.step = StepKind::UNIFY;
    return bind_and_descend(node, u.lhs, u.rhs, rest, state);
  }

  bool bind_and_descend(DerivationNode& node, const TermPtr& a,
                        const TermPtr& b, const std::vector<BodyItem>& rest,
                        const PathState& state) {
    auto theta = unify(a, b);
    if (!theta) return false;
    PathState next = state;
    if (!bind(next, *theta)) return false;
    return descend(node, substituted(rest, *theta), next, &*theta);
  }

  // Derivation variables from the children, per step kind.
  void annotate(DerivationNode& node) {
    std::vector<std::string> vars = node.variables();
    std::set<std::string> in_goal(vars.begin(), vars.end());
    std::set<std::string> vc, vd;
    auto lift = [&](const DerivationNode& child, const Substitution& theta) {
      std::set<std::string> cvc(child.vc.begin(), child.vc.end());
      std::set<std::string> cvd(child.vd.begin(), child.vd.end());
      for (const auto& x : vars) {
        TermPtr t = gplp::apply(Term::variable(x), theta);
        if (!t->is_variable()) continue;
        if (cvc.count(t->name())) vc.insert(x);
        if (cvd.count(t->name())) vd.insert(x);
      }
    };
    switch (node.step) {
      case StepKind::Success:
        break;
      case StepKind::PCR:
      case StepKind::ARITH:
      case StepKind::UNIFY:
        for (std::size_t i = 0; i < node.children.size(); ++i)
          lift(node.children[i], node.bindings[i]);
        break;
      case StepKind::COMPARE:
        lift(node.children[0], {});
        break;
      case StepKind::MSW: {
        lift(node.children[0], {});
        for (const auto& v : variables_of(node.msw->switch_term)) vd.insert(v);
        const TermPtr& y = node.msw->outcome;
        if (y->is_variable())
          (node.continuous_outcome ? vc : vd).insert(y->name());
        break;
      }
      case StepKind::CONS:
        lift(node.children[0], {});
        if (node.constraint)
          for (const auto& v : node.constraint->variables()) vc.insert(v);
        break;
    }
    for (const auto& v : vc) {
      if (vd.count(v))
        throw DerivationError("variable " + v +
                              " is classified both continuous and discrete");
    }
    node.vc = sorted(std::move(vc));
    node.vd = sorted(std::move(vd));
  }

  const Program& program_;
  const DeriveOptions& options_;
  DeriveStats& stats_;
};

// Joins a delta X=value into every term, dropping those already pinned to a
// different value.
SuccessFunction add_delta(const SuccessFunction& psi, const std::string& x,
                          const DeltaValue& value) {
  return join(psi, SuccessFunction::delta(x, value));
}

// Expresses a child's success function in terms of the parent's goal
// variables, following the unifier from parent to child.
SuccessFunction lift(const SuccessFunction& child_psi,
                     const std::vector<std::string>& parent_vars,
                     const Substitution& theta) {
  SuccessFunction psi = child_psi;
  for (const auto& x : parent_vars) {
    TermPtr t = gplp::apply(Term::variable(x), theta);
    if (t->is_variable()) {
      if (t->name() == x) continue;
      const std::string& y = t->name();
      std::vector<ConstrainedTerm> terms;
      for (ConstrainedTerm term : psi.terms()) {
        auto it = term.ppdf.deltas.find(y);
        if (it != term.ppdf.deltas.end()) {
          auto [jt, inserted] = term.ppdf.deltas.emplace(x, it->second);
          if (!inserted && jt->second != it->second) continue;
        } else if (term.ppdf.mentions(y) || term.constraints.mentions(y)) {
          LinearForm row = LinearForm::variable(x) - LinearForm::variable(y);
          term.constraints.add(row);
        }
        terms.push_back(std::move(term));
      }
      psi = simplify(SuccessFunction(std::move(terms)));
    } else if (t->is_ground()) {
      psi = add_delta(psi, x, delta_value(*t));
    }
    // Non-ground structures carry no density over x; x stays free.
  }
  return psi;
}

std::vector<std::string> marginalization_order(
    const DerivationNode& child, const SuccessFunction& psi,
    const std::vector<std::string>& keep) {
  std::vector<std::string> order = child.variables();
  for (const auto& v : psi.variables())
    if (std::find(order.begin(), order.end(), v) == order.end())
      order.push_back(v);
  std::vector<std::string> drop;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (std::find(keep.begin(), keep.end(), *it) != keep.end()) continue;
    if (psi.mentions(*it)) drop.push_back(*it);
  }
  return drop;
}

}  // namespace

std::optional<DerivationNode> derive(const Program& program,
                                     const std::vector<BodyItem>& goal,
                                     const DeriveOptions& options,
                                     DeriveStats* stats) {
  DeriveStats local;
  DeriveStats& s = stats ? *stats : local;
  Deriver d(program, options, s);
  return d.run(goal, PathState{}, 0);
}

SuccessFunction msw_success_function(const Program& program,
                                     const MswItem& item) {
  SuccessFunction out;
  const TermPtr& y = item.outcome;
  std::vector<std::string> params = variables_of(item.switch_term);
  for (const SwitchDecl* d : program.matching(item.switch_term)) {
    std::map<std::string, std::string> ren;
    for (const auto& v : variables_of(d->pattern)) ren.emplace(v, "$p_" + v);
    Substitution sigma = *unify(item.switch_term, rename(d->pattern, ren));
    SuccessFunction part = SuccessFunction::one();
    for (const auto& p : params) {
      TermPtr t = gplp::apply(Term::variable(p), sigma);
      if (t->is_ground()) part = join(part, SuccessFunction::delta(p, delta_value(*t)));
    }
    SuccessFunction outcome;
    if (auto* g = std::get_if<Gaussian>(&d->dist)) {
      if (y->is_variable()) {
        outcome = SuccessFunction::gaussian(LinearForm::variable(y->name()),
                                            g->mean, g->variance);
      } else if (y->is_number()) {
        ConstrainedTerm c;
        c.ppdf.coeff = normal_pdf(y->number(), g->mean, g->variance);
        outcome = simplify(SuccessFunction({c}));
      }
    } else {
      const auto& dist = std::get<Discrete>(d->dist);
      std::vector<ConstrainedTerm> terms;
      for (std::size_t i = 0; i < dist.values.size(); ++i) {
        ConstrainedTerm c;
        c.ppdf.coeff = dist.probs[i];
        if (y->is_variable()) {
          c.ppdf.deltas.emplace(y->name(), delta_value(*dist.values[i]));
        } else {
          Discrete one{{dist.values[i]}, {1.0}};
          if (!value_in(*y, one)) continue;
        }
        terms.push_back(std::move(c));
      }
      outcome = simplify(SuccessFunction(std::move(terms)));
    }
    out += join(part, outcome);
  }
  return out;
}

SuccessFunction success_function(const Program& program,
                                 const DerivationNode& node, OpStats* stats,
                                 const NodeVisitor& visit) {
  SuccessFunction psi;
  switch (node.step) {
    case StepKind::Success:
      psi = SuccessFunction::one();
      break;
    case StepKind::MSW: {
      SuccessFunction child =
          success_function(program, node.children[0], stats, visit);
      psi = join(msw_success_function(program, *node.msw), child, stats);
      break;
    }
    case StepKind::CONS: {
      SuccessFunction child =
          success_function(program, node.children[0], stats, visit);
      psi = node.constraint
                ? join(SuccessFunction::constraint(*node.constraint), child, stats)
                : child;
      break;
    }
    case StepKind::COMPARE:
      psi = success_function(program, node.children[0], stats, visit);
      break;
    case StepKind::PCR:
    case StepKind::ARITH:
    case StepKind::UNIFY: {
      std::vector<std::string> vars = node.variables();
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        const DerivationNode& child = node.children[i];
        SuccessFunction cpsi = success_function(program, child, stats, visit);
        SuccessFunction lifted = lift(cpsi, vars, node.bindings[i]);
        auto drop = marginalization_order(child, lifted, vars);
        psi += marginalize(lifted, drop, stats);
      }
      break;
    }
  }
  if (visit) visit(node, psi);
  return psi;
}

}  // namespace gplp
