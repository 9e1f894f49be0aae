// Concrete (non-symbolic) execution of programs: every switch gets an actual
// value. Used by the enumeration and sampling oracles. Deliberately shares
// no code with the symbolic engine beyond the parsed program.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "gplp/errors.hpp"
#include "gplp/oracle/enumerate.hpp"
#include "gplp/oracle/sampling.hpp"

namespace gplp {

namespace {

using Env = std::map<std::string, TermPtr>;

TermPtr walk(TermPtr t, const Env& env) {
  while (t->is_variable()) {
    auto it = env.find(t->name());
    if (it == env.end()) break;
    t = it->second;
  }
  return t;
}

TermPtr resolve(const TermPtr& t, const Env& env) {
  TermPtr w = walk(t, env);
  if (!w->is_compound()) return w;
  std::vector<TermPtr> args;
  for (const auto& a : w->args()) args.push_back(resolve(a, env));
  return Term::compound(w->name(), std::move(args));
}

bool contains_var(const std::string& v, const TermPtr& t, const Env& env) {
  TermPtr w = walk(t, env);
  if (w->is_variable()) return w->name() == v;
  for (const auto& a : w->args())
    if (contains_var(v, a, env)) return true;
  return false;
}

double gauss(double d, double var) {
  return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

struct Soft {
  double width = 0.0;  // 0 = exact matching
  double* weight = nullptr;
};

bool unify_terms(const TermPtr& a, const TermPtr& b, Env& env, const Soft& soft) {
  TermPtr x = walk(a, env), y = walk(b, env);
  if (x->is_variable() && y->is_variable() && x->name() == y->name()) return true;
  if (x->is_variable()) {
    if (contains_var(x->name(), y, env)) return false;
    env[x->name()] = y;
    return true;
  }
  if (y->is_variable()) {
    if (contains_var(y->name(), x, env)) return false;
    env[y->name()] = x;
    return true;
  }
  if (x->is_number() && y->is_number()) {
    if (x->number() == y->number()) return true;
    if (soft.width > 0.0 && x->kind() == TermKind::Real &&
        y->kind() == TermKind::Real) {
      *soft.weight *= gauss(x->number() - y->number(), soft.width * soft.width);
      return true;
    }
    return false;
  }
  if (x->kind() != y->kind() || x->name() != y->name() ||
      x->arity() != y->arity())
    return false;
  for (std::size_t i = 0; i < x->arity(); ++i)
    if (!unify_terms(x->args()[i], y->args()[i], env, soft)) return false;
  return true;
}

// Value of an arithmetic expression with all variables bound.
std::optional<double> value_of(const TermPtr& t, const Env& env) {
  TermPtr w = walk(t, env);
  if (w->is_number()) return w->number();
  if (!w->is_compound()) return std::nullopt;
  const auto& f = w->name();
  if (w->arity() == 1 && f == "-") {
    auto x = value_of(w->args()[0], env);
    if (!x) return std::nullopt;
    return -*x;
  }
  if (w->arity() != 2) return std::nullopt;
  auto x = value_of(w->args()[0], env);
  auto y = value_of(w->args()[1], env);
  if (!x || !y) return std::nullopt;
  if (f == "+") return *x + *y;
  if (f == "-") return *x - *y;
  if (f == "*") return *x * *y;
  if (f == "/") return *x / *y;
  return std::nullopt;
}

// `expr` as c0 + c1 * U for a single unbound variable U (or none).
struct Affine {
  double c0 = 0.0;
  double c1 = 0.0;
  std::string var;
  bool ok = true;
};

Affine affine(const TermPtr& t, const Env& env) {
  TermPtr w = walk(t, env);
  Affine r;
  if (w->is_number()) {
    r.c0 = w->number();
    return r;
  }
  if (w->is_variable()) {
    r.c1 = 1.0;
    r.var = w->name();
    return r;
  }
  const auto& f = w->name();
  auto combine = [](Affine a, Affine b, double sign) {
    Affine out;
    if (!a.ok || !b.ok || (!a.var.empty() && !b.var.empty() && a.var != b.var)) {
      out.ok = false;
      return out;
    }
    out.var = a.var.empty() ? b.var : a.var;
    out.c0 = a.c0 + sign * b.c0;
    out.c1 = a.c1 + sign * b.c1;
    return out;
  };
  if (w->arity() == 1 && f == "-") {
    Affine a = affine(w->args()[0], env);
    a.c0 = -a.c0;
    a.c1 = -a.c1;
    return a;
  }
  if (w->arity() == 2) {
    Affine a = affine(w->args()[0], env), b = affine(w->args()[1], env);
    if (f == "+") return combine(a, b, 1.0);
    if (f == "-") return combine(a, b, -1.0);
    if (f == "*" && (a.var.empty() || b.var.empty()) && a.ok && b.ok) {
      const Affine& k = a.var.empty() ? a : b;
      Affine v = a.var.empty() ? b : a;
      v.c0 *= k.c0;
      v.c1 *= k.c0;
      return v;
    }
    if (f == "/" && b.var.empty() && a.ok && b.ok && b.c0 != 0.0) {
      a.c0 /= b.c0;
      a.c1 /= b.c0;
      return a;
    }
  }
  r.ok = false;
  return r;
}

enum class Mode { Enumerate, Sample };

class Interpreter {
 public:
  using Done = std::function<bool(const Env&, double)>;  // true = stop

  Interpreter(const Program& program, Mode mode) : program_(program), mode_(mode) {}

  std::size_t budget = 1000000;
  std::size_t steps = 0;
  double observation_width = 0.0;
  std::mt19937_64* rng = nullptr;

  // Returns true when the callback asked to stop.
  bool solve(std::vector<BodyItem> goals, Env env, double weight,
             std::map<std::string, TermPtr>& world, int depth,
             const Done& done) {
    if (++steps > budget)
      throw OracleError("oracle budget of " + std::to_string(budget) +
                        " steps exceeded");
    if (depth > 10000) throw OracleError("oracle recursion too deep");
    if (goals.empty()) return done(env, weight);
    BodyItem first = goals.front();
    goals.erase(goals.begin());

    if (auto* c = std::get_if<CallItem>(&first)) {
      TermPtr g = walk(c->goal, env);
      auto key = g->indicator();
      if (!program_.defines(key)) throw OracleError("unknown predicate " + key);
      for (const Clause* cl : program_.clauses_for(key)) {
        std::map<std::string, std::string> ren;
        std::vector<std::string> vars = variables_of(cl->head);
        for (const auto& item : cl->body) collect_variables(item, vars);
        ++fresh_;
        for (const auto& v : vars)
          ren.emplace(v, "$" + std::to_string(fresh_) + "_" + v);
        Env e = env;
        double w = weight;
        if (!unify_terms(g, rename(cl->head, ren), e, {observation_width, &w}))
          continue;
        std::vector<BodyItem> next;
        for (const auto& item : cl->body) next.push_back(rename(item, ren));
        next.insert(next.end(), goals.begin(), goals.end());
        if (solve(std::move(next), std::move(e), w, world, depth + 1, done))
          return true;
      }
      return false;
    }
    if (auto* m = std::get_if<MswItem>(&first)) return msw(*m, goals, env, weight, world, depth, done);
    if (auto* c = std::get_if<ConstraintItem>(&first)) {
      Affine l = affine(c->lhs, env), r = affine(c->rhs, env);
      TermPtr lw = walk(c->lhs, env), rw = walk(c->rhs, env);
      bool numeric = l.ok && r.ok &&
                     (l.var.empty() || r.var.empty() || l.var == r.var);
      if (!numeric) {
        // Symbolic values on one side: plain unification.
        if (!unify_terms(lw, rw, env, {})) return false;
        return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
      }
      double c0 = l.c0 - r.c0, c1 = l.c1 - r.c1;
      std::string var = l.var.empty() ? r.var : l.var;
      if (var.empty() || c1 == 0.0) {
        if (std::abs(c0) > 1e-9 * std::max(1.0, std::abs(l.c0))) return false;
      } else {
        env[var] = Term::real(-c0 / c1);
      }
      return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
    }
    if (auto* a = std::get_if<ArithItem>(&first)) {
      auto v = value_of(a->expr, env);
      if (!v) throw OracleError("non-ground arithmetic: " + to_string(resolve(a->expr, env)));
      bool integral = std::floor(*v) == *v;
      if (!unify_terms(a->target, Term::number(*v, integral), env, {})) return false;
      return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
    }
    if (auto* c = std::get_if<CompareItem>(&first)) {
      auto l = value_of(c->lhs, env), r = value_of(c->rhs, env);
      if (!l || !r) throw OracleError("non-ground comparison");
      bool ok = false;
      switch (c->op) {
        case CompareOp::Lt: ok = *l < *r; break;
        case CompareOp::Gt: ok = *l > *r; break;
        case CompareOp::Le: ok = *l <= *r; break;
        case CompareOp::Ge: ok = *l >= *r; break;
        case CompareOp::Eq: ok = *l == *r; break;
      }
      if (!ok) return false;
      return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
    }
    const auto& u = std::get<UnifyItem>(first);
    Soft soft{observation_width, &weight};
    if (!unify_terms(u.lhs, u.rhs, env, soft)) return false;
    return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
  }

 private:
  bool msw(const MswItem& m, std::vector<BodyItem>& goals, Env& env,
           double weight, std::map<std::string, TermPtr>& world, int depth,
           const Done& done) {
    TermPtr sw = resolve(m.switch_term, env);
    if (!sw->is_ground())
      throw OracleError("switch " + to_string(sw) + " is not ground when called");
    std::string key = to_string(sw) + "#" +
                      (m.instance ? to_string(resolve(m.instance, env))
                                  : "@" + std::to_string(m.site));
    auto decls = program_.matching(sw);
    if (decls.empty()) throw OracleError("undeclared switch " + to_string(sw));
    const Distribution& dist = decls.front()->dist;
    Soft soft{observation_width, &weight};

    auto known = world.find(key);
    if (known != world.end()) {
      if (!unify_terms(m.outcome, known->second, env, soft)) return false;
      return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
    }

    if (auto* g = std::get_if<Gaussian>(&dist)) {
      if (mode_ == Mode::Enumerate)
        throw OracleError("enumeration cannot expand continuous switch " +
                          to_string(sw));
      TermPtr out = walk(m.outcome, env);
      TermPtr value;
      if (out->is_number()) {
        weight *= gauss(out->number() - g->mean, g->variance);
        value = out;
      } else {
        std::normal_distribution<double> nd(g->mean, std::sqrt(g->variance));
        value = Term::real(nd(*rng));
      }
      world[key] = value;
      if (!unify_terms(m.outcome, value, env, {})) return false;
      return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
    }

    const auto& d = std::get<Discrete>(dist);
    if (mode_ == Mode::Sample) {
      std::uniform_real_distribution<double> ud(0.0, 1.0);
      double u = ud(*rng), acc = 0.0;
      std::size_t pick = d.values.size() - 1;
      for (std::size_t i = 0; i < d.values.size(); ++i) {
        acc += d.probs[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      world[key] = d.values[pick];
      if (!unify_terms(m.outcome, d.values[pick], env, {})) return false;
      return solve(std::move(goals), std::move(env), weight, world, depth + 1, done);
    }
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      if (d.probs[i] == 0.0) continue;
      Env e = env;
      if (!unify_terms(m.outcome, d.values[i], e, {})) continue;
      auto w = world;
      w[key] = d.values[i];
      if (solve(goals, std::move(e), weight * d.probs[i], w, depth + 1, done))
        return true;
    }
    return false;
  }

  const Program& program_;
  Mode mode_;
  long fresh_ = 0;
};

DeltaValue ground_value(const TermPtr& t) {
  if (t->is_number()) return t->number();
  return to_string(t);
}

}  // namespace

std::vector<EnumeratedAnswer> enumerate_discrete(const Program& program,
                                                 const Query& query,
                                                 std::size_t budget) {
  for (const auto& s : program.switches())
    if (std::holds_alternative<Gaussian>(s.dist))
      throw OracleError("enumeration needs a program without continuous switches");
  Interpreter in(program, Mode::Enumerate);
  in.budget = budget;
  std::map<std::string, TermPtr> world;
  std::map<Assignment, double> acc;
  in.solve(query.items, {}, 1.0, world, 0, [&](const Env& env, double w) {
    Assignment a;
    for (const auto& v : query.variables) {
      TermPtr t = resolve(Term::variable(v), env);
      if (!t->is_ground())
        throw OracleError("answer leaves " + v + " unbound");
      a.emplace(v, ground_value(t));
    }
    acc[a] += w;
    return false;
  });
  std::vector<EnumeratedAnswer> out;
  for (auto& [a, p] : acc) out.push_back({a, p});
  return out;
}

std::vector<SampleEstimate> mc_density(const Program& program,
                                       const Query& query,
                                       const std::string& var,
                                       const std::vector<double>& grid,
                                       const SamplingOptions& options) {
  if (options.n <= 0) throw OracleError("sample count must be positive");
  if (!(options.bandwidth > 0.0)) throw OracleError("bandwidth must be positive");
  std::mt19937_64 rng(options.seed);
  Interpreter in(program, Mode::Sample);
  in.rng = &rng;
  in.observation_width = options.observation_width;
  in.budget = static_cast<std::size_t>(-1);
  const std::size_t g = grid.size();
  std::vector<double> sum(g, 0.0), sum2(g, 0.0), cross(g, 0.0);
  double wsum = 0.0, w2sum = 0.0;
  long accepted = 0;
  const double h2 = options.bandwidth * options.bandwidth;
  for (long s = 0; s < options.n; ++s) {
    std::map<std::string, TermPtr> world;
    double weight = 0.0, x = 0.0;
    in.steps = 0;
    in.solve(query.items, {}, 1.0, world, 0, [&](const Env& env, double w) {
      TermPtr t = resolve(Term::variable(var), env);
      if (!t->is_number())
        throw OracleError("sampled answer for " + var + " is not a number");
      weight = w;
      x = t->number();
      return true;
    });
    if (weight > 0.0) ++accepted;
    wsum += weight;
    w2sum += weight * weight;
    for (std::size_t i = 0; i < g; ++i) {
      double k = weight > 0.0 ? weight * gauss(grid[i] - x, h2) : 0.0;
      sum[i] += k;
      sum2[i] += k * k;
      cross[i] += k * weight;
    }
  }
  if (accepted == 0) throw OracleError("no sample reached a successful derivation");
  const double n = static_cast<double>(options.n);
  std::vector<SampleEstimate> out(g);
  double mw = wsum / n;
  for (std::size_t i = 0; i < g; ++i) {
    double mk = sum[i] / n;
    double vk = std::max(0.0, sum2[i] / n - mk * mk);
    if (!options.normalized) {
      out[i] = {mk, std::sqrt(vk / n), options.n};
      continue;
    }
    // Ratio estimator with a delta-method standard error.
    double r = mk / mw;
    double vw = std::max(0.0, w2sum / n - mw * mw);
    double cov = cross[i] / n - mk * mw;
    double var_r = (vk - 2.0 * r * cov + r * r * vw) / (mw * mw);
    out[i] = {r, std::sqrt(std::max(0.0, var_r) / n), options.n};
  }
  return out;
}

}  // namespace gplp
