#include "gplp/front/program.hpp"

#include <cmath>
#include <sstream>

#include "gplp/algebra/linear_form.hpp"
#include "gplp/errors.hpp"
#include "gplp/front/unify.hpp"

namespace gplp {

const char* compare_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "=<";
    case CompareOp::Ge: return ">=";
    case CompareOp::Eq: return "=:=";
  }
  return "?";
}

namespace {

TermPtr binary(const char* op, const TermPtr& a, const TermPtr& b) {
  return Term::compound(op, {a, b});
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

template <class F>
BodyItem map_terms(const BodyItem& item, F f) {
  return std::visit(
      overloaded{
          [&](const CallItem& c) -> BodyItem { return CallItem{f(c.goal)}; },
          [&](const MswItem& m) -> BodyItem {
            return MswItem{f(m.switch_term),
                           m.instance ? f(m.instance) : nullptr, f(m.outcome),
                           m.site};
          },
          [&](const ConstraintItem& c) -> BodyItem {
            return ConstraintItem{f(c.lhs), f(c.rhs)};
          },
          [&](const ArithItem& a) -> BodyItem {
            return ArithItem{f(a.target), f(a.expr)};
          },
          [&](const CompareItem& c) -> BodyItem {
            return CompareItem{c.op, f(c.lhs), f(c.rhs)};
          },
          [&](const UnifyItem& u) -> BodyItem {
            return UnifyItem{f(u.lhs), f(u.rhs)};
          },
      },
      item);
}

// Variables renamed to _1, _2, ... in order of first occurrence, so two
// patterns that are variants of each other print identically.
std::string variant_key(const TermPtr& t) {
  std::map<std::string, std::string> ren;
  for (const auto& v : variables_of(t))
    ren.emplace(v, "_" + std::to_string(ren.size() + 1));
  return to_string(rename(t, ren));
}

// Unifiability with the variables of `b` renamed apart from those of `a`.
bool unifiable_apart(const TermPtr& a, const TermPtr& b) {
  std::map<std::string, std::string> ren;
  for (const auto& v : variables_of(b)) ren.emplace(v, "$p_" + v);
  return unify(a, rename(b, ren)).has_value();
}

bool same_terms(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

TermPtr item_term(const BodyItem& item) {
  return std::visit(
      overloaded{
          [](const CallItem& c) { return c.goal; },
          [](const MswItem& m) {
            if (m.instance)
              return Term::compound("msw", {m.switch_term, m.instance, m.outcome});
            return Term::compound("msw", {m.switch_term, m.outcome});
          },
          [](const ConstraintItem& c) { return binary("=", c.lhs, c.rhs); },
          [](const ArithItem& a) { return binary("is", a.target, a.expr); },
          [](const CompareItem& c) {
            return binary(compare_symbol(c.op), c.lhs, c.rhs);
          },
          [](const UnifyItem& u) { return binary("=", u.lhs, u.rhs); },
      },
      item);
}

std::string to_string(const BodyItem& item) { return to_string(item_term(item)); }

BodyItem apply(const BodyItem& item, const Substitution& subst) {
  return map_terms(item, [&](const TermPtr& t) { return gplp::apply(t, subst); });
}

BodyItem rename(const BodyItem& item,
                const std::map<std::string, std::string>& renaming) {
  return map_terms(item, [&](const TermPtr& t) { return rename(t, renaming); });
}

void collect_variables(const BodyItem& item, std::vector<std::string>& out) {
  collect_variables(*item_term(item), out);
}

bool structurally_equal(const BodyItem& a, const BodyItem& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<MswItem>(&a)) {
    const auto& y = std::get<MswItem>(b);
    if (x->site != y.site || !x->instance != !y.instance) return false;
  }
  if (auto* x = std::get_if<CompareItem>(&a))
    if (x->op != std::get<CompareItem>(b).op) return false;
  return structurally_equal(item_term(a), item_term(b));
}

std::vector<const Clause*> Program::clauses_for(
    const std::string& indicator) const {
  std::vector<const Clause*> out;
  auto it = index_.find(indicator);
  if (it == index_.end()) return out;
  for (auto i : it->second) out.push_back(&clauses_[i]);
  return out;
}

std::vector<const Clause*> Program::facts() const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses_)
    if (c.body.empty() && c.head->is_ground()) out.push_back(&c);
  return out;
}

std::vector<const SwitchDecl*> Program::matching(
    const TermPtr& switch_term) const {
  std::vector<const SwitchDecl*> out;
  for (const auto& d : switches_) {
    if (unifiable_apart(switch_term, d.pattern)) out.push_back(&d);
  }
  return out;
}

void Program::add_clause(Clause clause) {
  clause.id = static_cast<int>(clauses_.size());
  index_[clause.head->indicator()].push_back(clauses_.size());
  clauses_.push_back(std::move(clause));
}

void Program::validate() {
  switches_.clear();
  std::map<std::string, const SetSwDecl*> seen;
  for (const auto& s : set_sw_) {
    std::string key = variant_key(s.pattern);
    if (!seen.emplace(key, &s).second)
      throw ValidationError("duplicate set_sw for switch " + key);
    const ValuesDecl* values = nullptr;
    for (const auto& v : values_)
      if (unifiable_apart(s.pattern, v.pattern)) {
        values = &v;
        break;
      }
    if (!values)
      throw ValidationError("set_sw for switch " + to_string(s.pattern) +
                            " without a values declaration");
    if (s.gaussian) {
      if (!values->real)
        throw ValidationError("norm given for discrete switch " +
                              to_string(s.pattern));
      if (!(s.params.variance > 0.0) || !std::isfinite(s.params.variance))
        throw ValidationError("variance of switch " + to_string(s.pattern) +
                              " must be positive, got " +
                              format_number(s.params.variance, false));
      if (!std::isfinite(s.params.mean))
        throw ValidationError("mean of switch " + to_string(s.pattern) +
                              " must be finite");
      switches_.push_back({s.pattern, Gaussian{s.params}, false});
      continue;
    }
    if (values->real)
      throw ValidationError("probability list given for continuous switch " +
                            to_string(s.pattern));
    if (s.probs.size() != values->values.size())
      throw ValidationError(
          "switch " + to_string(s.pattern) + " has " +
          std::to_string(values->values.size()) + " values but " +
          std::to_string(s.probs.size()) + " probabilities");
    double sum = 0.0;
    for (double p : s.probs) {
      if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("probability " + format_number(p, false) +
                              " of switch " + to_string(s.pattern) +
                              " is outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("probabilities of switch " + to_string(s.pattern) +
                            " sum to " + format_real(sum));
    switches_.push_back({s.pattern, Discrete{values->values, s.probs}, false});
  }
  for (const auto& v : values_) {
    bool covered = false;
    for (const auto& s : set_sw_)
      if (unifiable_apart(v.pattern, s.pattern)) covered = true;
    if (covered) continue;
    if (v.real)
      throw ValidationError("continuous switch " + to_string(v.pattern) +
                            " has no set_sw distribution");
    if (v.values.empty())
      throw ValidationError("switch " + to_string(v.pattern) + " has no values");
    std::vector<double> probs(v.values.size(), 1.0 / v.values.size());
    switches_.push_back({v.pattern, Discrete{v.values, probs}, true});
  }
  for (const auto& c : clauses_) {
    for (const auto& item : c.body) {
      auto* m = std::get_if<MswItem>(&item);
      if (!m) continue;
      if (matching(m->switch_term).empty())
        throw ValidationError("msw on undeclared switch " +
                              to_string(m->switch_term) + " in clause for " +
                              c.head->indicator());
    }
  }
}

std::string print_program(const Program& program) {
  std::ostringstream os;
  for (const auto& v : program.values_decls()) {
    os << "values(" << to_string(v.pattern) << ", ";
    if (v.real) {
      os << "real";
    } else {
      os << to_string(Term::compound("$list", v.values));
    }
    os << ").\n";
  }
  for (const auto& s : program.set_sw_decls()) {
    os << ":- set_sw(" << to_string(s.pattern) << ", ";
    if (s.gaussian) {
      os << "norm(" << format_number(s.params.mean, false) << ", "
         << format_number(s.params.variance, false) << ")";
    } else {
      os << '[';
      for (std::size_t i = 0; i < s.probs.size(); ++i)
        os << (i ? ", " : "") << format_number(s.probs[i], false);
      os << ']';
    }
    os << ").\n";
  }
  for (const auto& c : program.clauses()) {
    os << to_string(c.head);
    for (std::size_t i = 0; i < c.body.size(); ++i)
      os << (i ? ", " : " :- ") << to_string(c.body[i]);
    os << ".\n";
  }
  return os.str();
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.clauses().size() != b.clauses().size()) return false;
  for (std::size_t i = 0; i < a.clauses().size(); ++i) {
    const auto& x = a.clauses()[i];
    const auto& y = b.clauses()[i];
    if (!structurally_equal(x.head, y.head) || x.body.size() != y.body.size())
      return false;
    for (std::size_t k = 0; k < x.body.size(); ++k)
      if (!structurally_equal(x.body[k], y.body[k])) return false;
  }
  if (a.values_decls().size() != b.values_decls().size()) return false;
  for (std::size_t i = 0; i < a.values_decls().size(); ++i) {
    const auto& x = a.values_decls()[i];
    const auto& y = b.values_decls()[i];
    if (!structurally_equal(x.pattern, y.pattern) || x.real != y.real ||
        !same_terms(x.values, y.values))
      return false;
  }
  if (a.set_sw_decls().size() != b.set_sw_decls().size()) return false;
  for (std::size_t i = 0; i < a.set_sw_decls().size(); ++i) {
    const auto& x = a.set_sw_decls()[i];
    const auto& y = b.set_sw_decls()[i];
    if (!structurally_equal(x.pattern, y.pattern) || x.gaussian != y.gaussian ||
        x.probs != y.probs || x.params.mean != y.params.mean ||
        x.params.variance != y.params.variance)
      return false;
  }
  return true;
}

}  // namespace gplp
