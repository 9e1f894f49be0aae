#include "gplp/front/term.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace gplp {

Term::Term(TermKind kind, std::string name, double number,
           std::vector<TermPtr> args)
    : kind_(kind), name_(std::move(name)), number_(number),
      args_(std::move(args)) {
  if (kind_ == TermKind::Variable) {
    ground_ = false;
  } else {
    ground_ = std::all_of(args_.begin(), args_.end(),
                          [](const TermPtr& a) { return a->is_ground(); });
  }
}

TermPtr Term::variable(std::string name) {
  return TermPtr(new Term(TermKind::Variable, std::move(name), 0.0, {}));
}

TermPtr Term::atom(std::string name) {
  return TermPtr(new Term(TermKind::Atom, std::move(name), 0.0, {}));
}

TermPtr Term::integer(double value) {
  return TermPtr(new Term(TermKind::Integer, {}, value, {}));
}

TermPtr Term::real(double value) {
  return TermPtr(new Term(TermKind::Real, {}, value, {}));
}

TermPtr Term::number(double value, bool integral) {
  return integral ? integer(value) : real(value);
}

TermPtr Term::compound(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) return atom(std::move(functor));
  return TermPtr(
      new Term(TermKind::Compound, std::move(functor), 0.0, std::move(args)));
}

std::string Term::indicator() const {
  return name_ + "/" + std::to_string(args_.size());
}

std::string format_number(double value, bool integral) {
  if (value == 0.0) value = 0.0;  // drop negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string text(buf, res.ptr);
  if (!integral && std::isfinite(value) &&
      text.find_first_of(".eE") == std::string::npos) {
    text += ".0";
  }
  return text;
}

namespace {

bool plain_atom(const std::string& name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0])))
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string quote_atom(const std::string& name) {
  if (plain_atom(name)) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

bool is_infix(const Term& t) {
  static const char* ops[] = {"+", "-", "*", "/", "=", "is", "<", ">",
                              "=<", ">=", "=:="};
  if (t.kind() != TermKind::Compound || t.arity() != 2) return false;
  return std::any_of(std::begin(ops), std::end(ops),
                     [&](const char* op) { return t.name() == op; });
}

int precedence(const Term& t) {
  if (t.kind() == TermKind::Compound) {
    if (t.arity() == 2) {
      if (t.name() == "+" || t.name() == "-") return 500;
      if (t.name() == "*" || t.name() == "/") return 400;
      if (is_infix(t)) return 700;
    }
    if (t.arity() == 1 && t.name() == "-") return 200;
  }
  if (t.is_number() && t.number() < 0) return 200;
  return 0;
}

void write(std::ostream& os, const Term& t, int max_prec);

void write_operand(std::ostream& os, const Term& t, int max_prec) {
  if (precedence(t) > max_prec) {
    os << '(';
    write(os, t, 1200);
    os << ')';
  } else {
    write(os, t, max_prec);
  }
}

void write(std::ostream& os, const Term& t, int /*max_prec*/) {
  switch (t.kind()) {
    case TermKind::Variable:
      os << t.name();
      return;
    case TermKind::Atom:
      os << quote_atom(t.name());
      return;
    case TermKind::Integer:
    case TermKind::Real:
      os << format_number(t.number(), t.kind() == TermKind::Integer);
      return;
    case TermKind::Compound:
      break;
  }
  if (t.name() == "$list") {
    os << '[';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) os << ", ";
      write(os, *t.args()[i], 999);
    }
    os << ']';
    return;
  }
  if (is_infix(t)) {
    int p = precedence(t);
    // yfx for arithmetic, xfx for comparisons
    write_operand(os, *t.args()[0], p == 700 ? p - 1 : p);
    os << ' ' << t.name() << ' ';
    write_operand(os, *t.args()[1], p - 1);
    return;
  }
  if (t.arity() == 1 && t.name() == "-") {
    os << '-';
    write_operand(os, *t.args()[0], 199);
    return;
  }
  os << quote_atom(t.name()) << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ", ";
    write(os, *t.args()[i], 999);
  }
  os << ')';
}

}  // namespace

std::string to_string(const Term& term) {
  std::ostringstream os;
  write(os, term, 1200);
  return os.str();
}

bool structurally_equal(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Variable:
    case TermKind::Atom:
      return a.name() == b.name();
    case TermKind::Integer:
    case TermKind::Real:
      return a.number() == b.number();
    case TermKind::Compound:
      if (a.name() != b.name() || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (!structurally_equal(*a.args()[i], *b.args()[i])) return false;
      return true;
  }
  return false;
}

void collect_variables(const Term& term, std::vector<std::string>& out) {
  if (term.is_ground()) return;
  if (term.is_variable()) {
    if (std::find(out.begin(), out.end(), term.name()) == out.end())
      out.push_back(term.name());
    return;
  }
  for (const auto& a : term.args()) collect_variables(*a, out);
}

std::vector<std::string> variables_of(const TermPtr& term) {
  std::vector<std::string> out;
  collect_variables(*term, out);
  return out;
}

bool occurs_in(const std::string& var, const Term& term) {
  if (term.is_ground()) return false;
  if (term.is_variable()) return term.name() == var;
  return std::any_of(term.args().begin(), term.args().end(),
                     [&](const TermPtr& a) { return occurs_in(var, *a); });
}

TermPtr apply(const TermPtr& term, const Substitution& subst) {
  if (term->is_ground() || subst.empty()) return term;
  if (term->is_variable()) {
    auto it = subst.find(term->name());
    if (it == subst.end()) return term;
    return apply(it->second, subst);
  }
  std::vector<TermPtr> args;
  args.reserve(term->arity());
  bool changed = false;
  for (const auto& a : term->args()) {
    args.push_back(apply(a, subst));
    changed = changed || args.back() != a;
  }
  if (!changed) return term;
  return Term::compound(term->name(), std::move(args));
}

TermPtr rename(const TermPtr& term,
               const std::map<std::string, std::string>& renaming) {
  if (term->is_ground()) return term;
  if (term->is_variable()) {
    auto it = renaming.find(term->name());
    return it == renaming.end() ? term : Term::variable(it->second);
  }
  std::vector<TermPtr> args;
  args.reserve(term->arity());
  for (const auto& a : term->args()) args.push_back(rename(a, renaming));
  return Term::compound(term->name(), std::move(args));
}

std::string to_string(const Substitution& subst) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, value] : subst) {
    if (!first) out += ", ";
    first = false;
    out += var + "/" + to_string(*value);
  }
  return out + "}";
}

}  // namespace gplp
