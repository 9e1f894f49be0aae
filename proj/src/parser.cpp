#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>

#include "gplp/errors.hpp"
#include "gplp/front/arith.hpp"
#include "gplp/front/program.hpp"

namespace gplp {

namespace {

enum class Tok { Var, Name, QuotedName, Number, Punct, End, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  double number = 0.0;
  bool integral = false;
  bool layout_before = false;
  int line = 1;
  int column = 1;
};

const char* kSymbolOps[] = {":-", "?-", "=:=", "=<", ">=", "=", "<", ">",
                            "+",  "-",   "*",  "/"};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    bool layout = skip_layout();
    Token t;
    t.layout_before = layout;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Var;
      t.text = take_word();
      return t;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Tok::Name;
      t.text = take_word();
      return t;
    }
    if (c == '\'') return lex_quoted(t);
    if (c == '.') {
      char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : ' ';
      if (std::isspace(static_cast<unsigned char>(n)) || n == '%') {
        advance(1);
        t.kind = Tok::End;
        t.text = ".";
        return t;
      }
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '|') {
      advance(1);
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      return t;
    }
    for (const char* op : kSymbolOps) {
      std::string s(op);
      if (src_.compare(pos_, s.size(), s) == 0) {
        advance(s.size());
        t.kind = Tok::Name;
        t.text = s;
        return t;
      }
    }
    throw ParseError(t.line, t.column,
                     std::string("unexpected character '") + c + "'");
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  bool skip_layout() {
    bool any = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        any = true;
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        any = true;
      } else {
        break;
      }
    }
    return any;
  }

  std::string take_word() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      advance(1);
    return src_.substr(start, pos_ - start);
  }

  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  Token lex_number(Token t) {
    std::size_t start = pos_;
    bool integral = true;
    while (digit_at(pos_)) advance(1);
    if (pos_ < src_.size() && src_[pos_] == '.' && digit_at(pos_ + 1)) {
      integral = false;
      advance(1);
      while (digit_at(pos_)) advance(1);
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (digit_at(k)) {
        integral = false;
        advance(k - pos_);
        while (digit_at(pos_)) advance(1);
      }
    }
    std::string text = src_.substr(start, pos_ - start);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc())
      throw ParseError(t.line, t.column, "bad number '" + text + "'");
    t.kind = Tok::Number;
    t.text = text;
    t.number = v;
    t.integral = integral;
    return t;
  }

  Token lex_quoted(Token t) {
    advance(1);
    std::string out;
    while (true) {
      if (pos_ >= src_.size())
        throw ParseError(t.line, t.column, "unterminated quoted atom");
      char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        out += src_[pos_ + 1];
        advance(2);
        continue;
      }
      if (c == '\'') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\'') {
          out += '\'';
          advance(2);
          continue;
        }
        advance(1);
        break;
      }
      out += c;
      advance(1);
    }
    t.kind = Tok::QuotedName;
    t.text = out;
    return t;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct InfixOp {
  int prec;
  int left_max;
  int right_max;
};

std::optional<InfixOp> infix(const Token& t) {
  if (t.kind != Tok::Name) return std::nullopt;
  const auto& s = t.text;
  if (s == "=" || s == "is" || s == "<" || s == ">" || s == "=<" ||
      s == ">=" || s == "=:=")
    return InfixOp{700, 699, 699};
  if (s == "+" || s == "-") return InfixOp{500, 500, 499};
  if (s == "*" || s == "/") return InfixOp{400, 400, 399};
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& src, std::string anon_prefix)
      : lex_(src), anon_prefix_(std::move(anon_prefix)) {
    cur_ = lex_.next();
  }

  bool at_eof() const { return cur_.kind == Tok::Eof; }

  Program program() {
    Program prog;
    while (!at_eof()) {
      if (is_name(":-")) {
        Token start = cur_;
        advance();
        std::vector<TermPtr> items = conjunction();
        expect_end();
        for (const auto& d : items) directive(prog, d, start);
        continue;
      }
      Token start = cur_;
      TermPtr head = term(999);
      if (head->is_variable() || head->is_number())
        throw ParseError(start.line, start.column,
                         "clause head must be an atom or compound term");
      if (is_directive(*head) && !is_name(":-")) {
        expect_end();
        directive(prog, head, start);
        continue;
      }
      const auto& f = head->name();
      if (f == "msw" || f == "values" || f == "set_sw")
        throw ParseError(start.line, start.column,
                         "cannot define built-in predicate " + head->indicator());
      Clause clause;
      clause.head = head;
      if (is_name(":-")) {
        advance();
        for (const auto& g : conjunction()) add_goal(clause.body, g, start);
      }
      expect_end();
      prog.add_clause(std::move(clause));
    }
    prog.validate();
    return prog;
  }

  Query query() {
    Query q;
    if (is_name("?-")) advance();
    Token start = cur_;
    for (const auto& g : conjunction()) add_goal(q.items, g, start);
    expect_end();
    if (!at_eof())
      throw ParseError(cur_.line, cur_.column, "text after end of query");
    for (const auto& item : q.items) {
      std::vector<std::string> vars;
      collect_variables(item, vars);
      for (const auto& v : vars) {
        if (v[0] == '_') continue;
        if (std::find(q.variables.begin(), q.variables.end(), v) ==
            q.variables.end())
          q.variables.push_back(v);
      }
    }
    return q;
  }

 private:
  static bool is_directive(const Term& t) {
    return (t.name() == "values" || t.name() == "set_sw") && t.arity() == 2;
  }

  bool is_name(const char* s) const {
    return cur_.kind == Tok::Name && cur_.text == s;
  }
  bool is_punct(char c) const {
    return cur_.kind == Tok::Punct && cur_.text[0] == c;
  }

  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string what = cur_.kind == Tok::Eof ? "end of input" : "'" + cur_.text + "'";
    throw ParseError(cur_.line, cur_.column, msg + ", found " + what);
  }

  void expect_punct(char c) {
    if (!is_punct(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  void expect_end() {
    if (cur_.kind != Tok::End) fail("expected '.'");
    advance();
  }

  std::vector<TermPtr> conjunction() {
    std::vector<TermPtr> goals{term(999)};
    while (is_punct(',')) {
      advance();
      goals.push_back(term(999));
    }
    return goals;
  }

  TermPtr term(int max_prec) {
    int left_prec = 0;
    TermPtr left = primary(max_prec, left_prec);
    while (true) {
      auto op = infix(cur_);
      if (!op || op->prec > max_prec || left_prec > op->left_max) break;
      std::string name = cur_.text;
      advance();
      TermPtr right = term(op->right_max);
      left = Term::compound(name, {left, right});
      left_prec = op->prec;
    }
    return left;
  }

  TermPtr primary(int max_prec, int& prec) {
    prec = 0;
    Token t = cur_;
    switch (t.kind) {
      case Tok::Number:
        advance();
        return Term::number(t.number, t.integral);
      case Tok::Var:
        advance();
        if (t.text == "_")
          return Term::variable(anon_prefix_ + std::to_string(++anon_));
        return Term::variable(t.text);
      case Tok::Name:
      case Tok::QuotedName: {
        advance();
        if (t.kind == Tok::Name && t.text == "-" && !is_punct('(')) {
          if (cur_.kind == Tok::Number && !cur_.layout_before) {
            Token n = cur_;
            advance();
            prec = 200;
            return Term::number(-n.number, n.integral);
          }
          if (max_prec < 200) fail("operand expected");
          prec = 200;
          return Term::compound("-", {term(200)});
        }
        if (is_punct('(') && !cur_.layout_before) {
          advance();
          std::vector<TermPtr> args{term(999)};
          while (is_punct(',')) {
            advance();
            args.push_back(term(999));
          }
          expect_punct(')');
          return Term::compound(t.text, std::move(args));
        }
        if (t.kind == Tok::Name && infix(t))
          throw ParseError(t.line, t.column, "operator '" + t.text +
                                                 "' used as an operand");
        return Term::atom(t.text);
      }
      case Tok::Punct:
        if (t.text == "(") {
          advance();
          TermPtr inner = term(1200);
          expect_punct(')');
          return inner;
        }
        if (t.text == "[") {
          advance();
          if (is_punct(']')) {
            advance();
            return Term::atom("[]");
          }
          std::vector<TermPtr> items{term(999)};
          while (is_punct(',')) {
            advance();
            items.push_back(term(999));
          }
          if (is_punct('|')) fail("list tails are not supported");
          expect_punct(']');
          return Term::compound("$list", std::move(items));
        }
        break;
      default:
        break;
    }
    fail("expected a term");
  }

  void add_goal(std::vector<BodyItem>& body, const TermPtr& g,
                const Token& where) {
    auto err = [&](const std::string& msg) {
      throw ParseError(where.line, where.column, msg);
    };
    if (g->is_variable() || g->is_number())
      err("goal must be an atom or compound term: " + to_string(g));
    if (g->is_atom() && g->name() == "true") return;
    const auto& f = g->name();
    const auto& a = g->args();
    if (f == "msw" && (g->arity() == 2 || g->arity() == 3)) {
      MswItem m;
      m.switch_term = a[0];
      m.instance = g->arity() == 3 ? a[1] : nullptr;
      m.outcome = a.back();
      m.site = ++msw_sites_;
      body.push_back(m);
      return;
    }
    if (f == "values" || f == "set_sw")
      err(g->indicator() + " is only allowed as a directive");
    if (g->arity() == 2) {
      if (f == "is") {
        body.push_back(ArithItem{a[0], a[1]});
        return;
      }
      static const std::pair<const char*, CompareOp> cmp[] = {
          {"<", CompareOp::Lt}, {">", CompareOp::Gt}, {"=<", CompareOp::Le},
          {">=", CompareOp::Ge}, {"=:=", CompareOp::Eq}};
      for (const auto& [sym, op] : cmp) {
        if (f == sym) {
          body.push_back(CompareItem{op, a[0], a[1]});
          return;
        }
      }
      if (f == "=") {
        if (is_arith_expr(*a[0]) && is_arith_expr(*a[1]))
          body.push_back(ConstraintItem{a[0], a[1]});
        else
          body.push_back(UnifyItem{a[0], a[1]});
        return;
      }
    }
    body.push_back(CallItem{g});
  }

  static double numeric(const TermPtr& t, const Token& where) {
    auto v = eval_ground(*t);
    if (!v)
      throw ParseError(where.line, where.column,
                       "expected a number, got " + to_string(t));
    return *v;
  }

  void directive(Program& prog, const TermPtr& d, const Token& where) {
    if (!is_directive(*d))
      throw ParseError(where.line, where.column,
                       "unknown directive " + to_string(d));
    const auto& pattern = d->args()[0];
    const auto& spec = d->args()[1];
    if (pattern->is_variable() || pattern->is_number())
      throw ParseError(where.line, where.column,
                       "switch name must be an atom or compound term");
    if (d->name() == "values") {
      ValuesDecl v;
      v.pattern = pattern;
      if (spec->is_atom() && spec->name() == "real") {
        v.real = true;
      } else if (spec->is_compound() && spec->name() == "$list") {
        for (const auto& x : spec->args()) {
          if (!x->is_ground())
            throw ParseError(where.line, where.column,
                             "switch values must be ground: " + to_string(x));
          v.values.push_back(x);
        }
      } else {
        throw ParseError(where.line, where.column,
                         "values/2 expects 'real' or a list, got " +
                             to_string(spec));
      }
      prog.add_values(std::move(v));
      return;
    }
    SetSwDecl s;
    s.pattern = pattern;
    if (spec->is_compound() && spec->name() == "norm" && spec->arity() == 2) {
      s.gaussian = true;
      s.params.mean = numeric(spec->args()[0], where);
      s.params.variance = numeric(spec->args()[1], where);
    } else if (spec->is_compound() && spec->name() == "$list") {
      for (const auto& x : spec->args()) s.probs.push_back(numeric(x, where));
    } else {
      throw ParseError(where.line, where.column,
                       "set_sw/2 expects norm(Mean, Var) or a list, got " +
                           to_string(spec));
    }
    prog.add_set_sw(std::move(s));
  }

  Lexer lex_;
  Token cur_;
  std::string anon_prefix_;
  int anon_ = 0;
  int msw_sites_ = 0;
};

}  // namespace

Program parse_program(const std::string& source) {
  return Parser(source, "_").program();
}

Query parse_query(const std::string& source) {
  return Parser(source, "_Q").query();
}

}  // namespace gplp
