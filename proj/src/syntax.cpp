#include "mso/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <utility>

#include "mso/errors.hpp"

namespace mso {

FormulaPtr Formula::quantifier(FormulaOp op, VarKind kind, std::string var, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->kind = kind;
  f->var = std::move(var);
  f->children.push_back(std::move(body));
  return f;
}

FormulaPtr Formula::negation(FormulaPtr g) {
  auto f = std::make_shared<Formula>();
  f->op = FormulaOp::Not;
  f->children.push_back(std::move(g));
  return f;
}

FormulaPtr Formula::binary(FormulaOp op, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->children.push_back(std::move(l));
  f->children.push_back(std::move(r));
  return f;
}

FormulaPtr Formula::atom(FormulaOp op, VarRef l, VarRef r) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.op != b.op || a.left != b.left || a.right != b.right) return false;
  if (a.is_quantifier() && (a.kind != b.kind || a.var != b.var)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(*a.children[i] == *b.children[i])) return false;
  return true;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Dot, LParen, RParen, Not, And, Or, Arrow, Less, Eq, SubsetEq, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int l = line;
    const int k = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (s.substr(i, 2) == "->") {
      out.push_back({Tok::Arrow, "->", l, k});
      advance(2);
      continue;
    }
    if (s.substr(i, 2) == "<=") {
      out.push_back({Tok::SubsetEq, "<=", l, k});
      advance(2);
      continue;
    }
    Tok t;
    switch (c) {
      case '.': t = Tok::Dot; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '~': t = Tok::Not; break;
      case '&': t = Tok::And; break;
      case '|': t = Tok::Or; break;
      case '<': t = Tok::Less; break;
      case '=': t = Tok::Eq; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", l, k);
    }
    out.push_back({t, std::string(1, c), l, k});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

bool is_predicate_name(const std::string& s) {
  return s.size() >= 2 && s[0] == 'P' &&
         std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_keyword(const std::string& s) { return s == "E" || s == "A" || s == "in"; }

VarKind lexical_kind(const std::string& s) {
  return std::isupper(static_cast<unsigned char>(s[0])) ? VarKind::Set : VarKind::Element;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  FormulaPtr run() {
    FormulaPtr f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SyntaxError(t.kind == Tok::End ? msg + " at end of input" : msg, t.line, t.column);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  FormulaPtr implication() {
    FormulaPtr l = disjunction();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Formula::binary(FormulaOp::Implies, l, implication());
    }
    return l;
  }

  FormulaPtr disjunction() {
    FormulaPtr l = conjunction();
    while (peek().kind == Tok::Or) {
      ++pos_;
      l = Formula::binary(FormulaOp::Or, l, conjunction());
    }
    return l;
  }

  FormulaPtr conjunction() {
    FormulaPtr l = unary();
    while (peek().kind == Tok::And) {
      ++pos_;
      l = Formula::binary(FormulaOp::And, l, unary());
    }
    return l;
  }

  FormulaPtr unary() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      ++pos_;
      return Formula::negation(unary());
    }
    if (t.kind == Tok::Ident && (t.text == "E" || t.text == "A")) return quantified();
    if (t.kind == Tok::LParen) {
      ++pos_;
      FormulaPtr f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  FormulaPtr quantified() {
    const FormulaOp op = next().text == "E" ? FormulaOp::Exists : FormulaOp::Forall;
    const Token& v = peek();
    if (v.kind != Tok::Ident || is_keyword(v.text)) fail("expected a variable after quantifier");
    if (is_predicate_name(v.text)) fail("predicate constant " + v.text + " cannot be bound");
    ++pos_;
    expect(Tok::Dot, "'.'");
    const VarKind kind = lexical_kind(v.text);
    scope_.push_back(v.text);
    FormulaPtr body = implication();
    scope_.pop_back();
    return Formula::quantifier(op, kind, v.text, body);
  }

  // Resolves an identifier used at a position that wants `want`.
  VarRef reference(const Token& t, VarKind want) {
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a variable");
    if (is_predicate_name(t.text)) {
      if (want != VarKind::Set) throw KindError("predicate " + t.text + " used as an element");
      const int index = std::stoi(t.text.substr(1));
      if (index < 1) throw SyntaxError("predicate constants start at P1", t.line, t.column);
      return {"", index - 1};
    }
    if (lexical_kind(t.text) != want) {
      throw KindError((want == VarKind::Set ? "element variable " : "set variable ") + t.text +
                      " used as " + (want == VarKind::Set ? "a set" : "an element") + " at " +
                      std::to_string(t.line) + ":" + std::to_string(t.column));
    }
    if (std::find(scope_.rbegin(), scope_.rend(), t.text) == scope_.rend())
      throw UnboundVariableError("unbound variable " + t.text + " at " + std::to_string(t.line) + ":" +
                                 std::to_string(t.column));
    return {t.text, -1};
  }

  FormulaPtr atom() {
    const Token l = peek();
    if (l.kind != Tok::Ident || is_keyword(l.text)) fail("expected a formula");
    ++pos_;
    const Token op = next();
    const Token r = peek();
    if (r.kind != Tok::Ident) {
      if (op.kind == Tok::Less || op.kind == Tok::Eq || op.kind == Tok::SubsetEq ||
          (op.kind == Tok::Ident && op.text == "in"))
        fail("expected a variable");
    }
    switch (op.kind) {
      case Tok::Less:
      case Tok::Eq: {
        VarRef a = reference(l, VarKind::Element);
        ++pos_;
        VarRef b = reference(r, VarKind::Element);
        return Formula::atom(op.kind == Tok::Less ? FormulaOp::Less : FormulaOp::Equal, a, b);
      }
      case Tok::SubsetEq: {
        VarRef a = reference(l, VarKind::Set);
        ++pos_;
        VarRef b = reference(r, VarKind::Set);
        return Formula::atom(FormulaOp::Subset, a, b);
      }
      case Tok::Ident:
        if (op.text == "in") {
          VarRef a = reference(l, VarKind::Element);
          ++pos_;
          VarRef b = reference(r, VarKind::Set);
          return Formula::atom(FormulaOp::In, a, b);
        }
        break;
      default:
        break;
    }
    --pos_;
    fail("expected '<', '=', '<=' or 'in'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

// ---------------------------------------------------------------------------
// Printing

int precedence(FormulaOp op) {
  switch (op) {
    case FormulaOp::Exists:
    case FormulaOp::Forall: return 0;
    case FormulaOp::Implies: return 1;
    case FormulaOp::Or: return 2;
    case FormulaOp::And: return 3;
    case FormulaOp::Not: return 4;
    default: return 5;
  }
}

std::string ref_text(const VarRef& r) {
  return r.is_predicate() ? "P" + std::to_string(r.predicate + 1) : r.name;
}

void print(std::ostream& os, const Formula& f, int min_prec) {
  const int p = precedence(f.op);
  const bool wrap = p < min_prec;
  if (wrap) os << '(';
  switch (f.op) {
    case FormulaOp::Exists:
    case FormulaOp::Forall:
      os << (f.op == FormulaOp::Exists ? "E " : "A ") << f.var << ". ";
      print(os, *f.children[0], 0);
      break;
    case FormulaOp::Not:
      os << '~';
      print(os, *f.children[0], 4);
      break;
    case FormulaOp::And:
      print(os, *f.children[0], 3);
      os << " & ";
      print(os, *f.children[1], 4);
      break;
    case FormulaOp::Or:
      print(os, *f.children[0], 2);
      os << " | ";
      print(os, *f.children[1], 3);
      break;
    case FormulaOp::Implies:
      print(os, *f.children[0], 2);
      os << " -> ";
      print(os, *f.children[1], 1);
      break;
    case FormulaOp::Less: os << ref_text(f.left) << " < " << ref_text(f.right); break;
    case FormulaOp::Equal: os << ref_text(f.left) << " = " << ref_text(f.right); break;
    case FormulaOp::In: os << ref_text(f.left) << " in " << ref_text(f.right); break;
    case FormulaOp::Subset: os << ref_text(f.left) << " <= " << ref_text(f.right); break;
  }
  if (wrap) os << ')';
}

int precedence(NormalOp op) {
  switch (op) {
    case NormalOp::Exists:
    case NormalOp::Forall: return 0;
    case NormalOp::Implies: return 1;
    case NormalOp::Or: return 2;
    case NormalOp::And: return 3;
    case NormalOp::Not: return 4;
    default: return 5;
  }
}

void print(std::ostream& os, const NormalFormula& f, int min_prec) {
  const int p = precedence(f.op);
  const bool wrap = p < min_prec;
  if (wrap) os << '(';
  const auto bin = [&](const char* sym, int l, int r) {
    print(os, *f.children[0], l);
    os << sym;
    print(os, *f.children[1], r);
  };
  switch (f.op) {
    case NormalOp::Exists:
    case NormalOp::Forall:
      os << (f.op == NormalOp::Exists ? "E " : "A ") << (f.from_element ? "{" + f.var + "}" : f.var) << ". ";
      print(os, *f.children[0], 0);
      break;
    case NormalOp::Not:
      os << '~';
      print(os, *f.children[0], 4);
      break;
    case NormalOp::And: bin(" & ", 3, 4); break;
    case NormalOp::Or: bin(" | ", 2, 3); break;
    case NormalOp::Implies: bin(" -> ", 2, 1); break;
    case NormalOp::SetLess: os << "less(" << f.left.name << ',' << f.right.name << ')'; break;
    case NormalOp::Subset: os << "subset(" << f.left.name << ',' << f.right.name << ')'; break;
    case NormalOp::Nonempty: os << "nonempty(" << f.left.name << ')'; break;
    case NormalOp::Singleton: os << "singleton(" << f.left.name << ')'; break;
  }
  if (wrap) os << ')';
}

// ---------------------------------------------------------------------------
// Normalization

NormalPtr make_normal(NormalOp op, std::vector<NormalPtr> children = {}) {
  auto n = std::make_shared<NormalFormula>();
  n->op = op;
  n->children = std::move(children);
  return n;
}

NormalPtr make_atom(NormalOp op, NormalRef l, NormalRef r = {}) {
  auto n = std::make_shared<NormalFormula>();
  n->op = op;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

class Normalizer {
 public:
  NormalPtr run(const Formula& f) {
    switch (f.op) {
      case FormulaOp::Exists:
      case FormulaOp::Forall: {
        const int level = static_cast<int>(scope_.size());
        scope_.push_back(f.var);
        NormalPtr body = run(*f.children[0]);
        scope_.pop_back();
        auto q = std::make_shared<NormalFormula>();
        q->op = f.op == FormulaOp::Exists ? NormalOp::Exists : NormalOp::Forall;
        q->var = f.var;
        if (f.kind == VarKind::Element) {
          q->from_element = true;
          NormalPtr guard = make_atom(NormalOp::Singleton, NormalRef{-1, level, f.var});
          body = make_normal(f.op == FormulaOp::Exists ? NormalOp::And : NormalOp::Implies, {guard, body});
        }
        q->children.push_back(body);
        return q;
      }
      case FormulaOp::Not: return make_normal(NormalOp::Not, {run(*f.children[0])});
      case FormulaOp::And: return make_normal(NormalOp::And, {run(*f.children[0]), run(*f.children[1])});
      case FormulaOp::Or: return make_normal(NormalOp::Or, {run(*f.children[0]), run(*f.children[1])});
      case FormulaOp::Implies:
        return make_normal(NormalOp::Implies, {run(*f.children[0]), run(*f.children[1])});
      case FormulaOp::Less: return make_atom(NormalOp::SetLess, ref(f.left), ref(f.right));
      case FormulaOp::Equal:
      case FormulaOp::In:
      case FormulaOp::Subset: return make_atom(NormalOp::Subset, ref(f.left), ref(f.right));
    }
    throw DomainError("normalize: unknown node");
  }

 private:
  NormalRef ref(const VarRef& v) const {
    if (v.is_predicate()) return {v.predicate, -1, "P" + std::to_string(v.predicate + 1)};
    for (std::size_t i = scope_.size(); i-- > 0;)
      if (scope_[i] == v.name) return {-1, static_cast<int>(i), v.name};
    throw DomainError("normalize: free variable " + v.name + " (only predicate constants may be free)");
  }

  std::vector<std::string> scope_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  print(os, f, 0);
  return os;
}

int quantifier_depth(const Formula& f) {
  int d = 0;
  for (const auto& c : f.children) d = std::max(d, quantifier_depth(*c));
  return d + (f.is_quantifier() ? 1 : 0);
}

int predicate_count(const Formula& f) {
  int m = std::max(f.left.predicate, f.right.predicate) + 1;
  for (const auto& c : f.children) m = std::max(m, predicate_count(*c));
  return m;
}

bool operator==(const NormalFormula& a, const NormalFormula& b) {
  if (a.op != b.op || a.left != b.left || a.right != b.right) return false;
  if (a.is_quantifier() && (a.from_element != b.from_element || a.var != b.var)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(*a.children[i] == *b.children[i])) return false;
  return true;
}

NormalPtr normalize(const Formula& f) { return Normalizer().run(f); }

std::string to_string(const NormalFormula& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const NormalFormula& f) {
  print(os, f, 0);
  return os;
}

int quantifier_depth(const NormalFormula& f) {
  int d = 0;
  for (const auto& c : f.children) d = std::max(d, quantifier_depth(*c));
  return d + (f.is_quantifier() ? 1 : 0);
}

int predicate_count(const NormalFormula& f) {
  int m = std::max(f.left.predicate, f.right.predicate) + 1;
  for (const auto& c : f.children) m = std::max(m, predicate_count(*c));
  return m;
}

}  // namespace mso
