// MSO formulas over a linear order with unary predicates.
//
// Concrete syntax (ASCII):
//   E x. phi    A X. phi    ~phi    phi & psi    phi | psi    phi -> psi
//   x < y    x = y    x in X    X <= Y
// Lowercase identifiers are element variables, uppercase ones are set
// variables, and P1, P2, ... are free predicate constants.  Precedence is
// ~ over & over | over ->; & and | associate to the left, -> to the right;
// a quantifier's scope extends as far right as possible.

#ifndef MSO_SYNTAX_HPP
#define MSO_SYNTAX_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mso {

enum class VarKind { Element, Set };

enum class FormulaOp { Exists, Forall, Not, And, Or, Implies, Less, Equal, In, Subset };

/// A variable or predicate reference.  Predicate constants have
/// `predicate` >= 0 (P1 is 0) and an empty name.
struct VarRef {
  std::string name;
  int predicate = -1;

  bool is_predicate() const { return predicate >= 0; }
  bool operator==(const VarRef&) const = default;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaOp op = FormulaOp::Less;
  VarKind kind = VarKind::Element;  // bound variable kind, quantifiers only
  std::string var;                  // bound variable, quantifiers only
  VarRef left;                      // atoms only
  VarRef right;
  std::vector<FormulaPtr> children;

  static FormulaPtr quantifier(FormulaOp op, VarKind kind, std::string var, FormulaPtr body);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr binary(FormulaOp op, FormulaPtr l, FormulaPtr r);
  static FormulaPtr atom(FormulaOp op, VarRef l, VarRef r);

  bool is_quantifier() const { return op == FormulaOp::Exists || op == FormulaOp::Forall; }
  bool is_atom() const { return op >= FormulaOp::Less; }
};

bool operator==(const Formula& a, const Formula& b);

/// Parses a formula.  Throws SyntaxError, KindError or UnboundVariableError.
FormulaPtr parse_formula(std::string_view text);

/// Text that parses back to an equal formula.
std::string to_string(const Formula& f);
std::ostream& operator<<(std::ostream& os, const Formula& f);

int quantifier_depth(const Formula& f);

/// Number of predicate constants the formula refers to (largest index + 1).
int predicate_count(const Formula& f);

/// Reference in a normal formula: a predicate constant, or the variable
/// bound by the quantifier at nesting level `level` (0 = outermost).
struct NormalRef {
  int predicate = -1;
  int level = -1;
  std::string name;

  bool operator==(const NormalRef&) const = default;
};

enum class NormalOp { Exists, Forall, Not, And, Or, Implies, SetLess, Subset, Nonempty, Singleton };

struct NormalFormula;
using NormalPtr = std::shared_ptr<const NormalFormula>;

/// Set-quantifier-only form.  SetLess(X, Y) means some element of X
/// precedes some element of Y.  Quantifiers that came from element
/// quantifiers are marked `from_element`; their bodies are guarded by
/// Singleton.
struct NormalFormula {
  NormalOp op = NormalOp::Nonempty;
  bool from_element = false;
  std::string var;
  NormalRef left;
  NormalRef right;
  std::vector<NormalPtr> children;

  bool is_quantifier() const { return op == NormalOp::Exists || op == NormalOp::Forall; }
  bool is_atom() const { return op >= NormalOp::SetLess; }
};

bool operator==(const NormalFormula& a, const NormalFormula& b);

/// Throws DomainError on free variables other than predicate constants.
NormalPtr normalize(const Formula& f);

std::string to_string(const NormalFormula& f);
std::ostream& operator<<(std::ostream& os, const NormalFormula& f);

int quantifier_depth(const NormalFormula& f);
int predicate_count(const NormalFormula& f);

}  // namespace mso

#endif  // MSO_SYNTAX_HPP
