#include "helpers.hpp"

#include "mso/algebra.hpp"

namespace testing {

mso::Theory fold_letters(const mso::LabeledFiniteOrder& w, mso::Signature sig) {
  mso::Theory acc = mso::empty_theory(sig);
  for (auto l : w.letters) acc = mso::compose_sum(acc, mso::point_theory(sig, l));
  return acc;
}

mso::FormulaPtr mirror(const mso::Formula& f) {
  using mso::Formula;
  using mso::FormulaOp;
  switch (f.op) {
    case FormulaOp::Exists:
    case FormulaOp::Forall: return Formula::quantifier(f.op, f.kind, f.var, mirror(*f.children[0]));
    case FormulaOp::Not: return Formula::negation(mirror(*f.children[0]));
    case FormulaOp::And:
    case FormulaOp::Or:
    case FormulaOp::Implies: return Formula::binary(f.op, mirror(*f.children[0]), mirror(*f.children[1]));
    case FormulaOp::Less: return Formula::atom(f.op, f.right, f.left);
    default: return Formula::atom(f.op, f.left, f.right);
  }
}

}  // namespace testing
