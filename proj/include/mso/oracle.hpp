// Brute-force model checking on explicit finite orders, and a deterministic
// sentence generator for differential tests.

#ifndef MSO_ORACLE_HPP
#define MSO_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "mso/syntax.hpp"
#include "mso/theory_core.hpp"

namespace mso {

struct OracleCaps {
  int max_size = 6;                  // |w|
  int max_depth = 2;                 // quantifier depth
  int max_depth_times_size = 12;     // depth * |w|
};

/// Direct evaluation: set quantifiers range over all subsets of positions,
/// element quantifiers over positions.  Throws ResourceError past the caps.
bool brute_check(const Formula& f, const LabeledFiniteOrder& w, const OracleCaps& caps = {});
bool brute_check(const NormalFormula& f, const LabeledFiniteOrder& w, const OracleCaps& caps = {});

/// `count` sentences of quantifier depth 1..depth over the predicate
/// constants P1..P`predicates`.  The list depends only on the arguments.
std::vector<FormulaPtr> enumerate_sentences(int depth, int count, std::uint64_t seed, int predicates = 1);

}  // namespace mso

#endif  // MSO_ORACLE_HPP
