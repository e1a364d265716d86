// Decision procedures: truth in a term-denoted order, the class of finite
// orders, countable orders, and countable ordinals.

#ifndef MSO_DECIDE_HPP
#define MSO_DECIDE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "mso/syntax.hpp"
#include "mso/terms.hpp"
#include "mso/theory.hpp"

namespace mso {

struct DecideOptions {
  /// Evaluate with this many full set rounds and project down; must be at
  /// least the quantifier depth.
  std::optional<int> depth_override;
};

struct DecideReport {
  bool verdict = false;
  int depth = 0;           // quantifier depth of the normalized sentence
  int internal_depth = 0;  // rounds of the evaluated theory
  std::size_t theory_size = 0;
  Signature signature;
};

/// Sentences may not mention predicate constants.  Throws DomainError on a
/// non-sentence, ResourceError past the element budget.
DecideReport decide(const Formula& f, const OrderTerm& t, const DecideOptions& opts = {});

struct FiniteClassReport {
  bool valid = false;        // true in every nonempty finite order
  bool satisfiable = false;  // true in some nonempty finite order
  bool holds_in_empty = false;
  std::optional<unsigned> witness;      // least satisfying size
  std::optional<unsigned> counterexample;  // least falsifying size
  unsigned fixed_point = 0;  // q with T_q = T_{q+1}: theories of sizes 1..q
  std::optional<std::uint64_t> bound;  // |formally_possible| at the sentence's depth
};

FiniteClassReport decide_finite_class(const Formula& f);

struct SatReport {
  bool satisfiable = false;
  TermPtr witness;  // when satisfiable
  std::size_t closure_size = 0;
};

/// Satisfiability in some countable order (the empty order included).
SatReport decide_countable_sat(const Formula& f);

/// Satisfiability in some countable ordinal (the empty order included).
SatReport decide_countable_ordinal_sat(const Formula& f);

/// Least (l, p), 1 <= l < p, with eval_term(omega^l) = eval_term(omega^p)
/// at `sig`.
std::pair<unsigned, unsigned> ordinal_stabilize(Signature sig);

/// 2 * |formally_possible(n rounds, no predicates)| + 1, or nullopt on
/// overflow.
std::optional<std::uint64_t> stabilization_bound(int rounds);

}  // namespace mso

#endif  // MSO_DECIDE_HPP
