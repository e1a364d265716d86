// Theories of explicit finite orders, formal possibilities, projection to
// fewer rounds, and reading sentence truth off a theory.

#ifndef MSO_THEORY_CORE_HPP
#define MSO_THEORY_CORE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mso/syntax.hpp"
#include "mso/theory.hpp"

namespace mso {

/// A finite order given as its sequence of letters.
struct LabeledFiniteOrder {
  int predicates = 0;
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool operator==(const LabeledFiniteOrder&) const = default;
};

/// Parses a word such as "a.b.ab" or "0 1 3": letters separated by '.' or
/// whitespace, each either a decimal bitmask or a run of lowercase letters
/// (a = P1, b = P2, ...).  "-" or "" is a letter with no predicates.
LabeledFiniteOrder parse_word(std::string_view text, int predicates);
std::string to_string(const LabeledFiniteOrder& w);

/// The theory of w by direct enumeration of all extensions.
Theory eval_finite(const LabeledFiniteOrder& w, Signature sig);

/// Every syntactically consistent theory of signature `sig` (full atom
/// schema, no point rounds).  Throws ResourceError when the count exceeds
/// the element budget.
std::vector<Theory> formally_possible(Signature sig);

/// |formally_possible(sig)|, or nullopt when it does not fit in 63 bits.
std::optional<std::uint64_t> formally_possible_count(Signature sig);

/// Removes predicate `index` (0-based, counted over all base predicates);
/// later predicates move down by one.  Point rounds above `index` keep their
/// kind.
Theory forget_predicate(const Theory& t, int index);

/// The theory the same model has with `rounds` rounds.
Theory project(const Theory& t, int rounds);

/// Signature that decides `f` with the fewest recorded facts: the rounds are
/// the quantifier depth, the base records only the atoms f reads, and rounds
/// whose quantifiers all came from element quantifiers are point rounds.
/// With `full` set, the full schema and set rounds are used instead.
Signature signature_for(const NormalFormula& f, int predicates, bool full = false);

/// Truth of f in any model of t.  Needs quantifier_depth(f) <= rounds,
/// predicate_count(f) <= predicates, the atoms f reads in the schema, and no
/// set quantifier on a point round; throws DomainError otherwise.
bool satisfies(const Theory& t, const NormalFormula& f);

}  // namespace mso

#endif  // MSO_THEORY_CORE_HPP
