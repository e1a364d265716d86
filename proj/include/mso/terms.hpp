// Terms for countable orders built from 0 and 1 by sums, omega and omega*
// multiples, and dense shuffles.
//
// Grammar:
//   term    := summand ("+" summand)*
//   summand := atom ("*" ("omega" | "omegaStar"))*
//   atom    := "0" | "1" | digits | "omega" | "omegaStar" | "zeta" | "eta"
//            | "omega^" digits | "shuffle(" term ("," term)* ")" | "(" term ")"
// Numerals, omega, omegaStar, zeta, eta and omega^q are sugar for their
// expansions; printing folds the expansions back.

#ifndef MSO_TERMS_HPP
#define MSO_TERMS_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mso/theory.hpp"
#include "mso/theory_core.hpp"

namespace mso {

enum class TermKind { Zero, One, Sum, OmegaTimes, OmegaStarTimes, Shuffle };

struct OrderTerm;
using TermPtr = std::shared_ptr<const OrderTerm>;

struct OrderTerm {
  TermKind kind = TermKind::Zero;
  std::vector<TermPtr> args;  // Sum: 2; OmegaTimes/OmegaStarTimes: 1; Shuffle: >= 1, sorted, distinct

  static TermPtr zero();
  static TermPtr one();
  static TermPtr sum(TermPtr a, TermPtr b);
  static TermPtr omega_times(TermPtr a);
  static TermPtr omega_star_times(TermPtr a);
  static TermPtr shuffle(std::vector<TermPtr> kinds);
  static TermPtr numeral(unsigned n);
  static TermPtr omega_pow(unsigned q);
  static TermPtr zeta();
  static TermPtr eta();
};

bool operator==(const OrderTerm& a, const OrderTerm& b);

/// Throws SyntaxError.
TermPtr parse_term(std::string_view text);
std::string to_string(const OrderTerm& t);

bool is_finite(const OrderTerm& t);

/// The unlabeled finite order a finite term denotes; DomainError otherwise.
LabeledFiniteOrder expand_finite(const OrderTerm& t);

/// The theory of the order t denotes (with no predicates beyond those of
/// `sig`, all empty).  Memoized per (term, signature).
Theory eval_term(const OrderTerm& t, Signature sig);

}  // namespace mso

#endif  // MSO_TERMS_HPP
