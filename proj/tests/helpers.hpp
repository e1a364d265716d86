// Shared fixtures for the unit tests and the acceptance runner.

#ifndef MSO_TEST_HELPERS_HPP
#define MSO_TEST_HELPERS_HPP

#include <string>
#include <vector>

#include "mso/syntax.hpp"
#include "mso/theory.hpp"
#include "mso/theory_core.hpp"

namespace testing {

inline mso::Signature full(int rounds, int predicates) { return {rounds, predicates, mso::kFullSchema, 0}; }

/// Every word over `predicates` predicates with length in [min_len, max_len].
inline std::vector<mso::LabeledFiniteOrder> all_words(int predicates, int max_len, int min_len = 0) {
  std::vector<mso::LabeledFiniteOrder> out;
  std::vector<mso::LabeledFiniteOrder> level{{predicates, {}}};
  const mso::Letter letters = mso::Letter{1} << predicates;
  for (int len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), level.begin(), level.end());
    std::vector<mso::LabeledFiniteOrder> next;
    for (const auto& w : level)
      for (mso::Letter l = 0; l < letters; ++l) {
        auto v = w;
        v.letters.push_back(l);
        next.push_back(std::move(v));
      }
    level = std::move(next);
  }
  return out;
}

/// Fold of compose_sum over single letters, the reference for eval_finite.
mso::Theory fold_letters(const mso::LabeledFiniteOrder& w, mso::Signature sig);

/// f with every x < y turned into y < x: true in w iff f is true in w reversed.
mso::FormulaPtr mirror(const mso::Formula& f);

/// Sentences about orders with forced truth values.
namespace sentences {
inline const std::string least = "E x. A y. ~(y < x)";
inline const std::string last = "E x. A y. ~(x < y)";
inline const std::string nonempty = "E x. x = x";
inline const std::string two_points = "E x. E y. x < y";
inline const std::string density = "A x. A y. (x < y -> E z. (x < z & z < y))";
inline const std::string no_endpoints = "(A x. E y. y < x) & (A x. E y. x < y)";
inline const std::string every_set_has_least =
    "A X. (E x. x in X) -> E y. (y in X & A z. (z in X -> ~(z < y)))";
inline const std::string every_set_has_last =
    "A X. (E x. x in X) -> E y. (y in X & A z. (z in X -> ~(y < z)))";
inline const std::string successors = "A x. E y. (x < y & ~E w. (x < w & w < y))";
inline const std::string predecessors = "A x. E y. (y < x & ~E w. (y < w & w < x))";
/// x has no immediate predecessor (x is free).
inline std::string no_pred(const std::string& x) {
  return "~(E z. (z < " + x + " & ~E w. (z < w & w < " + x + ")))";
}
inline const std::string two_without_pred =
    "E x. E y. (x < y & " + no_pred("x") + " & " + no_pred("y") + ")";
}  // namespace sentences

}  // namespace testing

#endif  // MSO_TEST_HELPERS_HPP
