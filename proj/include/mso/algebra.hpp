// The finite algebra of theories under ordered sums.
//
// Every operation takes theories of one signature and returns a theory of
// the same signature: the theory of the order obtained by the corresponding
// construction on any models of the arguments.
//
//   compose_sum(a, b)      M_a + M_b
//   reverse(t)             the converse order
//   omega_power(s)         M_s + M_s + ...            (index order omega)
//   omega_star_power(s)    ... + M_s + M_s            (index order omega*)
//   shuffle(S)             sum over the rationals, each member of S placed on
//                          a dense set of indices
//
// All results are memoized process-wide; memo tables are mutex-protected and
// never change observable results.

#ifndef MSO_ALGEBRA_HPP
#define MSO_ALGEBRA_HPP

#include <span>
#include <utility>
#include <vector>

#include "mso/theory.hpp"

namespace mso {

Theory compose_sum(const Theory& a, const Theory& b);
Theory reverse(const Theory& t);
Theory omega_power(const Theory& s);
Theory omega_star_power(const Theory& s);
Theory shuffle(std::span<const Theory> kinds);

/// Closure of `generators` under compose_sum, in discovery order.  Throws
/// ResourceError when it exceeds the element budget.
std::vector<Theory> sum_closure(std::span<const Theory> generators);

/// All (p, e) in the sum closure of `generators` with p + e = p and e + e = e.
std::vector<std::pair<Theory, Theory>> linked_pairs(std::span<const Theory> generators);

/// Every distinct shuffle(P) over nonempty subsets P of `values` (empty
/// models skipped), each with the indices of one such P.  Runs over keys of
/// subsets, so it stays small when many subsets share a shuffle.
std::vector<std::pair<Theory, std::vector<std::size_t>>> subset_shuffles(std::span<const Theory> values);

/// Theory of the one-point order with the given letter.
Theory point_theory(Signature sig, Letter letter = 0);

namespace detail {
/// Testing hook: shuffle value sets by plain subset closure instead of keys.
/// Results must not change.
void set_generic_shuffle(bool on);
}  // namespace detail

}  // namespace mso

#endif  // MSO_ALGEBRA_HPP
