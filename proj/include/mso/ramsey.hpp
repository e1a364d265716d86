// Additive colorings of finite chains over (partial) finite semigroups:
// additivity checks, homogeneous subsets, idempotent powers, and the
// coloring of a word by the theories of its intervals.

#ifndef MSO_RAMSEY_HPP
#define MSO_RAMSEY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mso/theory.hpp"
#include "mso/theory_core.hpp"

namespace mso {

/// Elements are 0..size()-1.  A sum of -1 means undefined.
class SemigroupTable {
 public:
  SemigroupTable() = default;
  explicit SemigroupTable(int size);

  int size() const { return size_; }
  std::optional<int> sum(int a, int b) const;
  void set_sum(int a, int b, int c);
  int add_element();

  /// (x+y)+z = x+(y+z) wherever all four sums are defined.
  bool associative() const;

  static SemigroupTable cyclic_group(int n);
  /// The semigroup generated by `maps` under composition (first the left
  /// argument, then the right).  Each map is a transformation of 0..k-1.
  static SemigroupTable from_transformations(const std::vector<std::vector<int>>& maps);

 private:
  int size_ = 0;
  std::vector<int> table_;
};

/// Colors of the pairs i < j of the chain 0..length-1.
class AdditiveColoring {
 public:
  AdditiveColoring() = default;
  AdditiveColoring(int length, SemigroupTable table);

  int length() const { return length_; }
  const SemigroupTable& table() const { return table_; }
  SemigroupTable& table() { return table_; }
  int color(int i, int j) const;
  void set_color(int i, int j, int c);

  /// f(i, j) = steps[i] + ... + steps[j-1]; the table must be total on the
  /// sums that arise.
  static AdditiveColoring from_steps(const SemigroupTable& table, const std::vector<int>& steps);

 private:
  std::size_t index(int i, int j) const;

  int length_ = 0;
  SemigroupTable table_;
  std::vector<int> colors_;
};

struct AdditivityReport {
  bool additive = true;
  std::array<int, 3> counterexample{};  // x < y < z, set when !additive
};

AdditivityReport check_additive(const AdditiveColoring& c);

struct HomogeneousSet {
  std::vector<int> positions;
  int color = -1;
};

/// Chain length from which a homogeneous set of size k is always found for
/// tables with `elements` elements.
int homogeneous_bound(int elements, int k);

/// A largest-possible homogeneous set of size >= k, or nullopt when the
/// chain has none ("chain too short").  Throws DomainError on a
/// non-additive coloring.
std::optional<HomogeneousSet> homogeneous_subset(const AdditiveColoring& c, int k);

/// Direct check over all pairs.
bool is_homogeneous(const AdditiveColoring& c, const HomogeneousSet& h);

/// Smallest i with i*t idempotent, and that idempotent.  Throws DomainError
/// on an undefined sum.
std::pair<int, int> idempotent_power(int t, const SemigroupTable& s);

struct IntervalColoring {
  AdditiveColoring coloring;     // chain 0..|w|, pair (a, b) colored by w[a, b)
  std::vector<Theory> elements;  // element index -> theory
};

/// Sums between colors are compose_sum; results outside the colors are
/// added as elements without their own sums.
IntervalColoring interval_coloring(const LabeledFiniteOrder& w, Signature sig);

/// A semigroup with at most `max_size` elements generated by random
/// transformations, or a cyclic group.
SemigroupTable random_semigroup(std::mt19937_64& rng, int max_size);

}  // namespace mso

#endif  // MSO_RAMSEY_HPP
