// Canonical n-theories of labeled linear orders.
//
// A theory of signature (n, m) describes a linear order carrying m unary
// predicates P_1..P_m.  At n = 0 it is the set of base facts (nonemptiness,
// inclusion and order between predicates) the order satisfies.  At n >= 1 it
// is the set of (n-1, m+1)-theories obtained by adding one more predicate in
// every possible way.
//
// A round may be a point round: then the added predicate ranges over the
// empty set and the singletons only.  Such a theory stores the extension by
// the empty set separately and lists the singleton extensions as members.
//
// Theory values are hash-consed: every structurally distinct theory is stored
// exactly once in a process-wide arena and a Theory is a handle to it.
// Payloads are kept in a canonical order (see canonical_compare) so equal
// encodings are equal handles.

#ifndef MSO_THEORY_HPP
#define MSO_THEORY_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mso/errors.hpp"

namespace mso {

/// Subset of {P_1..P_m}; bit i stands for P_{i+1}.
using Letter = std::uint32_t;

/// Largest predicate count a base-level theory may carry.
inline constexpr int kMaxPredicates = 8;

/// Kinds of set atoms recorded at the base level.
enum class AtomKind : std::uint8_t { Nonempty, Subset, Less };

/// A set atom over 0-based predicate indices; Nonempty ignores `right`.
struct Atom {
  AtomKind kind = AtomKind::Nonempty;
  int left = 0;
  int right = 0;
  auto operator<=>(const Atom&) const = default;
};

/// Identifier of a registered atom schema: the set of atoms a theory records
/// at its base.  kFullSchema records every atom.
using SchemaId = std::uint32_t;
inline constexpr SchemaId kFullSchema = 0;

/// Registers the schema containing `atoms` closed under what the algebra
/// needs (Less(i,j) brings Nonempty(i), Nonempty(j) and Less(j,i)).  Equal
/// closed sets get equal ids.
SchemaId register_schema(std::span<const Atom> atoms);
bool schema_contains(SchemaId schema, const Atom& atom);
std::vector<Atom> schema_atoms(SchemaId schema, int predicates);

struct Signature {
  int rounds = 0;      // n: set-quantifier rounds
  int predicates = 0;  // m: predicate constants
  SchemaId schema = kFullSchema;
  std::uint8_t points = 0;  // bit i: predicate i is added by a point round

  Signature lower() const { return {rounds - 1, predicates + 1, schema, points}; }
  int base_predicates() const { return predicates + rounds; }
  bool point_round() const { return rounds > 0 && ((points >> predicates) & 1U) != 0; }
  bool operator==(const Signature&) const = default;
};

/// Atomic type of an ordered pair of elements (x, y): how x and y compare and
/// the letters they carry.  Base facts are derived from these.
enum class PairOrder : std::uint8_t { Less = 0, Equal = 1, Greater = 2 };

struct AtomicPairType {
  PairOrder order = PairOrder::Equal;
  Letter first = 0;
  Letter second = 0;
  auto operator<=>(const AtomicPairType&) const = default;
};

namespace detail {
struct TheoryNode;
}

class Theory {
 public:
  Theory() = default;

  Signature signature() const;
  int rounds() const { return signature().rounds; }
  int predicates() const { return signature().predicates; }
  bool is_base() const { return rounds() == 0; }
  bool valid() const { return node_ != nullptr; }

  /// Members of a level >= 1 payload, in canonical order.  For a point round
  /// these are the singleton extensions only.
  std::span<const Theory> members() const;
  std::size_t size() const;
  bool point_round() const { return signature().point_round(); }
  /// Extension by the empty set (point rounds only).
  Theory empty_extension() const;

  /// Base facts (level 0 only); predicate indices are 0-based.
  bool nonempty(int i) const;
  bool subset(int i, int j) const;
  bool less(int i, int j) const;
  std::span<const std::uint64_t> base_bits() const;

  /// True iff the theory describes the empty order.
  bool empty_model() const;

  std::size_t hash() const;
  const detail::TheoryNode* node() const { return node_; }

  friend bool operator==(const Theory& a, const Theory& b);
  friend bool operator!=(const Theory& a, const Theory& b) { return !(a == b); }

  static Theory from_node(const detail::TheoryNode* n) { return Theory(n); }

 private:
  explicit Theory(const detail::TheoryNode* n) : node_(n) {}
  const detail::TheoryNode* node_ = nullptr;
};

/// Total order on encodings, defined recursively on structure.  Independent of
/// interning order, so canonical payload order is reproducible across runs.
std::strong_ordering canonical_compare(const Theory& a, const Theory& b);

struct CanonicalLess {
  bool operator()(const Theory& a, const Theory& b) const {
    return canonical_compare(a, b) < 0;
  }
};

struct TheoryHash {
  std::size_t operator()(const Theory& t) const { return t.hash(); }
};

/// The level-0 payload over k predicates: which set atoms hold.
///   nonempty(i)   some element carries P_i
///   subset(i, j)  every element carrying P_i carries P_j
///   less(i, j)    some x < y with x in P_i and y in P_j
/// singleton(i) is nonempty(i) and not less(i, i).
class BaseFacts {
 public:
  explicit BaseFacts(int predicates);

  /// Facts of the empty order: every subset holds, nothing else.
  static BaseFacts of_empty(int predicates);
  /// Facts of a finite word.
  static BaseFacts of_word(int predicates, std::span<const Letter> word);
  /// Facts realized by a set of atomic pair types.
  static BaseFacts of_pairs(int predicates, std::span<const AtomicPairType> pairs);

  int predicates() const { return predicates_; }

  bool nonempty(int i) const { return test(i); }
  bool subset(int i, int j) const { return test(k_ + i * k_ + j); }
  bool less(int i, int j) const { return test(k_ + k_ * k_ + i * k_ + j); }
  void set_nonempty(int i, bool v = true) { assign(i, v); }
  void set_subset(int i, int j, bool v = true) { assign(k_ + i * k_ + j, v); }
  void set_less(int i, int j, bool v = true) { assign(k_ + k_ * k_ + i * k_ + j, v); }

  std::vector<std::uint64_t>& words() { return bits_; }
  const std::vector<std::uint64_t>& words() const { return bits_; }
  std::size_t bit_count() const { return static_cast<std::size_t>(k_ + 2 * k_ * k_); }

 private:
  bool test(int i) const { return (bits_[i / 64] >> (i % 64)) & 1U; }
  void assign(int i, bool v) {
    const auto mask = std::uint64_t{1} << (i % 64);
    if (v)
      bits_[i / 64] |= mask;
    else
      bits_[i / 64] &= ~mask;
  }
  int predicates_;
  int k_;
  std::vector<std::uint64_t> bits_;
};

/// Construct (intern) a base-level theory; facts outside `schema` are cleared.
/// `points` only records the rounds above, so signatures match.
Theory make_base(const BaseFacts& facts, SchemaId schema = kFullSchema, std::uint8_t points = 0);
BaseFacts facts_of(const Theory& base);

/// Construct (intern) a level >= 1 theory of signature `sig` from members of
/// signature sig.lower().  Members are sorted and deduplicated.
Theory make_theory(Signature sig, std::vector<Theory> members);

/// Construct (intern) a point-round theory from its empty-set extension and
/// its singleton extensions.
Theory make_point_theory(Signature sig, Theory empty_ext, std::vector<Theory> singles);

/// The theory of the empty order at `sig`.
Theory empty_theory(Signature sig);

/// Number of distinct theories interned so far.
std::size_t interned_theory_count();

/// Nested-bracket rendering with members in canonical order.  Base facts are
/// written with 1-based predicate indices: ne1 (nonempty), 1<=2 (subset,
/// only for distinct predicates), 1<2 (less).  A point round prints as
/// [e|s1,s2,...] with e the empty-set extension.
std::string to_string(const Theory& t);
std::ostream& operator<<(std::ostream& os, const Theory& t);

/// Renames the top-level predicates: P_{i+1} becomes P_{perm[i]+1}.  `perm`
/// must be a permutation of 0..m-1; predicates added by rounds keep their
/// positions.
Theory permute_predicates(const Theory& t, std::span<const int> perm);

}  // namespace mso

template <>
struct std::hash<mso::Theory> {
  std::size_t operator()(const mso::Theory& t) const { return t.hash(); }
};

#endif  // MSO_THEORY_HPP
