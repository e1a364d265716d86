#include "mso/theory.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mso {

namespace detail {

struct TheoryNode {
  Signature sig;
  std::size_t hash = 0;
  std::vector<std::uint64_t> bits;  // base level only
  std::vector<Theory> members;      // level >= 1 only
  Theory empty_ext;                 // point rounds only
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  // splitmix-style combine
  v += 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return seed ^ (v ^ (v >> 31));
}

struct NodeHash {
  std::size_t operator()(const TheoryNode* n) const { return n->hash; }
};

struct NodeEq {
  bool operator()(const TheoryNode* a, const TheoryNode* b) const {
    return a->sig == b->sig && a->bits == b->bits && a->members == b->members &&
           a->empty_ext == b->empty_ext;
  }
};

class Store {
 public:
  const TheoryNode* intern(TheoryNode&& candidate) {
    std::lock_guard lock(mutex_);
    auto it = table_.find(&candidate);
    if (it != table_.end()) return *it;
    arena_.push_back(std::move(candidate));
    const TheoryNode* n = &arena_.back();
    table_.insert(n);
    return n;
  }

  std::size_t size() {
    std::lock_guard lock(mutex_);
    return arena_.size();
  }

 private:
  std::mutex mutex_;
  std::deque<TheoryNode> arena_;
  std::unordered_set<const TheoryNode*, NodeHash, NodeEq> table_;
};

Store& store() {
  static Store s;
  return s;
}

}  // namespace
}  // namespace detail

using detail::TheoryNode;

// ---------------------------------------------------------------------------
// BaseFacts

BaseFacts::BaseFacts(int predicates) : predicates_(predicates), k_(predicates) {
  if (predicates < 0 || predicates > kMaxPredicates) {
    throw DomainError("predicate count " + std::to_string(predicates) + " out of range");
  }
  bits_.assign((bit_count() + 63) / 64, 0);
}

BaseFacts BaseFacts::of_empty(int predicates) {
  BaseFacts f(predicates);
  for (int i = 0; i < predicates; ++i)
    for (int j = 0; j < predicates; ++j) f.set_subset(i, j);
  return f;
}

BaseFacts BaseFacts::of_pairs(int predicates, std::span<const AtomicPairType> pairs) {
  BaseFacts f = of_empty(predicates);
  const auto has = [](Letter l, int i) { return ((l >> i) & 1U) != 0; };
  for (const auto& p : pairs) {
    for (int i = 0; i < predicates; ++i) {
      if (p.order == PairOrder::Equal && has(p.first, i)) {
        f.set_nonempty(i);
        for (int j = 0; j < predicates; ++j)
          if (!has(p.first, j)) f.set_subset(i, j, false);
      }
      if (p.order == PairOrder::Less && has(p.first, i))
        for (int j = 0; j < predicates; ++j)
          if (has(p.second, j)) f.set_less(i, j);
    }
  }
  return f;
}

BaseFacts BaseFacts::of_word(int predicates, std::span<const Letter> word) {
  std::vector<AtomicPairType> pairs;
  for (std::size_t x = 0; x < word.size(); ++x)
    for (std::size_t y = 0; y < word.size(); ++y) {
      const PairOrder o = x < y ? PairOrder::Less : x == y ? PairOrder::Equal : PairOrder::Greater;
      pairs.push_back({o, word[x], word[y]});
    }
  return of_pairs(predicates, pairs);
}

// ---------------------------------------------------------------------------
// Schemas

namespace {

constexpr int kAtomSlots = kMaxPredicates;

std::size_t atom_index(const Atom& a) {
  const auto n = static_cast<std::size_t>(kAtomSlots);
  switch (a.kind) {
    case AtomKind::Nonempty:
      return static_cast<std::size_t>(a.left);
    case AtomKind::Subset:
      return n + static_cast<std::size_t>(a.left) * n + static_cast<std::size_t>(a.right);
    case AtomKind::Less:
      return n + n * n + static_cast<std::size_t>(a.left) * n + static_cast<std::size_t>(a.right);
  }
  return 0;
}

constexpr std::size_t kAtomCount = kAtomSlots + 2 * kAtomSlots * kAtomSlots;

class SchemaRegistry {
 public:
  SchemaRegistry() {
    // Slot 0 is the full schema.
    sets_.emplace_back(kAtomCount, true);
  }

  SchemaId intern(std::vector<bool> set) {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < sets_.size(); ++i)
      if (sets_[i] == set) return static_cast<SchemaId>(i);
    sets_.push_back(std::move(set));
    return static_cast<SchemaId>(sets_.size() - 1);
  }

  bool contains(SchemaId id, const Atom& a) {
    std::lock_guard lock(mutex_);
    if (id >= sets_.size()) throw DomainError("unknown schema id");
    return sets_[id][atom_index(a)];
  }

  const std::vector<std::uint64_t>& mask(SchemaId id, int predicates) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(id, predicates);
    auto it = masks_.find(key);
    if (it != masks_.end()) return it->second;
    BaseFacts m(predicates);
    const auto& set = sets_.at(id);
    for (int i = 0; i < predicates; ++i) {
      m.set_nonempty(i, set[atom_index({AtomKind::Nonempty, i, 0})]);
      for (int j = 0; j < predicates; ++j) {
        m.set_subset(i, j, set[atom_index({AtomKind::Subset, i, j})]);
        m.set_less(i, j, set[atom_index({AtomKind::Less, i, j})]);
      }
    }
    return masks_.emplace(key, m.words()).first->second;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<SchemaId, int>& k) const {
      return std::hash<std::uint64_t>{}((std::uint64_t{k.first} << 8) | static_cast<unsigned>(k.second));
    }
  };
  std::mutex mutex_;
  std::vector<std::vector<bool>> sets_;
  std::unordered_map<std::pair<SchemaId, int>, std::vector<std::uint64_t>, KeyHash> masks_;
};

SchemaRegistry& schemas() {
  static SchemaRegistry r;
  return r;
}

}  // namespace

SchemaId register_schema(std::span<const Atom> atoms) {
  std::vector<bool> set(kAtomCount, false);
  std::vector<Atom> work(atoms.begin(), atoms.end());
  while (!work.empty()) {
    const Atom a = work.back();
    work.pop_back();
    if (a.left < 0 || a.left >= kAtomSlots || a.right < 0 || a.right >= kAtomSlots)
      throw DomainError("atom predicate index out of range");
    const Atom norm = a.kind == AtomKind::Nonempty ? Atom{a.kind, a.left, 0} : a;
    if (set[atom_index(norm)]) continue;
    set[atom_index(norm)] = true;
    if (norm.kind == AtomKind::Less) {
      work.push_back({AtomKind::Nonempty, norm.left, 0});
      work.push_back({AtomKind::Nonempty, norm.right, 0});
      work.push_back({AtomKind::Less, norm.right, norm.left});
    }
  }
  return schemas().intern(std::move(set));
}

bool schema_contains(SchemaId schema, const Atom& atom) {
  const Atom norm = atom.kind == AtomKind::Nonempty ? Atom{atom.kind, atom.left, 0} : atom;
  return schemas().contains(schema, norm);
}

std::vector<Atom> schema_atoms(SchemaId schema, int predicates) {
  std::vector<Atom> out;
  for (int i = 0; i < predicates; ++i) {
    if (schema_contains(schema, {AtomKind::Nonempty, i, 0})) out.push_back({AtomKind::Nonempty, i, 0});
    for (int j = 0; j < predicates; ++j) {
      if (schema_contains(schema, {AtomKind::Subset, i, j})) out.push_back({AtomKind::Subset, i, j});
      if (schema_contains(schema, {AtomKind::Less, i, j})) out.push_back({AtomKind::Less, i, j});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theory

Signature Theory::signature() const { return node_->sig; }

std::span<const Theory> Theory::members() const { return node_->members; }

Theory Theory::empty_extension() const {
  if (!point_round()) throw DomainError("empty_extension: not a point round");
  return node_->empty_ext;
}

std::size_t Theory::size() const {
  if (is_base()) {
    std::size_t c = 0;
    for (auto w : node_->bits) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  return node_->members.size();
}

std::span<const std::uint64_t> Theory::base_bits() const { return node_->bits; }

bool Theory::nonempty(int i) const { return facts_of(*this).nonempty(i); }
bool Theory::subset(int i, int j) const { return facts_of(*this).subset(i, j); }
bool Theory::less(int i, int j) const { return facts_of(*this).less(i, j); }

bool Theory::empty_model() const {
  if (is_base()) {
    for (int i = 0; i < predicates(); ++i)
      if (nonempty(i)) return false;
    return true;
  }
  if (point_round()) return node_->members.empty() && node_->empty_ext.empty_model();
  return node_->members.size() == 1 && node_->members.front().empty_model();
}

std::size_t Theory::hash() const { return node_->hash; }

bool operator==(const Theory& a, const Theory& b) { return a.node_ == b.node_; }

std::strong_ordering canonical_compare(const Theory& a, const Theory& b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a.rounds() <=> b.rounds(); c != 0) return c;
  if (auto c = a.predicates() <=> b.predicates(); c != 0) return c;
  if (auto c = a.signature().schema <=> b.signature().schema; c != 0) return c;
  if (auto c = a.signature().points <=> b.signature().points; c != 0) return c;
  if (a.is_base()) {
    auto x = a.base_bits();
    auto y = b.base_bits();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (auto c = x[i] <=> y[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  if (a.point_round())
    if (auto c = canonical_compare(a.empty_extension(), b.empty_extension()); c != 0) return c;
  auto x = a.members();
  auto y = b.members();
  if (auto c = x.size() <=> y.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (auto c = canonical_compare(x[i], y[i]); c != 0) return c;
  return std::strong_ordering::equal;
}

Theory make_base(const BaseFacts& facts, SchemaId schema, std::uint8_t points) {
  TheoryNode n;
  n.sig = {0, facts.predicates(), schema, points};
  n.bits = facts.words();
  if (schema != kFullSchema) {
    const auto& mask = schemas().mask(schema, facts.predicates());
    for (std::size_t i = 0; i < n.bits.size(); ++i) n.bits[i] &= mask[i];
  }
  std::size_t h = detail::mix(0x51ed + schema + (std::size_t{points} << 40),
                              static_cast<std::size_t>(facts.predicates()));
  for (auto w : n.bits) h = detail::mix(h, w);
  n.hash = h;
  return Theory::from_node(detail::store().intern(std::move(n)));
}

BaseFacts facts_of(const Theory& base) {
  if (!base.is_base()) throw DomainError("facts_of: not a base theory");
  BaseFacts f(base.predicates());
  f.words().assign(base.base_bits().begin(), base.base_bits().end());
  return f;
}

namespace {

Theory intern_payload(Signature sig, Theory empty_ext, std::vector<Theory> members) {
  const Signature low = sig.lower();
  for (const auto& m : members)
    if (m.signature() != low) throw DomainError("member signature mismatch");
  // Interning makes equal theories pointer-equal, so duplicates go cheaply
  // before the structural sort.
  std::sort(members.begin(), members.end(),
            [](const Theory& a, const Theory& b) { return std::less<>{}(a.node(), b.node()); });
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::sort(members.begin(), members.end(), CanonicalLess{});
  TheoryNode n;
  n.sig = sig;
  std::size_t h = detail::mix(static_cast<std::size_t>(sig.rounds) * 131 + 7 + sig.schema * 7919 +
                                  (std::size_t{sig.points} << 40),
                              static_cast<std::size_t>(sig.predicates));
  if (empty_ext.valid()) h = detail::mix(h, empty_ext.hash() ^ 0x7e57);
  for (const auto& m : members) h = detail::mix(h, m.hash());
  n.hash = h;
  n.members = std::move(members);
  n.empty_ext = empty_ext;
  return Theory::from_node(detail::store().intern(std::move(n)));
}

}  // namespace

Theory make_theory(Signature sig, std::vector<Theory> members) {
  if (sig.rounds < 1) throw DomainError("make_theory needs rounds >= 1");
  if (sig.point_round()) throw DomainError("make_theory: point round needs make_point_theory");
  return intern_payload(sig, Theory(), std::move(members));
}

Theory make_point_theory(Signature sig, Theory empty_ext, std::vector<Theory> singles) {
  if (!sig.point_round()) throw DomainError("make_point_theory: not a point round");
  if (!empty_ext.valid() || empty_ext.signature() != sig.lower())
    throw DomainError("member signature mismatch");
  return intern_payload(sig, empty_ext, std::move(singles));
}

Theory empty_theory(Signature sig) {
  if (sig.rounds == 0) return make_base(BaseFacts::of_empty(sig.predicates), sig.schema, sig.points);
  if (sig.point_round()) return make_point_theory(sig, empty_theory(sig.lower()), {});
  return make_theory(sig, {empty_theory(sig.lower())});
}

std::size_t interned_theory_count() { return detail::store().size(); }

namespace {

void write(std::ostream& os, const Theory& t) {
  if (!t.is_base() && t.point_round()) {
    os << '[';
    write(os, t.empty_extension());
    os << '|';
    bool first = true;
    for (const auto& m : t.members()) {
      if (!first) os << ',';
      first = false;
      write(os, m);
    }
    os << ']';
    return;
  }
  os << '{';
  bool first = true;
  const auto sep = [&] {
    if (!first) os << ',';
    first = false;
  };
  if (t.is_base()) {
    const BaseFacts f = facts_of(t);
    const int k = t.predicates();
    for (int i = 0; i < k; ++i)
      if (f.nonempty(i)) {
        sep();
        os << "ne" << i + 1;
      }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j && f.subset(i, j)) {
          sep();
          os << i + 1 << "<=" << j + 1;
        }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (f.less(i, j)) {
          sep();
          os << i + 1 << '<' << j + 1;
        }
  } else {
    for (const auto& m : t.members()) {
      sep();
      write(os, m);
    }
  }
  os << '}';
}

Theory permute_full(const Theory& t, std::vector<int>& perm) {
  if (t.is_base()) {
    const BaseFacts in = facts_of(t);
    BaseFacts out(t.predicates());
    const int k = t.predicates();
    for (int i = 0; i < k; ++i) {
      out.set_nonempty(perm[i], in.nonempty(i));
      for (int j = 0; j < k; ++j) {
        out.set_subset(perm[i], perm[j], in.subset(i, j));
        out.set_less(perm[i], perm[j], in.less(i, j));
      }
    }
    return make_base(out, t.signature().schema, t.signature().points);
  }
  perm.push_back(t.predicates());
  std::vector<Theory> ms;
  ms.reserve(t.size());
  for (const auto& m : t.members()) ms.push_back(permute_full(m, perm));
  perm.pop_back();
  return make_theory(t.signature(), std::move(ms));
}

}  // namespace

std::string to_string(const Theory& t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Theory& t) {
  os << "Th[" << t.rounds() << ',' << t.predicates() << ']';
  write(os, t);
  return os;
}

Theory permute_predicates(const Theory& t, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != t.predicates())
    throw DomainError("permutation size must equal predicate count");
  if (t.signature().schema != kFullSchema || t.signature().points != 0)
    throw DomainError("permute_predicates needs the full atom schema and no point rounds");
  std::vector<int> p(perm.begin(), perm.end());
  std::vector<int> check = p;
  std::sort(check.begin(), check.end());
  for (int i = 0; i < static_cast<int>(check.size()); ++i)
    if (check[i] != i) throw DomainError("not a permutation");
  return permute_full(t, p);
}

}  // namespace mso
