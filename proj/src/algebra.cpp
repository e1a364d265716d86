#include "mso/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <bitset>
#include <iterator>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mso/budget.hpp"

namespace mso {

namespace {

using NodePtr = const detail::TheoryNode*;

struct PairHash {
  std::size_t operator()(const std::pair<NodePtr, NodePtr>& p) const {
    return std::hash<NodePtr>{}(p.first) * 0x9e3779b97f4a7c15ULL ^ std::hash<NodePtr>{}(p.second);
  }
};

template <class Key, class Hash = std::hash<Key>>
class Memo {
 public:
  bool find(const Key& k, Theory& out) {
    std::lock_guard lock(mutex_);
    auto it = table_.find(k);
    if (it == table_.end()) return false;
    out = it->second;
    return true;
  }
  void put(const Key& k, const Theory& v) {
    std::lock_guard lock(mutex_);
    table_.emplace(k, v);
  }

 private:
  std::mutex mutex_;
  std::unordered_map<Key, Theory, Hash> table_;
};

Memo<std::pair<NodePtr, NodePtr>, PairHash>& sum_memo() {
  static Memo<std::pair<NodePtr, NodePtr>, PairHash> m;
  return m;
}
Memo<NodePtr>& reverse_memo() {
  static Memo<NodePtr> m;
  return m;
}
Memo<NodePtr>& omega_memo() {
  static Memo<NodePtr> m;
  return m;
}

void require_same_signature(const Theory& a, const Theory& b, const char* op) {
  if (a.signature() != b.signature())
    throw DomainError(std::string(op) + ": signature mismatch");
}

// Facts of the concatenation of one model per entry of `parts`, in order.
// With `dense` every part also has copies on both sides of every other part.
BaseFacts base_concat(std::span<const Theory> parts, bool dense) {
  const int k = parts.front().predicates();
  BaseFacts out = BaseFacts::of_empty(k);
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (const auto& part : parts) {
    const BaseFacts f = facts_of(part);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        if (!f.subset(i, j)) out.set_subset(i, j, false);
        if (f.less(i, j) || (seen[i] && f.nonempty(j)))
          out.set_less(i, j);
      }
    for (int i = 0; i < k; ++i)
      if (f.nonempty(i)) {
        out.set_nonempty(i);
        seen[i] = true;
      }
  }
  if (dense)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (seen[i] && seen[j]) out.set_less(i, j);
  return out;
}

Theory base_sum(const Theory& a, const Theory& b) {
  const Theory parts[] = {a, b};
  return make_base(base_concat(parts, false), a.signature().schema, a.signature().points);
}

Theory base_reverse(const Theory& t) {
  const BaseFacts in = facts_of(t);
  BaseFacts out(t.predicates());
  const int k = t.predicates();
  for (int i = 0; i < k; ++i) {
    out.set_nonempty(i, in.nonempty(i));
    for (int j = 0; j < k; ++j) {
      out.set_subset(i, j, in.subset(i, j));
      out.set_less(i, j, in.less(j, i));
    }
  }
  return make_base(out, t.signature().schema, t.signature().points);
}

}  // namespace

Theory point_theory(Signature sig, Letter letter) {
  if (sig.rounds == 0) {
    const AtomicPairType diag{PairOrder::Equal, letter, letter};
    return make_base(BaseFacts::of_pairs(sig.predicates, std::span(&diag, 1)), sig.schema, sig.points);
  }
  const Signature low = sig.lower();
  const Letter fresh = Letter{1} << sig.predicates;
  if (sig.point_round())
    return make_point_theory(sig, point_theory(low, letter), {point_theory(low, letter | fresh)});
  return make_theory(sig, {point_theory(low, letter), point_theory(low, letter | fresh)});
}

Theory compose_sum(const Theory& a, const Theory& b) {
  require_same_signature(a, b, "compose_sum");
  const auto key = std::make_pair(a.node(), b.node());
  Theory cached;
  if (sum_memo().find(key, cached)) return cached;

  Theory result;
  if (a.empty_model()) {
    result = b;
  } else if (b.empty_model()) {
    result = a;
  } else if (a.is_base()) {
    result = base_sum(a, b);
  } else if (a.point_round()) {
    // The point lies in exactly one of the two summands.
    const Theory ea = a.empty_extension();
    const Theory eb = b.empty_extension();
    std::vector<Theory> ms;
    ms.reserve(a.size() + b.size());
    for (const auto& x : a.members()) ms.push_back(compose_sum(x, eb));
    for (const auto& y : b.members()) ms.push_back(compose_sum(ea, y));
    result = make_point_theory(a.signature(), compose_sum(ea, eb), std::move(ms));
  } else {
    std::vector<Theory> ms;
    ms.reserve(a.size() * b.size());
    for (const auto& x : a.members())
      for (const auto& y : b.members()) ms.push_back(compose_sum(x, y));
    result = make_theory(a.signature(), std::move(ms));
  }
  sum_memo().put(key, result);
  return result;
}

Theory reverse(const Theory& t) {
  Theory cached;
  if (reverse_memo().find(t.node(), cached)) return cached;
  Theory result;
  if (t.is_base()) {
    result = base_reverse(t);
  } else {
    std::vector<Theory> ms;
    ms.reserve(t.size());
    for (const auto& m : t.members()) ms.push_back(reverse(m));
    if (t.point_round())
      result = make_point_theory(t.signature(), reverse(t.empty_extension()), std::move(ms));
    else
      result = make_theory(t.signature(), std::move(ms));
  }
  reverse_memo().put(t.node(), result);
  return result;
}

namespace {

// Finite sums of the generators, with the right action of every generator.
// Each element remembers one generator word that produces it, so x + y for
// closure elements is a walk along y's word starting at x.
struct Cayley {
  std::vector<Theory> elems;
  std::vector<std::uint32_t> step;  // step[i * gens + g] = elems[i] + gen g
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> last_gen;
  std::size_t gens = 0;

  static constexpr std::uint32_t kNone = 0xffffffffu;

  explicit Cayley(std::span<const Theory> generators) {
    std::unordered_map<Theory, std::uint32_t> index;
    std::vector<Theory> gs;
    for (const auto& g : generators)
      if (index.emplace(g, static_cast<std::uint32_t>(gs.size())).second) gs.push_back(g);
    gens = gs.size();
    elems = gs;
    for (std::size_t g = 0; g < gens; ++g) {
      parent.push_back(kNone);
      last_gen.push_back(static_cast<std::uint32_t>(g));
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t g = 0; g < gens; ++g) {
        Theory z = compose_sum(elems[i], gs[g]);
        auto [it, fresh] = index.emplace(z, static_cast<std::uint32_t>(elems.size()));
        if (fresh) {
          elems.push_back(z);
          parent.push_back(static_cast<std::uint32_t>(i));
          last_gen.push_back(static_cast<std::uint32_t>(g));
          check_budget("sum closure", elems.size());
        }
        step.push_back(it->second);
      }
    }
  }

  std::vector<std::uint32_t> word(std::uint32_t i) const {
    std::vector<std::uint32_t> w;
    for (; i != kNone; i = parent[i]) w.push_back(last_gen[i]);
    std::reverse(w.begin(), w.end());
    return w;
  }

  std::uint32_t walk(std::uint32_t from, const std::vector<std::uint32_t>& w) const {
    for (auto g : w) from = step[from * gens + g];
    return from;
  }
};

}  // namespace

std::vector<Theory> sum_closure(std::span<const Theory> generators) {
  return Cayley(generators).elems;
}

std::vector<std::pair<Theory, Theory>> linked_pairs(std::span<const Theory> generators) {
  const Cayley c(generators);
  const auto n = static_cast<std::uint32_t>(c.elems.size());
  std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> idempotents;
  for (std::uint32_t e = 0; e < n; ++e) {
    auto w = c.word(e);
    if (c.walk(e, w) == e) idempotents.emplace_back(e, std::move(w));
  }
  std::vector<std::pair<Theory, Theory>> out;
  for (std::uint32_t p = 0; p < n; ++p)
    for (const auto& [e, w] : idempotents)
      if (c.walk(p, w) == p) out.emplace_back(c.elems[p], c.elems[e]);
  return out;
}

namespace {

// Base facts cannot tell an empty model from one with empty predicates, and a
// narrowed schema can make a nonempty model look empty; the algebra is right
// in those cases, so only a recognizably empty argument is refused.
bool surely_empty(const Theory& t) {
  if (t.is_base()) return false;
  return (t.point_round() || t.signature().schema == kFullSchema) && t.empty_model();
}

}  // namespace

Theory omega_power(const Theory& s) {
  if (surely_empty(s)) throw DomainError("omega_power: empty-model argument");
  Theory cached;
  if (omega_memo().find(s.node(), cached)) return cached;
  Theory result;
  if (s.is_base()) {
    // Pairs inside one copy plus earlier-copy < later-copy pairs.
    result = base_sum(s, s);
  } else if (s.point_round()) {
    // The point sits in copy i: i empty-marked copies before it, then the
    // omega power of the empty-marked copy after it.
    const Theory e = s.empty_extension();
    const Theory tail = omega_power(e);
    std::vector<Theory> prefixes = sum_closure(std::span(&e, 1));
    prefixes.push_back(empty_theory(e.signature()));
    std::vector<Theory> ms;
    for (const auto& p : prefixes)
      for (const auto& x : s.members()) ms.push_back(compose_sum(compose_sum(p, x), tail));
    result = make_point_theory(s.signature(), tail, std::move(ms));
  } else {
    // An omega-word over the extension theories factors as p + e + e + ...
    // for a linked pair (p, e) of its finite sums (additive Ramsey).
    std::vector<Theory> ms;
    for (const auto& [p, e] : linked_pairs(s.members()))
      ms.push_back(compose_sum(p, omega_power(e)));
    result = make_theory(s.signature(), std::move(ms));
  }
  omega_memo().put(s.node(), result);
  return result;
}

Theory omega_star_power(const Theory& s) { return reverse(omega_power(reverse(s))); }

namespace {

// A convex piece of a shuffle word: either one extended summand (a letter)
// or a dense sub-word in which every kind occurs densely.  Endpoint flags
// decide which concatenations stay dense.
struct Piece {
  Theory value;
  bool min = false;
  bool max = false;
  bool letter = false;
  bool operator==(const Piece&) const = default;
};

struct PieceHash {
  std::size_t operator()(const Piece& p) const {
    return p.value.hash() * 8 + (p.min ? 4u : 0u) + (p.max ? 2u : 0u) + (p.letter ? 1u : 0u);
  }
};

constexpr std::size_t kMaxShuffleKinds = 256;
using KindSet = std::bitset<kMaxShuffleKinds>;

// Keys of shuffle arguments.  shuffle(P) depends on P only through key(P),
// and key(P u Q) is computed from key(P) and key(Q), so the shuffles reachable
// inside a dense word come from a union closure over keys rather than from
// enumerating subsets of values.
//   tag 0  base level: the join shuffle(P)
//   tag 1  point round: key of the empty-marked parts, and all singleton
//          extensions
//   tag 2  set round over the base: joins of the letter sets meeting every
//          member of P, and all letters
//   tag 3  otherwise: P itself
using KeyId = std::uint32_t;
using KeyCode = std::vector<std::uintptr_t>;

struct KeyCodeHash {
  std::size_t operator()(const KeyCode& c) const {
    std::size_t h = c.size();
    for (auto v : c) h = h * 0x9e3779b97f4a7c15ULL ^ std::hash<std::uintptr_t>{}(v);
    return h;
  }
};

std::uintptr_t code_of(const Theory& t) { return reinterpret_cast<std::uintptr_t>(t.node()); }
Theory theory_of(std::uintptr_t c) {
  return Theory::from_node(reinterpret_cast<const detail::TheoryNode*>(c));
}

std::vector<std::uintptr_t> sorted_codes(std::span<const Theory> ts) {
  std::vector<std::uintptr_t> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(code_of(t));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uintptr_t> merged(std::span<const std::uintptr_t> a, std::span<const std::uintptr_t> b) {
  std::vector<std::uintptr_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

class KeyTable {
 public:
  KeyId intern(KeyCode code) {
    std::lock_guard lock(mutex_);
    auto [it, fresh] = ids_.emplace(code, static_cast<KeyId>(codes_.size()));
    if (fresh) codes_.push_back(std::move(code));
    return it->second;
  }

  KeyCode code(KeyId id) {
    std::lock_guard lock(mutex_);
    return codes_[id];
  }

  bool find_union(KeyId a, KeyId b, KeyId& out) {
    std::lock_guard lock(mutex_);
    auto it = unions_.find(union_slot(a, b));
    if (it == unions_.end()) return false;
    out = it->second;
    return true;
  }

  void put_union(KeyId a, KeyId b, KeyId v) {
    std::lock_guard lock(mutex_);
    unions_.emplace(union_slot(a, b), v);
  }

 private:
  static std::uint64_t union_slot(KeyId a, KeyId b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
  }
  std::mutex mutex_;
  std::vector<KeyCode> codes_;
  std::unordered_map<KeyCode, KeyId, KeyCodeHash> ids_;
  std::unordered_map<std::uint64_t, KeyId> unions_;
};

KeyTable& keys() {
  static KeyTable t;
  return t;
}

Theory join2(const Theory& a, const Theory& b) {
  const Theory two[] = {a, b};
  return shuffle(two);
}

std::atomic<bool> generic_keys{false};

KeyId singleton_key(const Theory& v) {
  if (generic_keys.load() && !v.is_base()) return keys().intern({3, code_of(v)});
  if (v.is_base()) {
    const Theory one[] = {v};
    return keys().intern({0, code_of(shuffle(one))});
  }
  if (v.point_round()) {
    KeyCode c{1, singleton_key(v.empty_extension())};
    for (auto x : sorted_codes(v.members())) c.push_back(x);
    return keys().intern(std::move(c));
  }
  if (v.rounds() == 1) {
    std::vector<Theory> seg;
    std::unordered_set<Theory> seen;
    for (const auto& l : v.members()) {
      const Theory one[] = {l};
      const Theory j = shuffle(one);
      if (seen.insert(j).second) seg.push_back(j);
    }
    for (std::size_t i = 0; i < seg.size(); ++i)
      for (std::size_t k = 0; k < i; ++k) {
        const Theory j = join2(seg[i], seg[k]);
        if (seen.insert(j).second) seg.push_back(j);
      }
    const auto sc = sorted_codes(seg);
    KeyCode c{2, sc.size()};
    c.insert(c.end(), sc.begin(), sc.end());
    for (auto x : sorted_codes(v.members())) c.push_back(x);
    return keys().intern(std::move(c));
  }
  return keys().intern({3, code_of(v)});
}

KeyId key_union(KeyId a, KeyId b) {
  if (a == b) return a;
  KeyId out;
  if (keys().find_union(a, b, out)) return out;
  const KeyCode x = keys().code(a);
  const KeyCode y = keys().code(b);
  KeyCode c{x[0]};
  switch (x[0]) {
    case 0:
      c.push_back(code_of(join2(theory_of(x[1]), theory_of(y[1]))));
      break;
    case 1: {
      c.push_back(key_union(static_cast<KeyId>(x[1]), static_cast<KeyId>(y[1])));
      const auto s = merged(std::span(x).subspan(2), std::span(y).subspan(2));
      c.insert(c.end(), s.begin(), s.end());
      break;
    }
    case 2: {
      const auto xs = std::span(x).subspan(2, x[1]);
      const auto ys = std::span(y).subspan(2, y[1]);
      std::vector<Theory> seg;
      for (auto p : xs)
        for (auto q : ys) seg.push_back(join2(theory_of(p), theory_of(q)));
      const auto sc = sorted_codes(seg);
      c.push_back(sc.size());
      c.insert(c.end(), sc.begin(), sc.end());
      const auto l = merged(std::span(x).subspan(2 + x[1]), std::span(y).subspan(2 + y[1]));
      c.insert(c.end(), l.begin(), l.end());
      break;
    }
    default: {
      const auto s = merged(std::span(x).subspan(1), std::span(y).subspan(1));
      c.insert(c.end(), s.begin(), s.end());
      break;
    }
  }
  out = keys().intern(std::move(c));
  keys().put_union(a, b, out);
  return out;
}

// Union closure of labelled sets.  Each seed stands for a one-element set;
// `unite` maps the labels of two sets to the label of their union.  Nodes
// remember how they were formed so a member list can be rebuilt.
struct UnionNode {
  std::uint32_t label;
  KindSet covered;
  bool dense;
  std::uint32_t left;   // seed index when right == kLeaf
  std::uint32_t right;
};
constexpr std::uint32_t kLeaf = 0xffffffffu;

template <class Unite>
std::vector<UnionNode> union_closure(std::span<const UnionNode> seeds, Unite unite, const char* what) {
  struct Slot {
    std::uint32_t label;
    KindSet covered;
    bool dense;
    bool operator==(const Slot&) const = default;
  };
  struct SlotHash {
    std::size_t operator()(const Slot& e) const {
      return (std::size_t{e.label} * 0x9e3779b97f4a7c15ULL) ^ std::hash<KindSet>{}(e.covered) ^ e.dense;
    }
  };
  std::vector<UnionNode> nodes;
  std::unordered_set<Slot, SlotHash> seen;
  const auto push = [&](const UnionNode& n) {
    if (seen.insert({n.label, n.covered, n.dense}).second) {
      nodes.push_back(n);
      check_budget(what, nodes.size());
    }
  };
  for (const auto& s : seeds) push(s);
  // A union's slot depends only on the slots of its parts, so adding one seed
  // at a time reaches the slot of every subset.
  const std::size_t singles = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < singles; ++j) {
      const UnionNode a = nodes[i];
      const UnionNode b = nodes[j];
      push({unite(a.label, b.label), a.covered | b.covered, a.dense || b.dense,
            static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  return nodes;
}

// Seed indices under node i.
std::vector<std::uint32_t> union_leaves(std::span<const UnionNode> nodes, std::uint32_t i) {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> stack{i};
  while (!stack.empty()) {
    const UnionNode& n = nodes[stack.back()];
    stack.pop_back();
    if (n.right == kLeaf) {
      out.push_back(n.left);
    } else {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Value {
  Theory theory;
  KindSet covered;  // kinds this value is a letter of
  bool dense;       // carried by some non-letter piece
};

bool admissible(const UnionNode& n, const KindSet& all_kinds) {
  return n.dense || n.covered == all_kinds;
}

struct Shuffled {
  Theory theory;
  std::vector<std::uint32_t> parts;  // indices of one P with shuffle(P) = theory
};

// shuffle(P) for every admissible nonempty P of set-round or base values.
std::vector<Shuffled> keyed_shuffles(std::span<const Value> values, const KindSet& all_kinds) {
  std::vector<UnionNode> seeds;
  for (std::size_t v = 0; v < values.size(); ++v)
    seeds.push_back({singleton_key(values[v].theory), values[v].covered, values[v].dense,
                     static_cast<std::uint32_t>(v), kLeaf});
  const auto nodes = union_closure(seeds, key_union, "shuffle keys");
  std::unordered_set<KeyId> done;
  std::vector<Shuffled> out;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (!admissible(nodes[i], all_kinds) || !done.insert(nodes[i].label).second) continue;
    auto parts = union_leaves(nodes, i);
    std::vector<Theory> set;
    for (auto v : parts) set.push_back(values[v].theory);
    out.push_back({shuffle(set), std::move(parts)});
  }
  return out;
}

// shuffle(P) for every admissible P of point-round values.  The result is
// the shuffle e of the empty-marked parts together with e + s + e for the
// singleton extensions s of P.  Fixing the key k of the empty-marked parts,
// e is fixed and the extensions contributed by each value form a small set,
// so the closure runs over (sub-key, contributed extensions) pairs.
std::vector<Shuffled> point_shuffles(std::span<const Value> values, const KindSet& all_kinds) {
  const Signature sig = values.front().theory.signature();
  std::vector<KeyId> inner;
  std::vector<UnionNode> seeds;
  for (std::size_t v = 0; v < values.size(); ++v) {
    inner.push_back(singleton_key(values[v].theory.empty_extension()));
    seeds.push_back({inner.back(), {}, true, static_cast<std::uint32_t>(v), kLeaf});
  }
  const auto key_nodes = union_closure(seeds, key_union, "shuffle keys");

  std::vector<Shuffled> out;
  for (std::uint32_t kn = 0; kn < key_nodes.size(); ++kn) {
    const KeyId k = key_nodes[kn].label;
    std::vector<Theory> parts;
    for (auto v : union_leaves(key_nodes, kn)) parts.push_back(values[v].theory.empty_extension());
    const Theory around = shuffle(parts);

    // Labels intern (sub-key, contributed set) pairs.
    std::vector<std::pair<KeyId, std::vector<std::uintptr_t>>> labels;
    std::map<std::pair<KeyId, std::vector<std::uintptr_t>>, std::uint32_t> label_ids;
    const auto label_of = [&](KeyId j, std::vector<std::uintptr_t> t) {
      auto key = std::make_pair(j, std::move(t));
      auto [it, fresh] = label_ids.emplace(key, static_cast<std::uint32_t>(labels.size()));
      if (fresh) labels.push_back(std::move(key));
      return it->second;
    };
    std::vector<UnionNode> local;
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (key_union(k, inner[v]) != k) continue;
      std::vector<Theory> t;
      for (const auto& x : values[v].theory.members()) t.push_back(compose_sum(compose_sum(around, x), around));
      local.push_back({label_of(inner[v], sorted_codes(t)), values[v].covered, values[v].dense,
                       static_cast<std::uint32_t>(v), kLeaf});
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> unions;
    const auto unite = [&](std::uint32_t a, std::uint32_t b) {
      if (a > b) std::swap(a, b);
      auto it = unions.find({a, b});
      if (it != unions.end()) return it->second;
      const KeyId j = key_union(labels[a].first, labels[b].first);
      const auto id = label_of(j, merged(labels[a].second, labels[b].second));
      unions.emplace(std::make_pair(a, b), id);
      return id;
    };
    std::set<std::uint32_t> emitted;
    const auto nodes = union_closure(local, unite, "shuffle keys");
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      const UnionNode& n = nodes[i];
      if (labels[n.label].first != k || !admissible(n, all_kinds) || !emitted.insert(n.label).second)
        continue;
      std::vector<Theory> ms;
      for (auto c : labels[n.label].second) ms.push_back(theory_of(c));
      out.push_back({make_point_theory(sig, around, std::move(ms)), union_leaves(nodes, i)});
    }
  }
  return out;
}

// Theories of extended shuffle words: the payload of shuffle(kinds).
std::vector<Theory> dense_sums(std::span<const Theory> kinds) {
  if (kinds.size() > kMaxShuffleKinds) throw ResourceError("shuffle kinds", kinds.size());
  KindSet all_kinds;
  for (std::size_t k = 0; k < kinds.size(); ++k) all_kinds.set(k);

  std::vector<Piece> pieces;
  std::unordered_map<Piece, std::size_t, PieceHash> index;
  std::unordered_map<Theory, KindSet> letter_kinds;
  const auto add = [&](const Piece& p) {
    if (index.emplace(p, pieces.size()).second) {
      pieces.push_back(p);
      check_budget("shuffle closure", pieces.size());
    }
  };
  for (std::size_t k = 0; k < kinds.size(); ++k)
    for (const auto& l : kinds[k].members()) {
      letter_kinds[l].set(k);
      add({l, true, true, true});
    }

  std::size_t done = 0;
  for (;;) {
    // Close under sums and omega powers that keep the word dense.
    for (; done < pieces.size(); ++done) {
      const std::size_t i = done;
      for (std::size_t j = 0; j <= i; ++j) {
        const Piece x = pieces[i];
        const Piece y = pieces[j];
        if (!(x.max && y.min)) add({compose_sum(x.value, y.value), x.min, y.max, false});
        if (!(y.max && x.min)) add({compose_sum(y.value, x.value), y.min, x.max, false});
      }
      const Piece x = pieces[i];
      if (!(x.min && x.max)) {
        add({omega_power(x.value), x.min, false, false});
        add({omega_star_power(x.value), false, x.max, false});
      }
    }

    // A value set may be shuffled in when every kind stays dense: it holds a
    // value already seen densely, or its letters meet every kind.
    std::vector<Value> values;
    std::unordered_map<Theory, std::size_t> value_index;
    for (const auto& p : pieces) {
      auto [it, fresh] = value_index.emplace(p.value, values.size());
      if (fresh) {
        const auto lk = letter_kinds.find(p.value);
        values.push_back({p.value, lk == letter_kinds.end() ? KindSet{} : lk->second, false});
      }
      if (!p.letter) values[it->second].dense = true;
    }
    const std::size_t before = pieces.size();
    const bool points = !values.front().theory.is_base() && values.front().theory.point_round() &&
                        !generic_keys.load();
    for (const auto& t : points ? point_shuffles(values, all_kinds) : keyed_shuffles(values, all_kinds))
      add({t.theory, false, false, false});
    if (pieces.size() == before) break;
  }

  std::vector<Theory> out;
  for (const auto& p : pieces)
    if (!p.min && !p.max && !p.letter) out.push_back(p.value);
  return out;
}

struct KindsHash {
  std::size_t operator()(const std::vector<NodePtr>& v) const {
    std::size_t h = v.size();
    for (auto p : v) h = h * 0x9e3779b97f4a7c15ULL ^ std::hash<NodePtr>{}(p);
    return h;
  }
};

std::mutex shuffle_mutex;
std::unordered_map<std::vector<NodePtr>, Theory, KindsHash> shuffle_memo;

}  // namespace

Theory shuffle(std::span<const Theory> kinds) {
  if (kinds.empty()) throw DomainError("shuffle: empty kind set");
  std::vector<Theory> ks(kinds.begin(), kinds.end());
  for (const auto& k : ks) {
    require_same_signature(k, ks.front(), "shuffle");
    if (surely_empty(k)) throw DomainError("shuffle: empty-model kind");
  }
  std::sort(ks.begin(), ks.end(), CanonicalLess{});
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<NodePtr> key;
  for (const auto& k : ks) key.push_back(k.node());
  if (generic_keys.load()) key.push_back(nullptr);
  {
    std::lock_guard lock(shuffle_mutex);
    if (auto it = shuffle_memo.find(key); it != shuffle_memo.end()) return it->second;
  }
  Theory result;
  if (ks.front().is_base()) {
    result = make_base(base_concat(ks, true), ks.front().signature().schema,
                       ks.front().signature().points);
  } else if (ks.front().point_round()) {
    // Both sides of the point are shuffles of all kinds, empty-marked.
    std::vector<Theory> es;
    for (const auto& k : ks) es.push_back(k.empty_extension());
    const Theory around = shuffle(es);
    std::vector<Theory> ms;
    for (const auto& k : ks)
      for (const auto& x : k.members()) ms.push_back(compose_sum(compose_sum(around, x), around));
    result = make_point_theory(ks.front().signature(), around, std::move(ms));
  } else {
    result = make_theory(ks.front().signature(), dense_sums(ks));
  }
  std::lock_guard lock(shuffle_mutex);
  shuffle_memo.emplace(std::move(key), result);
  return result;
}

std::vector<std::pair<Theory, std::vector<std::size_t>>> subset_shuffles(std::span<const Theory> values) {
  std::vector<Value> vs;
  for (const auto& v : values) {
    require_same_signature(v, values.front(), "subset_shuffles");
    if (!surely_empty(v)) vs.push_back({v, {}, true});
  }
  std::vector<std::size_t> back;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!surely_empty(values[i])) back.push_back(i);
  std::vector<std::pair<Theory, std::vector<std::size_t>>> out;
  if (vs.empty()) return out;
  const bool points = !vs.front().theory.is_base() && vs.front().theory.point_round() && !generic_keys.load();
  std::unordered_set<Theory> seen;
  for (auto& s : points ? point_shuffles(vs, KindSet{}) : keyed_shuffles(vs, KindSet{})) {
    if (!seen.insert(s.theory).second) continue;
    std::vector<std::size_t> idx;
    for (auto p : s.parts) idx.push_back(back[p]);
    out.emplace_back(s.theory, std::move(idx));
  }
  return out;
}

namespace detail {
void set_generic_shuffle(bool on) { generic_keys.store(on); }
}  // namespace detail

}  // namespace mso
