#include "mso/theory_core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mso/budget.hpp"
#include "mso/errors.hpp"

namespace mso {

// ---------------------------------------------------------------------------
// Words

LabeledFiniteOrder parse_word(std::string_view text, int predicates) {
  LabeledFiniteOrder w;
  w.predicates = predicates;
  const bool dotted = text.find('.') != std::string_view::npos;
  std::vector<std::string> tokens;
  std::string cur;
  bool any = false;
  for (char c : text) {
    const bool sep = dotted ? c == '.' : std::isspace(static_cast<unsigned char>(c)) != 0;
    if (sep) {
      if (dotted || !cur.empty()) tokens.push_back(cur);
      cur.clear();
      any = false;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
      any = true;
    }
  }
  if (any || (dotted && !tokens.empty())) tokens.push_back(cur);

  const Letter limit = predicates >= 32 ? ~Letter{0} : (Letter{1} << predicates);
  for (const auto& tok : tokens) {
    Letter l = 0;
    if (tok.empty() || tok == "-") {
      l = 0;
    } else if (std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      l = static_cast<Letter>(std::stoul(tok));
    } else {
      for (char c : tok) {
        if (c < 'a' || c > 'z') throw DomainError("bad letter '" + tok + "' in word");
        l |= Letter{1} << (c - 'a');
      }
    }
    if (predicates < 32 && l >= limit)
      throw DomainError("letter '" + tok + "' uses more than " + std::to_string(predicates) + " predicates");
    w.letters.push_back(l);
  }
  return w;
}

std::string to_string(const LabeledFiniteOrder& w) {
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i > 0) out += '.';
    if (w.letters[i] == 0) {
      out += '-';
      continue;
    }
    for (int b = 0; b < 32; ++b)
      if ((w.letters[i] >> b) & 1U) out += static_cast<char>('a' + b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite evaluation

namespace {

Theory eval_word(std::vector<Letter>& letters, Signature sig) {
  if (sig.rounds == 0)
    return make_base(BaseFacts::of_word(sig.predicates, letters), sig.schema, sig.points);
  const Signature low = sig.lower();
  const Letter bit = Letter{1} << sig.predicates;
  const std::size_t n = letters.size();
  if (sig.point_round()) {
    const Theory e = eval_word(letters, low);
    std::vector<Theory> singles;
    for (std::size_t i = 0; i < n; ++i) {
      letters[i] |= bit;
      singles.push_back(eval_word(letters, low));
      letters[i] &= ~bit;
    }
    return make_point_theory(sig, e, std::move(singles));
  }
  if (n >= 63) throw ResourceError("finite extension count", n);
  check_budget("finite extensions", std::size_t{1} << n);
  std::vector<Theory> members;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) letters[i] |= bit;
    members.push_back(eval_word(letters, low));
    for (std::size_t i = 0; i < n; ++i) letters[i] &= ~bit;
  }
  return make_theory(sig, std::move(members));
}

}  // namespace

Theory eval_finite(const LabeledFiniteOrder& w, Signature sig) {
  if (sig.base_predicates() > kMaxPredicates)
    throw DomainError("signature needs more than " + std::to_string(kMaxPredicates) + " predicates");
  for (Letter l : w.letters)
    if (sig.predicates < 32 && (l >> sig.predicates) != 0)
      throw DomainError("word letter outside the signature's predicates");
  std::vector<Letter> letters = w.letters;
  return eval_word(letters, sig);
}

// ---------------------------------------------------------------------------
// Formal possibilities

namespace {

// Consistency of base facts: a predicate is included in itself, an empty
// predicate is included in everything, a nonempty one only in nonempty ones,
// and order facts need both sides nonempty.
std::vector<Theory> possible_bases(int k) {
  std::vector<Theory> out;
  for (std::uint32_t ne = 0; ne < (1U << k); ++ne) {
    std::vector<std::pair<int, int>> free_subset;
    std::vector<std::pair<int, int>> free_less;
    BaseFacts f(k);
    for (int i = 0; i < k; ++i) {
      const bool ni = (ne >> i) & 1U;
      f.set_nonempty(i, ni);
      for (int j = 0; j < k; ++j) {
        const bool nj = (ne >> j) & 1U;
        if (i == j || !ni) {
          f.set_subset(i, j);
        } else if (nj) {
          free_subset.emplace_back(i, j);
        }
        if (ni && nj) free_less.emplace_back(i, j);
      }
    }
    const std::size_t bits = free_subset.size() + free_less.size();
    if (bits >= 40) throw ResourceError("formally possible base theories", std::size_t{1} << 40);
    check_budget("formally possible base theories", out.size() + (std::size_t{1} << bits));
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) {
      std::size_t b = 0;
      for (auto [i, j] : free_subset) f.set_subset(i, j, (m >> b++) & 1U);
      for (auto [i, j] : free_less) f.set_less(i, j, (m >> b++) & 1U);
      out.push_back(make_base(f));
    }
  }
  return out;
}

}  // namespace

std::vector<Theory> formally_possible(Signature sig) {
  if (sig.schema != kFullSchema || sig.points != 0)
    throw DomainError("formally_possible needs the full schema and set rounds");
  if (sig.base_predicates() > kMaxPredicates) throw DomainError("too many predicates");
  if (sig.rounds == 0) return possible_bases(sig.predicates);
  const auto count = formally_possible_count(sig);
  if (!count || *count > element_budget())
    throw ResourceError("formally possible theories", count ? static_cast<std::size_t>(*count) : ~std::size_t{0});
  const std::vector<Theory> low = formally_possible(sig.lower());
  std::vector<Theory> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << low.size()); ++mask) {
    std::vector<Theory> ms;
    for (std::size_t i = 0; i < low.size(); ++i)
      if ((mask >> i) & 1U) ms.push_back(low[i]);
    out.push_back(make_theory(sig, std::move(ms)));
  }
  return out;
}

std::optional<std::uint64_t> formally_possible_count(Signature sig) {
  if (sig.rounds == 0) {
    const int k = sig.predicates;
    std::uint64_t total = 0;
    for (int a = 0; a <= k; ++a) {
      std::uint64_t choose = 1;
      for (int i = 0; i < a; ++i) choose = choose * static_cast<std::uint64_t>(k - i) / static_cast<std::uint64_t>(i + 1);
      const int bits = a * (a - 1) + a * a;
      if (bits >= 63) return std::nullopt;
      total += choose << bits;
    }
    return total;
  }
  const auto low = formally_possible_count(sig.lower());
  if (!low || *low >= 63) return std::nullopt;
  return std::uint64_t{1} << *low;
}

// ---------------------------------------------------------------------------
// Forgetting and projection

namespace {

SchemaId shifted_schema(SchemaId schema, int predicates, int index) {
  if (schema == kFullSchema) return kFullSchema;
  std::vector<Atom> kept;
  const auto shift = [&](int i) { return i > index ? i - 1 : i; };
  for (const Atom& a : schema_atoms(schema, predicates)) {
    if (a.left == index || (a.kind != AtomKind::Nonempty && a.right == index)) continue;
    kept.push_back({a.kind, shift(a.left), a.kind == AtomKind::Nonempty ? 0 : shift(a.right)});
  }
  return register_schema(kept);
}

std::uint8_t shifted_points(std::uint8_t points, int index) {
  const unsigned low = points & ((1U << index) - 1U);
  const unsigned high = (static_cast<unsigned>(points) >> (index + 1)) << index;
  return static_cast<std::uint8_t>(low | high);
}

Theory forget_rec(const Theory& t, int index, SchemaId schema, std::uint8_t points) {
  const Signature s = t.signature();
  if (t.is_base()) {
    const BaseFacts in = facts_of(t);
    const int k = t.predicates();
    BaseFacts out(k - 1);
    const auto src = [&](int i) { return i >= index ? i + 1 : i; };
    for (int i = 0; i < k - 1; ++i) {
      out.set_nonempty(i, in.nonempty(src(i)));
      for (int j = 0; j < k - 1; ++j) {
        out.set_subset(i, j, in.subset(src(i), src(j)));
        out.set_less(i, j, in.less(src(i), src(j)));
      }
    }
    return make_base(out, schema, points);
  }
  const Signature ns{s.rounds, s.predicates - 1, schema, points};
  std::vector<Theory> ms;
  ms.reserve(t.size());
  for (const auto& m : t.members()) ms.push_back(forget_rec(m, index, schema, points));
  if (t.point_round()) return make_point_theory(ns, forget_rec(t.empty_extension(), index, schema, points), std::move(ms));
  return make_theory(ns, std::move(ms));
}

}  // namespace

Theory forget_predicate(const Theory& t, int index) {
  const Signature s = t.signature();
  if (index < 0 || index >= s.predicates) throw DomainError("forget_predicate: index out of range");
  return forget_rec(t, index, shifted_schema(s.schema, s.base_predicates(), index), shifted_points(s.points, index));
}

Theory project(const Theory& t, int rounds) {
  if (rounds < 0 || rounds > t.rounds()) throw DomainError("project: target rounds out of range");
  Theory cur = t;
  while (cur.rounds() > rounds) {
    // Every extension forgets back to the same model; the empty one always exists.
    const Theory any = cur.point_round() ? cur.empty_extension() : cur.members().front();
    cur = forget_predicate(any, cur.predicates());
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Truth

namespace {

int index_of(const NormalRef& r, int predicates) { return r.predicate >= 0 ? r.predicate : predicates + r.level; }

void collect(const NormalFormula& f, int m, int level, std::vector<Atom>& atoms, std::vector<int>& kinds) {
  const auto idx = [&](const NormalRef& r) { return index_of(r, m); };
  switch (f.op) {
    case NormalOp::SetLess: atoms.push_back({AtomKind::Less, idx(f.left), idx(f.right)}); return;
    case NormalOp::Subset: atoms.push_back({AtomKind::Subset, idx(f.left), idx(f.right)}); return;
    case NormalOp::Nonempty: atoms.push_back({AtomKind::Nonempty, idx(f.left), 0}); return;
    case NormalOp::Singleton:
      atoms.push_back({AtomKind::Nonempty, idx(f.left), 0});
      atoms.push_back({AtomKind::Less, idx(f.left), idx(f.left)});
      return;
    default: break;
  }
  if (f.is_quantifier()) {
    // kinds[level]: bit 0 = some element quantifier, bit 1 = some set quantifier
    if (static_cast<int>(kinds.size()) <= level) kinds.resize(level + 1, 0);
    kinds[level] |= f.from_element ? 1 : 2;
    collect(*f.children[0], m, level + 1, atoms, kinds);
    return;
  }
  for (const auto& c : f.children) collect(*c, m, level, atoms, kinds);
}

struct BaseReader {
  std::span<const std::uint64_t> bits;
  int k;
  bool test(int i) const { return (bits[i / 64] >> (i % 64)) & 1U; }
};

class Evaluator {
 public:
  explicit Evaluator(int predicates) : m_(predicates) {}

  bool eval(const Theory& t, const NormalFormula& f) const {
    switch (f.op) {
      case NormalOp::Exists:
      case NormalOp::Forall: {
        const bool want = f.op == NormalOp::Exists;
        if (t.point_round() && eval(t.empty_extension(), *f.children[0]) == want) return want;
        for (const auto& x : t.members())
          if (eval(x, *f.children[0]) == want) return want;
        return !want;
      }
      case NormalOp::Not: return !eval(t, *f.children[0]);
      case NormalOp::And: return eval(t, *f.children[0]) && eval(t, *f.children[1]);
      case NormalOp::Or: return eval(t, *f.children[0]) || eval(t, *f.children[1]);
      case NormalOp::Implies: return !eval(t, *f.children[0]) || eval(t, *f.children[1]);
      default: break;
    }
    // An atom does not mention predicates added later, so any chain of
    // extensions down to the base reads it the same way.
    Theory b = t;
    while (!b.is_base()) b = b.point_round() ? b.empty_extension() : b.members().front();
    const BaseReader r{b.base_bits(), b.predicates()};
    const int k = r.k;
    const int i = index_of(f.left, m_);
    const int j = index_of(f.right, m_);
    switch (f.op) {
      case NormalOp::SetLess: return r.test(k + k * k + i * k + j);
      case NormalOp::Subset: return r.test(k + i * k + j);
      case NormalOp::Nonempty: return r.test(i);
      case NormalOp::Singleton: return r.test(i) && !r.test(k + k * k + i * k + i);
      default: break;
    }
    throw DomainError("satisfies: unknown node");
  }

 private:
  int m_;
};

}  // namespace

Signature signature_for(const NormalFormula& f, int predicates, bool full) {
  const int depth = quantifier_depth(f);
  if (predicates < predicate_count(f)) throw DomainError("formula uses more predicates than given");
  if (predicates + depth > kMaxPredicates)
    throw DomainError("formula needs " + std::to_string(predicates + depth) + " predicates, at most " +
                      std::to_string(kMaxPredicates) + " are supported");
  if (full) return {depth, predicates, kFullSchema, 0};
  std::vector<Atom> atoms;
  std::vector<int> kinds;
  collect(f, predicates, 0, atoms, kinds);
  std::uint8_t points = 0;
  for (std::size_t d = 0; d < kinds.size(); ++d)
    if (kinds[d] == 1) points = static_cast<std::uint8_t>(points | (1U << (predicates + static_cast<int>(d))));
  return {depth, predicates, register_schema(atoms), points};
}

bool satisfies(const Theory& t, const NormalFormula& f) {
  const Signature s = t.signature();
  if (quantifier_depth(f) > s.rounds)
    throw DomainError("satisfies: formula depth " + std::to_string(quantifier_depth(f)) + " exceeds theory rounds " +
                      std::to_string(s.rounds));
  if (predicate_count(f) > s.predicates) throw DomainError("satisfies: formula uses predicates the theory lacks");
  std::vector<Atom> atoms;
  std::vector<int> kinds;
  collect(f, s.predicates, 0, atoms, kinds);
  for (const auto& a : atoms)
    if (!schema_contains(s.schema, a)) throw DomainError("satisfies: theory does not record an atom the formula reads");
  for (std::size_t d = 0; d < kinds.size(); ++d)
    if ((kinds[d] & 2) && ((s.points >> (s.predicates + static_cast<int>(d))) & 1U))
      throw DomainError("satisfies: set quantifier on a point round");
  return Evaluator(s.predicates).eval(t, f);
}

}  // namespace mso
