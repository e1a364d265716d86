#include "mso/oracle.hpp"

#include <random>
#include <string>

#include "mso/errors.hpp"

namespace mso {

namespace {

void check_caps(int depth, const LabeledFiniteOrder& w, const OracleCaps& caps) {
  const int n = static_cast<int>(w.size());
  if (n > caps.max_size || depth > caps.max_depth || depth * n > caps.max_depth_times_size)
    throw ResourceError("brute-force check (depth " + std::to_string(depth) + ", size " + std::to_string(n) + ")",
                        static_cast<std::size_t>(depth * n));
}

std::uint64_t predicate_mask(const LabeledFiniteOrder& w, int p) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if ((w.letters[i] >> p) & 1U) m |= std::uint64_t{1} << i;
  return m;
}

// Elements are stored as one-bit masks so both kinds share one environment.
struct Binding {
  const std::string* name;
  std::uint64_t value;
};

class Brute {
 public:
  explicit Brute(const LabeledFiniteOrder& w) : w_(w), n_(static_cast<int>(w.size())) {}

  bool eval(const Formula& f) {
    switch (f.op) {
      case FormulaOp::Exists:
      case FormulaOp::Forall: {
        const bool want = f.op == FormulaOp::Exists;
        const auto try_value = [&](std::uint64_t v) {
          env_.push_back({&f.var, v});
          const bool r = eval(*f.children[0]);
          env_.pop_back();
          return r;
        };
        if (f.kind == VarKind::Element) {
          for (int i = 0; i < n_; ++i)
            if (try_value(std::uint64_t{1} << i) == want) return want;
        } else {
          for (std::uint64_t s = 0; s < (std::uint64_t{1} << n_); ++s)
            if (try_value(s) == want) return want;
        }
        return !want;
      }
      case FormulaOp::Not: return !eval(*f.children[0]);
      case FormulaOp::And: return eval(*f.children[0]) && eval(*f.children[1]);
      case FormulaOp::Or: return eval(*f.children[0]) || eval(*f.children[1]);
      case FormulaOp::Implies: return !eval(*f.children[0]) || eval(*f.children[1]);
      case FormulaOp::Less: return lookup(f.left) < lookup(f.right);
      case FormulaOp::Equal: return lookup(f.left) == lookup(f.right);
      case FormulaOp::In: return (lookup(f.left) & lookup(f.right)) != 0;
      case FormulaOp::Subset: return (lookup(f.left) & ~lookup(f.right)) == 0;
    }
    return false;
  }

 private:
  std::uint64_t lookup(const VarRef& r) const {
    if (r.is_predicate()) return predicate_mask(w_, r.predicate);
    for (std::size_t i = env_.size(); i-- > 0;)
      if (*env_[i].name == r.name) return env_[i].value;
    throw UnboundVariableError("unbound variable " + r.name);
  }

  const LabeledFiniteOrder& w_;
  int n_;
  std::vector<Binding> env_;
};

class BruteNormal {
 public:
  explicit BruteNormal(const LabeledFiniteOrder& w) : w_(w), n_(static_cast<int>(w.size())) {}

  bool eval(const NormalFormula& f) {
    switch (f.op) {
      case NormalOp::Exists:
      case NormalOp::Forall: {
        const bool want = f.op == NormalOp::Exists;
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n_); ++s) {
          env_.push_back(s);
          const bool r = eval(*f.children[0]);
          env_.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
      case NormalOp::Not: return !eval(*f.children[0]);
      case NormalOp::And: return eval(*f.children[0]) && eval(*f.children[1]);
      case NormalOp::Or: return eval(*f.children[0]) || eval(*f.children[1]);
      case NormalOp::Implies: return !eval(*f.children[0]) || eval(*f.children[1]);
      case NormalOp::SetLess: {
        const std::uint64_t a = lookup(f.left);
        const std::uint64_t b = lookup(f.right);
        for (int i = 0; i < n_; ++i)
          for (int j = i + 1; j < n_; ++j)
            if (((a >> i) & 1U) && ((b >> j) & 1U)) return true;
        return false;
      }
      case NormalOp::Subset: return (lookup(f.left) & ~lookup(f.right)) == 0;
      case NormalOp::Nonempty: return lookup(f.left) != 0;
      case NormalOp::Singleton: {
        const std::uint64_t a = lookup(f.left);
        return a != 0 && (a & (a - 1)) == 0;
      }
    }
    return false;
  }

 private:
  std::uint64_t lookup(const NormalRef& r) const {
    if (r.predicate >= 0) return predicate_mask(w_, r.predicate);
    return env_.at(static_cast<std::size_t>(r.level));
  }

  const LabeledFiniteOrder& w_;
  int n_;
  std::vector<std::uint64_t> env_;
};

// ---------------------------------------------------------------------------
// Generator

class Generator {
 public:
  Generator(std::uint64_t seed, int predicates) : rng_(seed), predicates_(predicates) {}

  FormulaPtr sentence(int depth) {
    scope_.clear();
    counter_ = 0;
    const int d = 1 + below(depth);
    return quantified(d, 2);
  }

 private:
  int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool coin(int percent) { return below(100) < percent; }

  FormulaPtr quantified(int depth, int connectives) {
    const FormulaOp op = coin(50) ? FormulaOp::Exists : FormulaOp::Forall;
    const VarKind kind = coin(60) ? VarKind::Element : VarKind::Set;
    const std::string name = (kind == VarKind::Element ? "x" : "X") + std::to_string(++counter_);
    scope_.push_back({name, kind});
    FormulaPtr body = formula(depth - 1, connectives, true);
    scope_.pop_back();
    return Formula::quantifier(op, kind, name, body);
  }

  // `depth` quantifier levels must still be produced somewhere below when
  // `exact` is set.
  FormulaPtr formula(int depth, int connectives, bool exact) {
    if (depth > 0 && (exact || coin(50))) {
      if (connectives > 0 && coin(40)) {
        const FormulaOp op = pick_binary();
        FormulaPtr a = formula(depth, connectives - 1, true);
        FormulaPtr b = formula(depth, connectives - 1, false);
        if (coin(50)) std::swap(a, b);
        return Formula::binary(op, a, b);
      }
      if (connectives > 0 && coin(20)) return Formula::negation(quantified(depth, connectives - 1));
      return quantified(depth, connectives);
    }
    if (connectives > 0 && coin(50)) {
      if (coin(25)) return Formula::negation(formula(0, connectives - 1, false));
      return Formula::binary(pick_binary(), formula(0, connectives - 1, false), formula(0, connectives - 1, false));
    }
    return atom();
  }

  FormulaOp pick_binary() {
    switch (below(3)) {
      case 0: return FormulaOp::And;
      case 1: return FormulaOp::Or;
      default: return FormulaOp::Implies;
    }
  }

  FormulaPtr atom() {
    std::vector<VarRef> elems;
    std::vector<VarRef> sets;
    for (const auto& [name, kind] : scope_) (kind == VarKind::Element ? elems : sets).push_back({name, -1});
    for (int p = 0; p < predicates_; ++p) sets.push_back({"", p});
    std::vector<FormulaOp> ops;
    if (!elems.empty()) {
      ops.push_back(FormulaOp::Less);
      ops.push_back(FormulaOp::Equal);
      if (!sets.empty()) ops.push_back(FormulaOp::In);
    }
    if (!sets.empty()) ops.push_back(FormulaOp::Subset);
    const FormulaOp op = ops[static_cast<std::size_t>(below(static_cast<int>(ops.size())))];
    const auto any = [&](const std::vector<VarRef>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; };
    switch (op) {
      case FormulaOp::Less:
      case FormulaOp::Equal: return Formula::atom(op, any(elems), any(elems));
      case FormulaOp::In: return Formula::atom(op, any(elems), any(sets));
      default: return Formula::atom(op, any(sets), any(sets));
    }
  }

  std::mt19937_64 rng_;
  int predicates_;
  int counter_ = 0;
  std::vector<std::pair<std::string, VarKind>> scope_;
};

}  // namespace

bool brute_check(const Formula& f, const LabeledFiniteOrder& w, const OracleCaps& caps) {
  check_caps(quantifier_depth(f), w, caps);
  return Brute(w).eval(f);
}

bool brute_check(const NormalFormula& f, const LabeledFiniteOrder& w, const OracleCaps& caps) {
  check_caps(quantifier_depth(f), w, caps);
  return BruteNormal(w).eval(f);
}

std::vector<FormulaPtr> enumerate_sentences(int depth, int count, std::uint64_t seed, int predicates) {
  if (depth < 1) throw DomainError("enumerate_sentences needs depth >= 1");
  Generator g(seed, predicates);
  std::vector<FormulaPtr> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(g.sentence(depth));
  return out;
}

}  // namespace mso
