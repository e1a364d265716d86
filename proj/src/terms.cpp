#include "mso/terms.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <tuple>

#include "mso/algebra.hpp"
#include "mso/errors.hpp"

namespace mso {

namespace {

TermPtr make(TermKind k, std::vector<TermPtr> args = {}) {
  auto t = std::make_shared<OrderTerm>();
  t->kind = k;
  t->args = std::move(args);
  return t;
}

}  // namespace

TermPtr OrderTerm::zero() {
  static const TermPtr z = make(TermKind::Zero);
  return z;
}

TermPtr OrderTerm::one() {
  static const TermPtr o = make(TermKind::One);
  return o;
}

TermPtr OrderTerm::sum(TermPtr a, TermPtr b) { return make(TermKind::Sum, {std::move(a), std::move(b)}); }
TermPtr OrderTerm::omega_times(TermPtr a) { return make(TermKind::OmegaTimes, {std::move(a)}); }
TermPtr OrderTerm::omega_star_times(TermPtr a) { return make(TermKind::OmegaStarTimes, {std::move(a)}); }

TermPtr OrderTerm::shuffle(std::vector<TermPtr> kinds) {
  if (kinds.empty()) throw DomainError("shuffle term needs at least one kind");
  std::vector<std::pair<std::string, TermPtr>> keyed;
  for (auto& k : kinds) keyed.emplace_back(to_string(*k), std::move(k));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<TermPtr> args;
  for (auto& [s, k] : keyed) args.push_back(std::move(k));
  return make(TermKind::Shuffle, std::move(args));
}

TermPtr OrderTerm::numeral(unsigned n) {
  if (n == 0) return zero();
  TermPtr t = one();
  for (unsigned i = 1; i < n; ++i) t = sum(t, one());
  return t;
}

TermPtr OrderTerm::omega_pow(unsigned q) {
  TermPtr t = one();
  for (unsigned i = 0; i < q; ++i) t = omega_times(t);
  return t;
}

TermPtr OrderTerm::zeta() { return sum(omega_star_times(one()), omega_times(one())); }
TermPtr OrderTerm::eta() { return shuffle({one()}); }

bool operator==(const OrderTerm& a, const OrderTerm& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Numeral value of a left-nested sum of ones, or 0.
unsigned numeral_value(const OrderTerm& t) {
  if (t.kind == TermKind::One) return 1;
  if (t.kind == TermKind::Sum && t.args[1]->kind == TermKind::One) {
    const unsigned k = numeral_value(*t.args[0]);
    return k == 0 ? 0 : k + 1;
  }
  return 0;
}

unsigned omega_exponent(const OrderTerm& t) {
  if (t.kind == TermKind::One) return 0;
  if (t.kind == TermKind::OmegaTimes) {
    const unsigned q = omega_exponent(*t.args[0]);
    return q == ~0U ? q : q + 1;
  }
  return ~0U;
}

enum Level { kSum = 0, kSummand = 1, kAtom = 2 };

std::pair<std::string, Level> render(const OrderTerm& t) {
  if (const unsigned n = numeral_value(t); n > 0) return {std::to_string(n), kAtom};
  if (const unsigned q = omega_exponent(t); q != ~0U && q > 0)
    return {q == 1 ? "omega" : "omega^" + std::to_string(q), kAtom};
  if (t.kind == TermKind::OmegaStarTimes && t.args[0]->kind == TermKind::One) return {"omegaStar", kAtom};
  if (t == *OrderTerm::zeta()) return {"zeta", kAtom};
  if (t == *OrderTerm::eta()) return {"eta", kAtom};
  const auto wrap = [](const std::pair<std::string, Level>& r, Level need) {
    return r.second < need ? "(" + r.first + ")" : r.first;
  };
  switch (t.kind) {
    case TermKind::Zero: return {"0", kAtom};
    case TermKind::One: return {"1", kAtom};
    case TermKind::Sum:
      return {wrap(render(*t.args[0]), kSum) + "+" + wrap(render(*t.args[1]), kSummand), kSum};
    case TermKind::OmegaTimes: return {wrap(render(*t.args[0]), kSummand) + "*omega", kSummand};
    case TermKind::OmegaStarTimes: return {wrap(render(*t.args[0]), kSummand) + "*omegaStar", kSummand};
    case TermKind::Shuffle: {
      std::string s = "shuffle(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i > 0) s += ", ";
        s += render(*t.args[i]).first;
      }
      return {s + ")", kAtom};
    }
  }
  return {"?", kAtom};
}

// ---------------------------------------------------------------------------
// Parsing

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  TermPtr run() {
    TermPtr t = term();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    int col = 1;
    for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(i_ >= s_.size() ? msg + " at end of input" : msg, line, col);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  std::string word() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
    std::string w(s_.substr(i_, j - i_));
    i_ = j;
    return w;
  }

  unsigned number() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) fail("expected a number");
    if (j - i_ > 6) fail("number too large");
    const unsigned v = static_cast<unsigned>(std::stoul(std::string(s_.substr(i_, j - i_))));
    i_ = j;
    return v;
  }

  TermPtr term() {
    TermPtr t = summand();
    while (eat('+')) t = OrderTerm::sum(t, summand());
    return t;
  }

  TermPtr summand() {
    TermPtr t = atom();
    while (eat('*')) {
      const std::size_t at = i_;
      const std::string w = word();
      if (w == "omega") {
        t = OrderTerm::omega_times(t);
      } else if (w == "omegaStar") {
        t = OrderTerm::omega_star_times(t);
      } else {
        i_ = at;
        skip();
        fail("expected 'omega' or 'omegaStar' after '*'");
      }
    }
    return t;
  }

  TermPtr atom() {
    skip();
    if (i_ >= s_.size()) fail("expected a term");
    if (std::isdigit(static_cast<unsigned char>(s_[i_]))) return OrderTerm::numeral(number());
    if (eat('(')) {
      TermPtr t = term();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    const std::size_t at = i_;
    const std::string w = word();
    if (w == "omega") {
      if (eat('^')) return OrderTerm::omega_pow(number());
      return OrderTerm::omega_pow(1);
    }
    if (w == "omegaStar") return OrderTerm::omega_star_times(OrderTerm::one());
    if (w == "zeta") return OrderTerm::zeta();
    if (w == "eta") return OrderTerm::eta();
    if (w == "shuffle") {
      if (!eat('(')) fail("expected '(' after shuffle");
      std::vector<TermPtr> kinds{term()};
      while (eat(',')) kinds.push_back(term());
      if (!eat(')')) fail("expected ')'");
      return OrderTerm::shuffle(std::move(kinds));
    }
    i_ = at;
    fail(w.empty() ? "expected a term" : "unknown name '" + w + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

bool denotes_empty(const OrderTerm& t) {
  switch (t.kind) {
    case TermKind::Zero: return true;
    case TermKind::One: return false;
    case TermKind::Sum: return denotes_empty(*t.args[0]) && denotes_empty(*t.args[1]);
    case TermKind::OmegaTimes:
    case TermKind::OmegaStarTimes: return denotes_empty(*t.args[0]);
    case TermKind::Shuffle:
      return std::all_of(t.args.begin(), t.args.end(), [](const TermPtr& a) { return denotes_empty(*a); });
  }
  return false;
}

struct MemoKey {
  std::string term;
  int rounds;
  int predicates;
  SchemaId schema;
  std::uint8_t points;
  auto operator<=>(const MemoKey&) const = default;
};

std::mutex memo_mutex;
std::map<MemoKey, Theory> memo;

Theory eval_rec(const OrderTerm& t, Signature sig) {
  if (denotes_empty(t)) return empty_theory(sig);
  const MemoKey key{to_string(t), sig.rounds, sig.predicates, sig.schema, sig.points};
  {
    std::lock_guard lock(memo_mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  Theory r;
  switch (t.kind) {
    case TermKind::Zero: r = empty_theory(sig); break;
    case TermKind::One: r = point_theory(sig); break;
    case TermKind::Sum: r = compose_sum(eval_rec(*t.args[0], sig), eval_rec(*t.args[1], sig)); break;
    case TermKind::OmegaTimes: r = omega_power(eval_rec(*t.args[0], sig)); break;
    case TermKind::OmegaStarTimes: r = omega_star_power(eval_rec(*t.args[0], sig)); break;
    case TermKind::Shuffle: {
      // Empty kinds add nothing to a dense sum.
      std::vector<Theory> kinds;
      for (const auto& a : t.args)
        if (!denotes_empty(*a)) kinds.push_back(eval_rec(*a, sig));
      r = shuffle(kinds);
      break;
    }
  }
  std::lock_guard lock(memo_mutex);
  memo.emplace(key, r);
  return r;
}

}  // namespace

std::string to_string(const OrderTerm& t) { return render(t).first; }

TermPtr parse_term(std::string_view text) { return TermParser(text).run(); }

bool is_finite(const OrderTerm& t) {
  if (t.kind == TermKind::OmegaTimes || t.kind == TermKind::OmegaStarTimes || t.kind == TermKind::Shuffle)
    return denotes_empty(t);
  return std::all_of(t.args.begin(), t.args.end(), [](const TermPtr& a) { return is_finite(*a); });
}

LabeledFiniteOrder expand_finite(const OrderTerm& t) {
  if (!is_finite(t)) throw DomainError("expand_finite: term " + to_string(t) + " denotes an infinite order");
  LabeledFiniteOrder w;
  const auto count = [](const auto& self, const OrderTerm& u) -> std::size_t {
    if (u.kind == TermKind::One) return 1;
    if (u.kind == TermKind::Sum) return self(self, *u.args[0]) + self(self, *u.args[1]);
    return 0;
  };
  w.letters.assign(count(count, t), 0);
  return w;
}

Theory eval_term(const OrderTerm& t, Signature sig) { return eval_rec(t, sig); }

}  // namespace mso
