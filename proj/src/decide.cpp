#include "mso/decide.hpp"

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mso/algebra.hpp"
#include "mso/budget.hpp"
#include "mso/errors.hpp"
#include "mso/theory_core.hpp"

namespace mso {

namespace {

NormalPtr sentence(const Formula& f, const char* who) {
  if (predicate_count(f) > 0)
    throw DomainError(std::string(who) + ": sentences may not mention predicate constants");
  return normalize(f);
}

// Theories with one generating term each, in discovery order.
class TaggedClosure {
 public:
  bool add(const Theory& t, const TermPtr& term) {
    if (!index_.emplace(t, items_.size()).second) return false;
    items_.push_back(t);
    terms_.push_back(term);
    check_budget("order closure", items_.size());
    return true;
  }
  std::size_t size() const { return items_.size(); }
  const Theory& theory(std::size_t i) const { return items_[i]; }
  const TermPtr& term(std::size_t i) const { return terms_[i]; }
  const std::vector<Theory>& theories() const { return items_; }

 private:
  std::vector<Theory> items_;
  std::vector<TermPtr> terms_;
  std::unordered_map<Theory, std::size_t> index_;
};

// Closes under sums and omega powers, plus omega* powers and shuffles of
// subsets when `countable`.  Stops early once a member satisfies f.
SatReport saturate(const NormalFormula& f, bool countable) {
  const Signature sig = signature_for(f, 0);
  SatReport r;
  if (satisfies(empty_theory(sig), f)) {
    r.satisfiable = true;
    r.witness = OrderTerm::zero();
    return r;
  }
  TaggedClosure c;
  const auto found = [&](std::size_t i) {
    if (!satisfies(c.theory(i), f)) return false;
    r.satisfiable = true;
    r.witness = c.term(i);
    r.closure_size = c.size();
    return true;
  };
  c.add(point_theory(sig), OrderTerm::one());
  std::size_t checked = 0;
  std::size_t done = 0;
  for (;;) {
    for (; done < c.size(); ++done) {
      for (; checked < c.size(); ++checked)
        if (found(checked)) return r;
      const std::size_t i = done;
      for (std::size_t j = 0; j <= i; ++j) {
        const Theory a = c.theory(i);
        const Theory b = c.theory(j);
        const TermPtr ta = c.term(i);
        const TermPtr tb = c.term(j);
        c.add(compose_sum(a, b), OrderTerm::sum(ta, tb));
        c.add(compose_sum(b, a), OrderTerm::sum(tb, ta));
      }
      const Theory a = c.theory(i);
      const TermPtr ta = c.term(i);
      c.add(omega_power(a), OrderTerm::omega_times(ta));
      if (countable) c.add(omega_star_power(a), OrderTerm::omega_star_times(ta));
    }
    for (; checked < c.size(); ++checked)
      if (found(checked)) return r;
    if (!countable) break;
    const std::size_t before = c.size();
    for (const auto& [t, parts] : subset_shuffles(c.theories())) {
      std::vector<TermPtr> kinds;
      for (auto p : parts) kinds.push_back(c.term(p));
      c.add(t, OrderTerm::shuffle(std::move(kinds)));
    }
    if (c.size() == before) break;
  }
  r.closure_size = c.size();
  return r;
}

}  // namespace

DecideReport decide(const Formula& f, const OrderTerm& t, const DecideOptions& opts) {
  const NormalPtr nf = sentence(f, "decide");
  DecideReport r;
  r.depth = quantifier_depth(*nf);
  Theory th;
  if (opts.depth_override) {
    if (*opts.depth_override < r.depth)
      throw DomainError("decide: depth override " + std::to_string(*opts.depth_override) +
                        " is below the sentence depth " + std::to_string(r.depth));
    r.signature = signature_for(*nf, 0, true);
    r.signature.rounds = *opts.depth_override;
    th = eval_term(t, r.signature);
    r.theory_size = th.size();
    th = project(th, r.depth);
  } else {
    r.signature = signature_for(*nf, 0);
    th = eval_term(t, r.signature);
    r.theory_size = th.size();
  }
  r.internal_depth = r.signature.rounds;
  r.verdict = satisfies(th, *nf);
  return r;
}

FiniteClassReport decide_finite_class(const Formula& f) {
  const NormalPtr nf = sentence(f, "decide_finite_class");
  const Signature sig = signature_for(*nf, 0);
  FiniteClassReport r;
  r.holds_in_empty = satisfies(empty_theory(sig), *nf);
  r.bound = formally_possible_count({sig.rounds, 0, kFullSchema, 0});

  // The theory of the (q+1)-chain is that of the q-chain plus a point, so
  // the sizes 1..q cover every finite theory once the next one repeats.
  const Theory point = point_theory(sig);
  std::unordered_set<Theory> seen;
  Theory cur = point;
  for (unsigned q = 1;; ++q) {
    seen.insert(cur);
    check_budget("finite closure", seen.size());
    const bool holds = satisfies(cur, *nf);
    if (holds && !r.witness) r.witness = q;
    if (!holds && !r.counterexample) r.counterexample = q;
    cur = compose_sum(cur, point);
    if (seen.count(cur) != 0) {
      r.fixed_point = q;
      break;
    }
  }
  r.satisfiable = r.witness.has_value();
  r.valid = !r.counterexample.has_value();
  return r;
}

SatReport decide_countable_sat(const Formula& f) {
  return saturate(*sentence(f, "decide_countable_sat"), true);
}

SatReport decide_countable_ordinal_sat(const Formula& f) {
  return saturate(*sentence(f, "decide_countable_ordinal_sat"), false);
}

std::pair<unsigned, unsigned> ordinal_stabilize(Signature sig) {
  std::unordered_map<Theory, unsigned> first;
  Theory cur = point_theory(sig);
  for (unsigned p = 1;; ++p) {
    cur = omega_power(cur);
    auto [it, fresh] = first.emplace(cur, p);
    if (!fresh) return {it->second, p};
    check_budget("ordinal stabilization", first.size());
  }
}

std::optional<std::uint64_t> stabilization_bound(int rounds) {
  const auto n = formally_possible_count({rounds, 0, kFullSchema, 0});
  if (!n || *n > (std::uint64_t{1} << 61)) return std::nullopt;
  return 2 * *n + 1;
}

}  // namespace mso
