#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "mso/algebra.hpp"
#include "mso/errors.hpp"
#include "mso/terms.hpp"
#include "mso/theory_core.hpp"

using namespace mso;
using testing::all_words;
using testing::full;

namespace {

bool holds(const Theory& t, const std::string& sentence) {
  return satisfies(t, *normalize(*parse_formula(sentence)));
}

std::vector<Theory> word_theories(int predicates, int max_len, Signature sig, int min_len = 0) {
  std::vector<Theory> out;
  for (const auto& w : all_words(predicates, max_len, min_len)) out.push_back(eval_finite(w, sig));
  std::sort(out.begin(), out.end(), CanonicalLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("the empty order is the unit of sums") {
  for (int n = 0; n <= 2; ++n)
    for (const auto& t : word_theories(1, 2, full(n, 1))) {
      CHECK(compose_sum(empty_theory(full(n, 1)), t) == t);
      CHECK(compose_sum(t, empty_theory(full(n, 1))) == t);
    }
}

TEST_CASE("sums of word theories are theories of concatenations") {
  CHECK(compose_sum(eval_finite(parse_word("a", 2), full(2, 2)), eval_finite(parse_word("b", 2), full(2, 2))) ==
        eval_finite(parse_word("a.b", 2), full(2, 2)));
  const auto ws = all_words(1, 2);
  for (const auto& u : ws)
    for (const auto& v : ws) {
      LabeledFiniteOrder uv = u;
      uv.letters.insert(uv.letters.end(), v.letters.begin(), v.letters.end());
      CHECK(compose_sum(eval_finite(u, full(2, 1)), eval_finite(v, full(2, 1))) == eval_finite(uv, full(2, 1)));
    }
}

TEST_CASE("sums are associative") {
  for (int n = 0; n <= 2; ++n) {
    const auto ts = word_theories(1, 2, full(n, 1));
    for (const auto& a : ts)
      for (const auto& b : ts)
        for (const auto& c : ts) CHECK(compose_sum(compose_sum(a, b), c) == compose_sum(a, compose_sum(b, c)));
  }
}

TEST_CASE("signature mismatches are refused") {
  CHECK_THROWS_AS(compose_sum(point_theory(full(1, 0)), point_theory(full(2, 0))), DomainError);
  CHECK_THROWS_AS(omega_power(empty_theory(full(1, 0))), DomainError);
}

TEST_CASE("reversal") {
  CHECK(reverse(eval_finite(parse_word("a.b", 2), full(1, 2))) == eval_finite(parse_word("b.a", 2), full(1, 2)));
  const auto ts = word_theories(1, 2, full(2, 1));
  for (const auto& a : ts) {
    CHECK(reverse(reverse(a)) == a);
    for (const auto& b : ts) CHECK(reverse(compose_sum(a, b)) == compose_sum(reverse(b), reverse(a)));
  }
}

TEST_CASE("omega powers") {
  const Theory point = point_theory(full(2, 0));
  const Theory w = omega_power(point);
  CHECK(holds(w, testing::sentences::least));
  CHECK_FALSE(holds(w, testing::sentences::last));
  const Theory ws = omega_star_power(point);
  CHECK(holds(ws, testing::sentences::last));
  CHECK_FALSE(holds(ws, testing::sentences::least));
  const Theory zeta = compose_sum(ws, w);
  CHECK(holds(zeta, testing::sentences::no_endpoints));
  for (int n = 1; n <= 2; ++n) CHECK(omega_power(point_theory(full(n, 0))) != point_theory(full(n, 0)));

  for (int n = 0; n <= 2; ++n)
    for (const auto& s : word_theories(1, 2, full(n, 1), 1)) {
      const Theory o = omega_power(s);
      CHECK(compose_sum(s, o) == o);
      CHECK(omega_power(compose_sum(s, s)) == o);
      CHECK(reverse(omega_star_power(s)) == omega_power(reverse(s)));
    }
}

TEST_CASE("linked pairs") {
  const Theory p = point_theory(full(0, 0));
  const Theory one[] = {p};
  const auto lp = linked_pairs(one);
  REQUIRE(lp.size() == 1);
  CHECK(lp[0].first == p);
  CHECK(lp[0].second == p);

  // Every omega-sum of generator words is p + omega(e) for a linked pair.
  const Signature sig = full(1, 1);
  const auto gens = word_theories(1, 1, sig, 1);
  const auto pairs = linked_pairs(gens);
  for (const auto& [q, e] : pairs) {
    CHECK(compose_sum(q, e) == q);
    CHECK(compose_sum(e, e) == e);
  }
  for (const auto& s : sum_closure(gens)) {
    const Theory target = omega_power(s);
    const bool found = std::any_of(pairs.begin(), pairs.end(), [&](const auto& pe) {
      return compose_sum(pe.first, omega_power(pe.second)) == target;
    });
    CHECK(found);
  }
}

TEST_CASE("shuffles") {
  // Depth-3 sentences are read at the narrowed signature they need.
  const auto at = [](const std::string& sentence, bool dense) {
    const auto nf = normalize(*parse_formula(sentence));
    const Theory point = point_theory(signature_for(*nf, 0));
    const Theory one[] = {point};
    return satisfies(dense ? shuffle(one) : omega_power(point), *nf);
  };
  CHECK(at(testing::sentences::density, true));
  CHECK(at(testing::sentences::no_endpoints, true));
  CHECK_FALSE(at(testing::sentences::density, false));
  CHECK_THROWS_AS(shuffle(std::span<const Theory>{}), DomainError);

  // Two predicates' worth of rounds over a letter is the practical limit.
  for (int n = 0; n <= 2; ++n) {
    const Signature sig = full(n, n == 2 ? 0 : 1);
    const auto ts = word_theories(sig.predicates, 2, sig, 1);
    for (std::size_t mask = 1; mask < (std::size_t{1} << ts.size()); ++mask) {
      std::vector<Theory> s;
      for (std::size_t i = 0; i < ts.size(); ++i)
        if ((mask >> i) & 1U) s.push_back(ts[i]);
      const Theory sh = shuffle(s);
      CHECK(compose_sum(sh, sh) == sh);
      for (const auto& x : s) CHECK(compose_sum(sh, compose_sum(x, sh)) == sh);
      std::vector<Theory> rev = s;
      std::reverse(rev.begin(), rev.end());
      CHECK(shuffle(rev) == sh);
      CHECK(reverse(sh) == [&] {
        std::vector<Theory> r;
        for (const auto& x : s) r.push_back(reverse(x));
        return shuffle(r);
      }());
    }
  }
}

TEST_CASE("shuffle keys agree with plain subset closure") {
  // Plain subset closure is exponential past one set round.
  for (int m = 0; m <= 1; ++m) {
    const Signature sig = full(1, m);
    const auto ts = word_theories(sig.predicates, 2, sig, 1);
    std::vector<Theory> keyed;
    for (const auto& t : ts) {
      const Theory one[] = {t};
      keyed.push_back(shuffle(one));
    }
    keyed.push_back(shuffle(ts));
    detail::set_generic_shuffle(true);
    std::vector<Theory> generic;
    for (const auto& t : ts) {
      const Theory one[] = {t};
      generic.push_back(shuffle(one));
    }
    generic.push_back(shuffle(ts));
    detail::set_generic_shuffle(false);
    CHECK(keyed == generic);
  }
}

TEST_CASE("subset shuffles cover every subset") {
  const Signature sig = full(1, 1);
  const auto ts = word_theories(1, 2, sig, 1);
  const auto got = subset_shuffles(ts);
  std::vector<Theory> got_theories;
  for (const auto& [t, parts] : got) {
    std::vector<Theory> s;
    for (auto i : parts) s.push_back(ts[i]);
    CHECK(shuffle(s) == t);
    got_theories.push_back(t);
  }
  for (std::size_t mask = 1; mask < (std::size_t{1} << ts.size()); ++mask) {
    std::vector<Theory> s;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if ((mask >> i) & 1U) s.push_back(ts[i]);
    CHECK(std::find(got_theories.begin(), got_theories.end(), shuffle(s)) != got_theories.end());
  }
}

TEST_CASE("point rounds agree with set rounds on element sentences") {
  // Element-only sentences read the same answer from either encoding.
  for (const std::string& s : {testing::sentences::least, testing::sentences::last,
                               testing::sentences::no_endpoints, testing::sentences::two_points}) {
    const auto nf = normalize(*parse_formula(s));
    const Signature narrow = signature_for(*nf, 0);
    const Signature wide = signature_for(*nf, 0, true);
    CHECK(narrow.points != 0);
    for (const char* term : {"omega", "omegaStar", "zeta", "eta", "omega+eta", "shuffle(1, omega)", "3"}) {
      const auto t = parse_term(term);
      CHECK_MESSAGE(satisfies(eval_term(*t, narrow), *nf) == satisfies(eval_term(*t, wide), *nf), s, " on ", term);
    }
  }
}
