#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "mso/errors.hpp"
#include "mso/oracle.hpp"

using namespace mso;

TEST_CASE("brute force on the examples") {
  CHECK(brute_check(*parse_formula(testing::sentences::least), parse_word("-.-.-", 0)));
  const auto contra = parse_formula("E X. ((E y. y in X) & ~E x. x in X)");
  for (const auto& w : testing::all_words(1, 4)) CHECK_FALSE(brute_check(*contra, w));
  CHECK(brute_check(*parse_formula("E x. x in P1"), parse_word("-.a", 1)));
  CHECK_FALSE(brute_check(*parse_formula("E x. x in P1"), parse_word("-.-", 1)));
  CHECK(brute_check(*parse_formula("P1 <= P2"), parse_word("ab.b.-", 2)));
}

TEST_CASE("caps are enforced") {
  const auto f = parse_formula(testing::sentences::least);
  CHECK_THROWS_AS(brute_check(*f, parse_word("-.-.-.-.-.-.-", 0)), ResourceError);
  CHECK_THROWS_AS(brute_check(*parse_formula("E x. E y. E z. x < z"), parse_word("-", 0)), ResourceError);
  CHECK_NOTHROW(brute_check(*parse_formula("E x. E y. E z. x < z"), parse_word("-", 0), {6, 3, 18}));
}

TEST_CASE("generation is deterministic") {
  const auto a = enumerate_sentences(2, 1, 7);
  const auto b = enumerate_sentences(2, 1, 7);
  REQUIRE(a.size() == 1);
  CHECK(*a[0] == *b[0]);
  CHECK(quantifier_depth(*a[0]) <= 2);
  const auto c = enumerate_sentences(2, 50, 8);
  const auto d = enumerate_sentences(2, 50, 8);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(to_string(*c[i]) == to_string(*d[i]));
}

TEST_CASE("generated sentences parse, normalize, and cover every atom") {
  std::set<FormulaOp> seen;
  const auto visit = [&](const auto& self, const Formula& f) -> void {
    if (f.is_atom()) seen.insert(f.op);
    for (const auto& c : f.children) self(self, *c);
  };
  for (const auto& f : enumerate_sentences(2, 500, 1)) {
    CHECK(quantifier_depth(*f) >= 1);
    CHECK(quantifier_depth(*f) <= 2);
    CHECK_NOTHROW(normalize(*parse_formula(to_string(*f))));
    visit(visit, *f);
  }
  CHECK(seen == std::set<FormulaOp>{FormulaOp::Less, FormulaOp::Equal, FormulaOp::In, FormulaOp::Subset});
}

TEST_CASE("brute force respects isomorphism and reversal") {
  for (const auto& f : enumerate_sentences(2, 100, 4)) {
    const auto m = testing::mirror(*f);
    for (const auto& w : testing::all_words(1, 4)) {
      LabeledFiniteOrder r = w;
      std::reverse(r.letters.begin(), r.letters.end());
      CHECK(brute_check(*f, w) == brute_check(*m, r));
      LabeledFiniteOrder copy{w.predicates, w.letters};
      CHECK(brute_check(*f, w) == brute_check(*f, copy));
    }
  }
}
