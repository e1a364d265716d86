#include "doctest.h"
#include "helpers.hpp"
#include "mso/algebra.hpp"
#include "mso/errors.hpp"
#include "mso/terms.hpp"

using namespace mso;
using testing::full;

TEST_CASE("sugar expands on parsing") {
  CHECK(*parse_term("omega") == *OrderTerm::omega_times(OrderTerm::one()));
  CHECK(*parse_term("zeta") ==
        *OrderTerm::sum(OrderTerm::omega_star_times(OrderTerm::one()), OrderTerm::omega_times(OrderTerm::one())));
  const auto s = parse_term("shuffle(1, omega)");
  REQUIRE(s->kind == TermKind::Shuffle);
  CHECK(s->args.size() == 2);
  CHECK(*parse_term("shuffle(omega, 1, 1)") == *s);
  CHECK(*parse_term("3") == *OrderTerm::sum(OrderTerm::sum(OrderTerm::one(), OrderTerm::one()), OrderTerm::one()));
  CHECK(*parse_term("omega^2") == *OrderTerm::omega_times(OrderTerm::omega_times(OrderTerm::one())));
  CHECK(*parse_term("omega^0") == *OrderTerm::one());
  CHECK(*parse_term("0") == *OrderTerm::zero());
}

TEST_CASE("+ is left-associative and * binds tighter") {
  const auto t = parse_term("1 + omega + 2*omegaStar");
  REQUIRE(t->kind == TermKind::Sum);
  CHECK(t->args[0]->kind == TermKind::Sum);
  CHECK(t->args[1]->kind == TermKind::OmegaStarTimes);
  CHECK(*t->args[1]->args[0] == *OrderTerm::numeral(2));
  CHECK(parse_term("(1+omega)*omega")->kind == TermKind::OmegaTimes);
  CHECK(parse_term("eta*omega*omegaStar")->kind == TermKind::OmegaStarTimes);
}

TEST_CASE("printing folds sugar back and round-trips") {
  for (const char* s : {"0", "1", "5", "omega", "omegaStar", "zeta", "eta", "omega^3", "omega+omega",
                        "1+omega", "(1+omega)*omega", "2*omega", "zeta*omega", "shuffle(1, omega)",
                        "shuffle(1, 2, omega+omegaStar)", "1+(1+omega)", "omega^2*omegaStar"}) {
    const auto t = parse_term(s);
    CHECK(to_string(*t) == s);
    CHECK(*parse_term(to_string(*t)) == *t);
  }
}

TEST_CASE("bad terms") {
  CHECK_THROWS_AS(parse_term("bad("), SyntaxError);
  CHECK_THROWS_AS(parse_term("1 +"), SyntaxError);
  CHECK_THROWS_AS(parse_term("shuffle()"), SyntaxError);
  CHECK_THROWS_AS(parse_term("omega*2"), SyntaxError);
  CHECK_THROWS_AS(parse_term("(1"), SyntaxError);
  CHECK_THROWS_AS(parse_term("1 1"), SyntaxError);
}

TEST_CASE("finite expansion") {
  CHECK(expand_finite(*parse_term("1+1")).size() == 2);
  CHECK(expand_finite(*parse_term("0")).size() == 0);
  CHECK(expand_finite(*parse_term("3")).size() == 3);
  CHECK(expand_finite(*parse_term("2+(0*omega)+1")).size() == 3);
  CHECK(is_finite(*parse_term("2+3")));
  CHECK_FALSE(is_finite(*parse_term("omega")));
  CHECK_THROWS_AS(expand_finite(*parse_term("1+eta")), DomainError);
}

TEST_CASE("finite terms evaluate like their expansions") {
  for (int n = 0; n <= 2; ++n)
    for (unsigned k = 0; k <= 5; ++k) {
      const auto t = OrderTerm::numeral(k);
      CHECK(eval_term(*t, full(n, 0)) == eval_finite(expand_finite(*t), full(n, 0)));
      CHECK(eval_term(*OrderTerm::sum(t, OrderTerm::numeral(2)), full(n, 0)) ==
            eval_finite(expand_finite(*OrderTerm::numeral(k + 2)), full(n, 0)));
    }
}

TEST_CASE("congruences") {
  for (int n = 0; n <= 2; ++n) {
    const Signature sig = full(n, 0);
    const auto ev = [&](const char* s) { return eval_term(*parse_term(s), sig); };
    CHECK(ev("(omega+1)+omegaStar") == ev("omega+(1+omegaStar)"));
    CHECK(ev("1+omega") == ev("omega"));
    CHECK(ev("2*omega") == ev("omega"));
    CHECK(reverse(ev("zeta")) == ev("zeta"));
    CHECK(reverse(ev("omega")) == ev("omegaStar"));
    CHECK(ev("omega*omega") == ev("omega^2"));
    CHECK(ev("shuffle(1, 0)") == ev("eta"));
    CHECK(ev("0*omega") == ev("0"));
  }
}

TEST_CASE("memoized evaluation is stable") {
  const auto t = parse_term("shuffle(1, omega) + omega^2");
  const Theory a = eval_term(*t, full(2, 0));
  const Theory b = eval_term(*parse_term(to_string(*t)), full(2, 0));
  CHECK(a == b);
}
