// Command-line front end: decide sentences in term-denoted orders, test
// satisfiability over a class of orders, print theories, run a quick
// differential self-test.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mso/decide.hpp"
#include "mso/errors.hpp"
#include "mso/oracle.hpp"
#include "mso/syntax.hpp"
#include "mso/terms.hpp"
#include "mso/theory_core.hpp"

namespace {

constexpr int kJsonVersion = 1;

using Clock = std::chrono::steady_clock;

struct Options {
  std::string formula;
  std::string order;
  std::string cls = "countable";
  std::optional<int> depth_override;
  bool json = false;
  std::uint64_t seed = 1;
};

// --formula takes either the sentence itself or a file holding it.
std::string formula_text(const std::string& arg) {
  std::error_code ec;
  if (arg.find_first_of("<>=&|~.") == std::string::npos && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

long long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

int run_decide(const Options& o) {
  const auto start = Clock::now();
  const auto f = mso::parse_formula(formula_text(o.formula));
  const auto t = mso::parse_term(o.order);
  const auto r = mso::decide(*f, *t, {o.depth_override});
  if (o.json) {
    nlohmann::ordered_json j;
    j["version"] = kJsonVersion;
    j["verdict"] = r.verdict;
    j["order"] = mso::to_string(*t);
    j["depthUsed"] = r.depth;
    j["internalDepth"] = r.internal_depth;
    j["theorySize"] = r.theory_size;
    j["elapsedMs"] = elapsed_ms(start);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (r.verdict ? "true" : "false") << "\n";
  }
  return r.verdict ? 0 : 1;
}

int run_sat(const Options& o) {
  const auto start = Clock::now();
  const auto f = mso::parse_formula(formula_text(o.formula));
  bool sat = false;
  std::string witness;
  std::size_t closure = 0;
  auto extra = nlohmann::ordered_json::object();
  if (o.cls == "finite") {
    const auto r = mso::decide_finite_class(*f);
    sat = r.satisfiable;
    if (r.witness) witness = std::to_string(*r.witness);
    closure = r.fixed_point;
    extra["validInFinite"] = r.valid;
    extra["holdsInEmpty"] = r.holds_in_empty;
  } else {
    const auto r = o.cls == "ordinal" ? mso::decide_countable_ordinal_sat(*f) : mso::decide_countable_sat(*f);
    sat = r.satisfiable;
    if (r.witness) witness = mso::to_string(*r.witness);
    closure = r.closure_size;
  }
  if (o.json) {
    nlohmann::ordered_json j;
    j["version"] = kJsonVersion;
    j["verdict"] = sat;
    j["class"] = o.cls;
    j["witness"] = sat ? nlohmann::ordered_json(witness) : nlohmann::ordered_json(nullptr);
    j["closureSize"] = closure;
    j.update(extra);
    j["elapsedMs"] = elapsed_ms(start);
    std::cout << j.dump() << "\n";
  } else if (sat) {
    std::cout << "satisfiable, witness " << witness << "\n";
  } else {
    std::cout << "unsatisfiable\n";
  }
  return sat ? 0 : 1;
}

int run_dump(const Options& o) {
  const auto t = mso::parse_term(o.order);
  const int rounds = o.depth_override.value_or(1);
  if (rounds < 0) throw mso::DomainError("depth must be nonnegative");
  const mso::Theory th = mso::eval_term(*t, {rounds, 0, mso::kFullSchema, 0});
  if (o.json) {
    nlohmann::ordered_json j;
    j["version"] = kJsonVersion;
    j["order"] = mso::to_string(*t);
    j["rounds"] = rounds;
    j["theorySize"] = th.size();
    j["theory"] = mso::to_string(th);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << mso::to_string(th) << "\n";
  }
  return 0;
}

// Finite terms of size 1..4 against the brute-force checker.
int run_selftest(const Options& o) {
  const auto sentences = mso::enumerate_sentences(2, 40, o.seed, 0);
  int checked = 0;
  int failed = 0;
  for (const auto& f : sentences) {
    for (unsigned n = 1; n <= 4; ++n) {
      const auto term = mso::OrderTerm::numeral(n);
      const bool want = mso::brute_check(*f, mso::expand_finite(*term));
      const bool got = mso::decide(*f, *term).verdict;
      ++checked;
      if (want != got) {
        ++failed;
        std::cerr << "mismatch on " << n << ": " << mso::to_string(*f) << "\n";
      }
    }
  }
  if (o.json) {
    nlohmann::ordered_json j;
    j["version"] = kJsonVersion;
    j["verdict"] = failed == 0;
    j["checked"] = checked;
    j["failed"] = failed;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << checked - failed << "/" << checked << " agree\n";
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monadic second-order sentences over countable orders"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Machine-readable output");
    sub->add_option("--seed", o.seed, "Seed for generated inputs");
  };

  auto* decide = app.add_subcommand("decide", "Truth of a sentence in the order a term denotes");
  decide->add_option("--formula", o.formula, "Sentence, or a file containing it")->required();
  decide->add_option("--order", o.order, "Order term, e.g. omega+omega or shuffle(1, omega)")->required();
  decide->add_option("--depth-override", o.depth_override, "Evaluate with this many rounds and project down");
  common(decide);

  auto* sat = app.add_subcommand("sat", "Satisfiability over a class of orders");
  sat->add_option("--formula", o.formula, "Sentence, or a file containing it")->required();
  sat->add_option("--class", o.cls, "countable, finite or ordinal")
      ->check(CLI::IsMember({"countable", "finite", "ordinal"}));
  common(sat);

  auto* dump = app.add_subcommand("dump-theory", "Print the theory of the order a term denotes");
  dump->add_option("--order", o.order, "Order term")->required();
  dump->add_option("--depth-override", o.depth_override, "Rounds (default 1)");
  common(dump);

  auto* selftest = app.add_subcommand("selftest", "Compare decide with brute force on small finite orders");
  common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*decide) return run_decide(o);
    if (*sat) return run_sat(o);
    if (*dump) return run_dump(o);
    return run_selftest(o);
  } catch (const mso::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
  } catch (const mso::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
  } catch (const mso::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
