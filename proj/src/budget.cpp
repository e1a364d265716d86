#include "mso/budget.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "mso/errors.hpp"

namespace mso {

namespace {

std::size_t initial_budget() {
  if (const char* env = std::getenv("MSO_ORDER_BUDGET")) {
    try {
      const auto v = std::stoull(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1'000'000;
}

std::atomic<std::size_t>& budget() {
  static std::atomic<std::size_t> b{initial_budget()};
  return b;
}

}  // namespace

std::size_t element_budget() { return budget().load(); }

void set_element_budget(std::size_t cap) { budget().store(cap); }

void check_budget(const char* what, std::size_t size) {
  if (size > element_budget()) throw ResourceError(what, size);
}

}  // namespace mso
