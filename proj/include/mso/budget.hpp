#ifndef MSO_BUDGET_HPP
#define MSO_BUDGET_HPP

#include <cstddef>

namespace mso {

/// Element cap for closure and enumeration loops.  Defaults to 10^6, or the
/// value of MSO_ORDER_BUDGET when set in the environment.
std::size_t element_budget();
void set_element_budget(std::size_t cap);

/// Throws ResourceError when `size` exceeds the budget.
void check_budget(const char* what, std::size_t size);

/// Restores the previous budget on scope exit.
class ScopedBudget {
 public:
  explicit ScopedBudget(std::size_t cap) : saved_(element_budget()) { set_element_budget(cap); }
  ~ScopedBudget() { set_element_budget(saved_); }
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  std::size_t saved_;
};

}  // namespace mso

#endif  // MSO_BUDGET_HPP
