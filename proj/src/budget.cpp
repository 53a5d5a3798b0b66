#include "tfgen/budget.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "tfgen/error.hpp"

namespace tfgen {

std::uint64_t step_budget() {
  const char* env = std::getenv("TFGEN_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultStepBudget;
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(env, &used, 0);
  } catch (const std::exception&) {
    throw Error(std::string("TFGEN_BUDGET is not a number: ") + env);
  }
  if (used != std::string(env).size() || v == 0) throw Error(std::string("TFGEN_BUDGET is not a positive number: ") + env);
  return std::min(v, kMaxStepBudget);
}

}  // namespace tfgen
