#pragma once

#include <cstdint>

namespace tfgen {

inline constexpr std::uint64_t kDefaultStepBudget = std::uint64_t{1} << 26;
inline constexpr std::uint64_t kMaxStepBudget = std::uint64_t{1} << 30;

// Simulation step budget: TFGEN_BUDGET if set (capped at 2^30), else 2^26.
std::uint64_t step_budget();

}  // namespace tfgen
