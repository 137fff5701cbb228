#pragma once

#include <string>
#include <vector>

namespace navr1 {

enum class MemoryStrategy { LongShort, AverageK, ExponentialDecay };

const char* memory_strategy_name(MemoryStrategy s);
MemoryStrategy memory_strategy_from_name(const std::string& name);

struct MemoryConfig {
  MemoryStrategy strategy = MemoryStrategy::LongShort;
  int window = 8;    // M: short-term window, steps
  int delta1 = 1;    // short-term sampling stride
  int delta2 = 4;    // long-term sampling stride
  int k = 8;         // frame budget for average-k
  int budget = 16;   // context frame cap applied after selection

  // Throws ConfigError; called when configs are loaded, not per query.
  void validate() const;
};

// History frame indices for timestep t: strictly increasing, duplicate-free,
// all < t. Long-short keeps every delta1-th frame within the last `window`
// steps and every delta2-th frame before that; average-k spreads k indices
// evenly over [0, t); exponential-decay walks powers of two back from t-1.
std::vector<int> select_history(int t, const MemoryConfig& cfg);

// Keeps at most `budget` indices, dropping the oldest first.
std::vector<int> apply_budget(std::vector<int> indices, int budget);

}  // namespace navr1
