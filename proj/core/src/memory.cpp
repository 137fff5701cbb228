#include "navr1/memory.hpp"

#include <algorithm>

#include "navr1/util.hpp"

namespace navr1 {

const char* memory_strategy_name(MemoryStrategy s) {
  switch (s) {
    case MemoryStrategy::LongShort: return "long-short";
    case MemoryStrategy::AverageK: return "average-k";
    case MemoryStrategy::ExponentialDecay: return "exponential-decay";
  }
  return "?";
}

MemoryStrategy memory_strategy_from_name(const std::string& name) {
  if (name == "long-short") return MemoryStrategy::LongShort;
  if (name == "average-k") return MemoryStrategy::AverageK;
  if (name == "exponential-decay") return MemoryStrategy::ExponentialDecay;
  throw ConfigError("unknown memory strategy '" + name + "'");
}

void MemoryConfig::validate() const {
  switch (strategy) {
    case MemoryStrategy::LongShort:
      if (delta1 < 1) throw ConfigError("memory.delta1 must be >= 1");
      if (delta2 <= delta1) throw ConfigError("memory.delta2 must exceed memory.delta1");
      if (window < delta1) throw ConfigError("memory.M must be >= memory.delta1");
      break;
    case MemoryStrategy::AverageK:
      if (k < 1) throw ConfigError("memory.k must be >= 1");
      break;
    case MemoryStrategy::ExponentialDecay:
      break;
  }
  if (budget < 1) throw ConfigError("memory.budget must be >= 1");
}

std::vector<int> select_history(int t, const MemoryConfig& cfg) {
  if (t < 0) throw ContractError("select_history: negative timestep");
  std::vector<int> out;
  switch (cfg.strategy) {
    case MemoryStrategy::LongShort: {
      int clamp = std::max(0, t - cfg.window);
      for (int k = 1; t - k * cfg.delta1 >= clamp; ++k) {
        out.push_back(t - k * cfg.delta1);
      }
      for (int k = 1; t - cfg.window - k * cfg.delta2 >= 0; ++k) {
        out.push_back(t - cfg.window - k * cfg.delta2);
      }
      break;
    }
    case MemoryStrategy::AverageK: {
      for (int i = 0; i < cfg.k; ++i) {
        long idx = static_cast<long>(i) * t / cfg.k;
        if (idx < t) out.push_back(static_cast<int>(idx));
      }
      break;
    }
    case MemoryStrategy::ExponentialDecay: {
      for (long off = 1; t - off >= 0; off *= 2) {
        out.push_back(static_cast<int>(t - off));
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> apply_budget(std::vector<int> indices, int budget) {
  if (budget < 1) throw ContractError("apply_budget: budget must be >= 1");
  if (static_cast<int>(indices.size()) > budget) {
    indices.erase(indices.begin(), indices.end() - budget);
  }
  return indices;
}

}  // namespace navr1
