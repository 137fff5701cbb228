#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navr1/tensor.hpp"

namespace navr1 {

// Adam with decoupled weight decay. Decay is skipped for rank-1 arrays
// (biases); moments follow the parameter order of the collection.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;

  static AdamState init(const NamedTensors& params);
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

// One update in place, reading each tensor's grad. Throws NumericError
// naming the parameter if a gradient is not finite; parameters are left
// untouched in that case.
void adam_step(NamedTensors& params, AdamState& state, const AdamConfig& cfg);

void zero_grads(NamedTensors& params);

// Linear warmup to lr_max, then cosine decay towards zero. `step` is
// 0-based; lr_max is reached exactly at the last warmup step.
double cosine_warmup_lr(double lr_max, std::int64_t step, std::int64_t total_steps,
                        double warmup_frac);

}  // namespace navr1
