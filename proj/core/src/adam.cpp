#include "navr1/adam.hpp"

#include <cmath>

#include "navr1/util.hpp"

namespace navr1 {

AdamState AdamState::init(const NamedTensors& params) {
  AdamState s;
  s.m.reserve(params.size());
  s.v.reserve(params.size());
  for (const auto& [name, t] : params) {
    (void)name;
    s.m.emplace_back(t->numel(), 0.0);
    s.v.emplace_back(t->numel(), 0.0);
  }
  return s;
}

void adam_step(NamedTensors& params, AdamState& state, const AdamConfig& cfg) {
  if (state.m.size() != params.size()) {
    throw ContractError("adam state does not match parameter collection");
  }
  for (auto& [name, t] : params) {
    t->ensure_grad();
    for (double g : t->grad) {
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in parameter '" + name + "'");
      }
    }
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& t = params[p].second;
    const bool decay = cfg.weight_decay != 0.0 && t->shape.size() > 1;
    auto& m = state.m[p];
    auto& v = state.v[p];
    for (std::size_t i = 0; i < t->numel(); ++i) {
      double g = t->grad[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      t->data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
      if (decay) t->data[i] -= cfg.lr * cfg.weight_decay * t->data[i];
    }
  }
}

void zero_grads(NamedTensors& params) {
  for (auto& [name, t] : params) {
    (void)name;
    zero_grad(t);
  }
}

double cosine_warmup_lr(double lr_max, std::int64_t step, std::int64_t total_steps,
                        double warmup_frac) {
  if (total_steps <= 0) throw ContractError("cosine_warmup_lr: total_steps <= 0");
  if (warmup_frac < 0.0 || warmup_frac >= 1.0) {
    throw ConfigError("warmup fraction must be in [0, 1)");
  }
  std::int64_t warm = static_cast<std::int64_t>(warmup_frac * total_steps);
  if (step < warm) {
    return lr_max * static_cast<double>(step + 1) / static_cast<double>(warm);
  }
  double progress = total_steps == warm
                        ? 0.0
                        : static_cast<double>(step - warm) /
                              static_cast<double>(total_steps - warm);
  return lr_max * 0.5 * (1.0 + std::cos(M_PI * progress));
}

}  // namespace navr1
