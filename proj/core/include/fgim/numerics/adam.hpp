#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fgim/numerics/tensor.hpp"

namespace fgim::num {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  AdamConfig config;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
  std::int64_t t = 0;
};

// Zero moments sized to match params.
template <typename T>
AdamState<T> make_adam_state(std::span<const Tensor<T>> params, AdamConfig config = {});

// One bias-corrected Adam update using each parameter's accumulated grad.
// Does not clear the grads.
template <typename T>
void adam_step(std::span<Tensor<T>> params, AdamState<T>& state);

// Owns a parameter list and its Adam state.
template <typename T>
class Adam {
 public:
  Adam(std::vector<Tensor<T>> params, AdamConfig config)
      : params_(std::move(params)), state_(make_adam_state<T>(params_, config)) {}

  void step() { adam_step<T>(params_, state_); }
  void zero_grad() {
    for (auto& p : params_) p.zero_grad();
  }
  const AdamState<T>& state() const { return state_; }

 private:
  std::vector<Tensor<T>> params_;
  AdamState<T> state_;
};

}  // namespace fgim::num
