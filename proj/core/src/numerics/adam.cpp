#include "fgim/numerics/adam.hpp"

#include <cmath>
#include <string>

namespace fgim::num {

template <typename T>
AdamState<T> make_adam_state(std::span<const Tensor<T>> params, AdamConfig config) {
  AdamState<T> state;
  state.config = config;
  for (const auto& p : params) {
    state.m.emplace_back(p.size(), T(0));
    state.v.emplace_back(p.size(), T(0));
  }
  return state;
}

template <typename T>
void adam_step(std::span<Tensor<T>> params, AdamState<T>& state) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw DimensionError("adam_step: state tracks " + std::to_string(state.m.size()) + " parameters, got " +
                         std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].requires_grad()) throw ContractError("adam_step: parameter without gradient");
    if (state.m[i].size() != params[i].size() || state.v[i].size() != params[i].size()) {
      throw DimensionError("adam_step: moment buffers do not match parameter " + std::to_string(i) + " of shape " +
                           to_string(params[i].shape()));
    }
  }
  ++state.t;
  const auto& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  const T b1 = T(c.beta1), b2 = T(c.beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].mutable_data();
    auto g = params[i].grad();
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = b1 * m[j] + (T(1) - b1) * g[j];
      v[j] = b2 * v[j] + (T(1) - b2) * g[j] * g[j];
      const T m_hat = m[j] / T(bc1);
      const T v_hat = v[j] / T(bc2);
      w[j] -= T(c.lr) * m_hat / (std::sqrt(v_hat) + T(c.eps));
    }
  }
}

template AdamState<float> make_adam_state<float>(std::span<const Tensor<float>>, AdamConfig);
template AdamState<double> make_adam_state<double>(std::span<const Tensor<double>>, AdamConfig);
template void adam_step<float>(std::span<Tensor<float>>, AdamState<float>&);
template void adam_step<double>(std::span<Tensor<double>>, AdamState<double>&);

}  // namespace fgim::num
