#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fgim/numerics/tensor.hpp"

namespace fgim::num {

// Ordered (name, tensor) pairs. Tensors alias the model's parameters, so
// writing through mutable_data() updates the model.
template <typename T>
using NamedTensors = std::vector<std::pair<std::string, Tensor<T>>>;

template <typename T>
std::vector<Tensor<T>> tensors_of(const NamedTensors<T>& named) {
  std::vector<Tensor<T>> out;
  out.reserve(named.size());
  for (const auto& [name, t] : named) out.push_back(t);
  return out;
}

template <typename T>
void zero_grads(const NamedTensors<T>& named) {
  for (auto [name, t] : named) t.zero_grad();
}

// Copies values from src into dst entry by entry. Names and shapes must match.
template <typename T>
void assign_values(const NamedTensors<T>& dst, const NamedTensors<T>& src) {
  if (dst.size() != src.size()) throw DimensionError("parameter sets differ in size");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i].first != src[i].first || dst[i].second.shape() != src[i].second.shape()) {
      throw DimensionError("parameter mismatch at '" + dst[i].first + "'");
    }
    auto d = Tensor<T>(dst[i].second).mutable_data();
    auto s = src[i].second.data();
    std::copy(s.begin(), s.end(), d.begin());
  }
}

}  // namespace fgim::num
