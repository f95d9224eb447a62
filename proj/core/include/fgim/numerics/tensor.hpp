#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fgim/errors.hpp"

namespace fgim::num {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

template <typename T>
struct TensorNode {
  Shape shape;
  std::shared_ptr<std::vector<T>> values;
  std::vector<T> grad;  // empty unless requires_grad
  bool requires_grad = false;
};

// Shaped row-major array. A Tensor is a cheap handle: copies alias the same
// node. Values never change after construction except through
// mutable_data(), which is reserved for initializers and optimizers.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  Tensor(Shape shape, std::vector<T> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor filled(Shape shape, T value, bool requires_grad = false);
  static Tensor scalar(T value, bool requires_grad = false);
  // Row vector [1 x n].
  static Tensor row(std::vector<T> values, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const { return node().shape; }
  std::size_t rank() const { return shape().size(); }
  std::size_t size() const { return node().values->size(); }
  // For rank-2 tensors; rank-1 tensors are treated as a single row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const T> data() const { return *node().values; }
  std::span<T> mutable_data() { return *node().values; }
  T operator[](std::size_t i) const { return (*node().values)[i]; }
  T at(std::size_t r, std::size_t c) const { return (*node().values)[r * cols() + c]; }
  T item() const;

  bool requires_grad() const { return node().requires_grad; }
  std::span<const T> grad() const { return node().grad; }
  std::span<T> mutable_grad() { return node().grad; }
  void zero_grad();

  // Same values, no gradient tracking.
  Tensor detached() const;
  // Independent deep copy (values and requires_grad; gradient reset).
  Tensor clone() const;

  TensorNode<T>& node() const;
  const std::shared_ptr<TensorNode<T>>& handle() const { return node_; }

 private:
  std::shared_ptr<TensorNode<T>> node_;
};

// Converts element type, preserving shape; the result does not track grads.
template <typename To, typename From>
Tensor<To> cast(const Tensor<From>& t, bool requires_grad = false) {
  std::vector<To> out(t.data().begin(), t.data().end());
  return Tensor<To>(t.shape(), std::move(out), requires_grad);
}

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace fgim::num
