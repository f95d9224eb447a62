#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "fgim/numerics/random.hpp"
#include "fgim/numerics/tensor.hpp"

namespace fgim::num {

enum class GradMode { enabled, disabled };

// Which form of the per-aspect attribute loss to use (see bce_with_logits).
enum class AttributeLoss {
  binary,     // -[y log q + (1-y) log(1-q)]
  one_sided,  // -y log q
};

// Records primitive operations for one forward pass and replays their
// adjoints in reverse on backward(). A tape is single-use: build, call
// backward() once, discard. With GradMode::disabled nothing is recorded and
// every output is a plain constant.
//
// All matrix ops take rank-2 tensors; vectors are [1 x n] rows.
template <typename T>
class Tape {
 public:
  explicit Tape(GradMode mode = GradMode::enabled) : enabled_(mode == GradMode::enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return enabled_; }
  std::size_t size() const { return nodes_.size(); }

  // Linear algebra
  Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);
  // a · bᵀ
  Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& b);
  Tensor<T> transpose(const Tensor<T>& a);

  // Elementwise
  Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
  Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
  Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
  // a [m x n] + row [1 x n] on every row.
  Tensor<T> add_row(const Tensor<T>& a, const Tensor<T>& row);
  Tensor<T> scale(const Tensor<T>& a, T factor);
  Tensor<T> add_scalar(const Tensor<T>& a, T offset);
  Tensor<T> sigmoid(const Tensor<T>& a);
  Tensor<T> tanh(const Tensor<T>& a);
  Tensor<T> relu(const Tensor<T>& a);
  Tensor<T> exp(const Tensor<T>& a);
  Tensor<T> log(const Tensor<T>& a);
  // Inverted dropout. Identity when p == 0.
  Tensor<T> dropout(const Tensor<T>& a, double p, Rng& rng);

  // Reductions and structure
  Tensor<T> sum(const Tensor<T>& a);
  // axis 0 -> [1 x n], axis 1 -> [m x 1]
  Tensor<T> sum_axis(const Tensor<T>& a, int axis);
  Tensor<T> concat(std::span<const Tensor<T>> parts, int axis);
  Tensor<T> concat(std::initializer_list<Tensor<T>> parts, int axis) {
    std::vector<Tensor<T>> v(parts);
    return concat(std::span<const Tensor<T>>(v), axis);
  }
  Tensor<T> slice_rows(const Tensor<T>& a, std::size_t begin, std::size_t end);
  Tensor<T> slice_cols(const Tensor<T>& a, std::size_t begin, std::size_t end);

  // Row-wise, max-subtracted.
  Tensor<T> softmax_rows(const Tensor<T>& a);
  Tensor<T> log_softmax_rows(const Tensor<T>& a);
  // Normalizes each row to zero mean / unit variance, then gain * x + bias.
  Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias, T eps = T(1e-5));
  // Gathers rows of table [v x d] -> [len x d].
  Tensor<T> embedding_lookup(const Tensor<T>& table, std::span<const int> ids);
  // out[i] = a[i, ids[i]] -> [m x 1]
  Tensor<T> pick(const Tensor<T>& a, std::span<const int> ids);

  // Sum over all entries of the per-aspect attribute loss, computed from
  // logits so that saturated sigmoids stay finite. targets is a constant in
  // [0,1] with the same shape as logits. Returns [1 x 1].
  Tensor<T> bce_with_logits(const Tensor<T>& logits, const Tensor<T>& targets,
                            AttributeLoss form = AttributeLoss::binary);

  // Populates grad of every requires_grad ancestor of a scalar loss.
  void backward(const Tensor<T>& loss);

 private:
  using Node = std::shared_ptr<TensorNode<T>>;

  bool tracks(std::initializer_list<const Tensor<T>*> inputs) const;
  Tensor<T> make(Shape shape, std::vector<T> values, bool track) const;
  void record(std::function<void()> adjoint) { nodes_.push_back(std::move(adjoint)); }

  std::vector<std::function<void()>> nodes_;
  bool enabled_;
  bool consumed_ = false;
};

// Constant additive mask: 0 on and below the diagonal, a large negative
// value above it.
template <typename T>
Tensor<T> causal_mask(std::size_t n);

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace fgim::num
