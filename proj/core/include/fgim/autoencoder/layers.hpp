#pragma once

#include <string>

#include "fgim/numerics/params.hpp"
#include "fgim/numerics/random.hpp"
#include "fgim/numerics/tape.hpp"

namespace fgim::ae {

using num::NamedTensors;
using num::Tape;
using num::Tensor;

template <typename T>
struct Linear {
  Tensor<T> weight;  // [in x out]
  Tensor<T> bias;    // [1 x out]

  static Linear init(std::size_t in, std::size_t out, num::Rng& rng) {
    return {num::xavier_init<T>(in, out, rng), Tensor<T>::zeros({1, out}, true)};
  }
  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& x) const {
    return tape.add_row(tape.matmul(x, weight), bias);
  }
  void collect(const std::string& prefix, NamedTensors<T>& out) const {
    out.emplace_back(prefix + ".weight", weight);
    out.emplace_back(prefix + ".bias", bias);
  }
};

template <typename T>
struct LayerNorm {
  Tensor<T> gain;
  Tensor<T> bias;

  static LayerNorm init(std::size_t dim) {
    return {Tensor<T>::filled({1, dim}, T(1), true), Tensor<T>::zeros({1, dim}, true)};
  }
  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& x) const { return tape.layer_norm(x, gain, bias); }
  void collect(const std::string& prefix, NamedTensors<T>& out) const {
    out.emplace_back(prefix + ".gain", gain);
    out.emplace_back(prefix + ".bias", bias);
  }
};

// Multi-head scaled dot-product attention with separate Q/K/V/O projections.
template <typename T>
struct Attention {
  Linear<T> query, key, value, output;

  static Attention init(std::size_t dim, num::Rng& rng) {
    return {Linear<T>::init(dim, dim, rng), Linear<T>::init(dim, dim, rng), Linear<T>::init(dim, dim, rng),
            Linear<T>::init(dim, dim, rng)};
  }
  // queries [Tq x d], memory [Tk x d]; mask is an additive [Tq x Tk] constant.
  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& queries, const Tensor<T>& memory, std::size_t heads,
                       const Tensor<T>* mask) const;
  void collect(const std::string& prefix, NamedTensors<T>& out) const {
    query.collect(prefix + ".query", out);
    key.collect(prefix + ".key", out);
    value.collect(prefix + ".value", out);
    output.collect(prefix + ".output", out);
  }
};

template <typename T>
struct FeedForward {
  Linear<T> inner, outer;

  static FeedForward init(std::size_t dim, std::size_t hidden, num::Rng& rng) {
    return {Linear<T>::init(dim, hidden, rng), Linear<T>::init(hidden, dim, rng)};
  }
  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& x) const { return outer(tape, tape.relu(inner(tape, x))); }
  void collect(const std::string& prefix, NamedTensors<T>& out) const {
    inner.collect(prefix + ".inner", out);
    outer.collect(prefix + ".outer", out);
  }
};

// Single-direction GRU cell (r, u, n gate order in the packed weights).
template <typename T>
struct Gru {
  Linear<T> input;   // [d x 3h]
  Linear<T> hidden;  // [h x 3h]

  static Gru init(std::size_t in, std::size_t h, num::Rng& rng) {
    return {Linear<T>::init(in, 3 * h, rng), Linear<T>::init(h, 3 * h, rng)};
  }
  std::size_t hidden_size() const { return hidden.weight.rows(); }
  // Runs over the rows of x [T x d], returns states [T x h] in input order.
  Tensor<T> run(Tape<T>& tape, const Tensor<T>& x, bool reverse) const;
  void collect(const std::string& prefix, NamedTensors<T>& out) const {
    input.collect(prefix + ".input", out);
    hidden.collect(prefix + ".hidden", out);
  }
};

// Sinusoidal position table [rows x dim].
template <typename T>
Tensor<T> sinusoidal_table(std::size_t rows, std::size_t dim);

}  // namespace fgim::ae
