#include "fgim/autoencoder/layers.hpp"

#include <cmath>
#include <vector>

namespace fgim::ae {

template <typename T>
Tensor<T> Attention<T>::operator()(Tape<T>& tape, const Tensor<T>& queries, const Tensor<T>& memory,
                                   std::size_t heads, const Tensor<T>* mask) const {
  const auto q = query(tape, queries);
  const auto k = key(tape, memory);
  const auto v = value(tape, memory);
  const auto dim = q.cols();
  const auto head_dim = dim / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(head_dim));
  std::vector<Tensor<T>> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const auto qh = heads == 1 ? q : tape.slice_cols(q, h * head_dim, (h + 1) * head_dim);
    const auto kh = heads == 1 ? k : tape.slice_cols(k, h * head_dim, (h + 1) * head_dim);
    const auto vh = heads == 1 ? v : tape.slice_cols(v, h * head_dim, (h + 1) * head_dim);
    auto scores = tape.scale(tape.matmul_nt(qh, kh), scale);
    if (mask) scores = tape.add(scores, *mask);
    outs.push_back(tape.matmul(tape.softmax_rows(scores), vh));
  }
  const auto merged = heads == 1 ? outs.front() : tape.concat(std::span<const Tensor<T>>(outs), 1);
  return output(tape, merged);
}

template <typename T>
Tensor<T> Gru<T>::run(Tape<T>& tape, const Tensor<T>& x, bool reverse) const {
  const auto steps = x.rows();
  const auto h = hidden_size();
  const auto projected = input(tape, x);  // [T x 3h]
  auto state = Tensor<T>::zeros({1, h});
  std::vector<Tensor<T>> states(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto t = reverse ? steps - 1 - s : s;
    const auto xt = tape.slice_rows(projected, t, t + 1);
    const auto ht = hidden(tape, state);
    const auto r = tape.sigmoid(tape.add(tape.slice_cols(xt, 0, h), tape.slice_cols(ht, 0, h)));
    const auto u = tape.sigmoid(tape.add(tape.slice_cols(xt, h, 2 * h), tape.slice_cols(ht, h, 2 * h)));
    const auto n = tape.tanh(tape.add(tape.slice_cols(xt, 2 * h, 3 * h), tape.mul(r, tape.slice_cols(ht, 2 * h, 3 * h))));
    // (1 - u) * n + u * state
    state = tape.add(n, tape.mul(u, tape.sub(state, n)));
    states[t] = state;
  }
  return tape.concat(std::span<const Tensor<T>>(states), 0);
}

template <typename T>
Tensor<T> sinusoidal_table(std::size_t rows, std::size_t dim) {
  std::vector<T> values(rows * dim);
  for (std::size_t pos = 0; pos < rows; ++pos) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double rate = std::pow(10000.0, static_cast<double>(2 * (i / 2)) / static_cast<double>(dim));
      const double angle = static_cast<double>(pos) / rate;
      values[pos * dim + i] = static_cast<T>(i % 2 == 0 ? std::sin(angle) : std::cos(angle));
    }
  }
  return Tensor<T>({rows, dim}, std::move(values));
}

template struct Attention<float>;
template struct Attention<double>;
template struct Gru<float>;
template struct Gru<double>;
template Tensor<float> sinusoidal_table<float>(std::size_t, std::size_t);
template Tensor<double> sinusoidal_table<double>(std::size_t, std::size_t);

}  // namespace fgim::ae
