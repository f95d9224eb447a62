#include "fgim/numerics/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fgim::num {

namespace {

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shapes " + to_string(a.shape()) + " and " +
                         to_string(b.shape()) + " differ");
  }
}

template <typename T>
void require_finite(std::span<const T> values, const char* op) {
  for (auto v : values) {
    if (!std::isfinite(v)) throw DomainError(std::string(op) + ": produced a non-finite value");
  }
}

template <typename T>
T stable_sigmoid(T x) {
  if (x >= T(0)) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// log(1 + exp(x)) without overflow.
template <typename T>
T softplus(T x) {
  return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

template <typename T>
bool Tape<T>::tracks(std::initializer_list<const Tensor<T>*> inputs) const {
  if (!enabled_) return false;
  return std::any_of(inputs.begin(), inputs.end(), [](const Tensor<T>* t) { return t->requires_grad(); });
}

template <typename T>
Tensor<T> Tape<T>::make(Shape shape, std::vector<T> values, bool track) const {
  return Tensor<T>(std::move(shape), std::move(values), track);
}

template <typename T>
Tensor<T> Tape<T>::matmul(const Tensor<T>& a, const Tensor<T>& b) {
  const auto m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw DimensionError("matmul: inner dimensions disagree for " + to_string(a.shape()) + " and " +
                         to_string(b.shape()));
  }
  std::vector<T> c(m * n, T(0));
  const T* A = a.data().data();
  const T* B = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T aip = A[i * k + p];
      const T* brow = B + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  const bool track = tracks({&a, &b});
  auto out = make({m, n}, std::move(c), track);
  if (track) {
    record([an = a.handle(), bn = b.handle(), on = out.handle(), m, k, n] {
      const T* dC = on->grad.data();
      const T* A = an->values->data();
      const T* B = bn->values->data();
      if (an->requires_grad) {
        T* dA = an->grad.data();
        for (std::size_t i = 0; i < m; ++i) {
          const T* dcrow = dC + i * n;
          for (std::size_t p = 0; p < k; ++p) {
            const T* brow = B + p * n;
            T acc = T(0);
            for (std::size_t j = 0; j < n; ++j) acc += dcrow[j] * brow[j];
            dA[i * k + p] += acc;
          }
        }
      }
      if (bn->requires_grad) {
        T* dB = bn->grad.data();
        for (std::size_t i = 0; i < m; ++i) {
          const T* dcrow = dC + i * n;
          for (std::size_t p = 0; p < k; ++p) {
            const T aip = A[i * k + p];
            T* dbrow = dB + p * n;
            for (std::size_t j = 0; j < n; ++j) dbrow[j] += aip * dcrow[j];
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::matmul_nt(const Tensor<T>& a, const Tensor<T>& b) {
  const auto m = a.rows(), k = a.cols(), n = b.rows();
  if (b.cols() != k) {
    throw DimensionError("matmul_nt: inner dimensions disagree for " + to_string(a.shape()) + " and " +
                         to_string(b.shape()) + "^T");
  }
  std::vector<T> c(m * n);
  const T* A = a.data().data();
  const T* B = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T acc = T(0);
      for (std::size_t p = 0; p < k; ++p) acc += A[i * k + p] * B[j * k + p];
      c[i * n + j] = acc;
    }
  }
  const bool track = tracks({&a, &b});
  auto out = make({m, n}, std::move(c), track);
  if (track) {
    record([an = a.handle(), bn = b.handle(), on = out.handle(), m, k, n] {
      const T* dC = on->grad.data();
      const T* A = an->values->data();
      const T* B = bn->values->data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const T d = dC[i * n + j];
          if (an->requires_grad) {
            T* dA = an->grad.data() + i * k;
            for (std::size_t p = 0; p < k; ++p) dA[p] += d * B[j * k + p];
          }
          if (bn->requires_grad) {
            T* dB = bn->grad.data() + j * k;
            for (std::size_t p = 0; p < k; ++p) dB[p] += d * A[i * k + p];
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::transpose(const Tensor<T>& a) {
  const auto m = a.rows(), n = a.cols();
  std::vector<T> c(m * n);
  const auto src = a.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[j * m + i] = src[i * n + j];
  const bool track = tracks({&a});
  auto out = make({n, m}, std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), m, n] {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) an->grad[i * n + j] += on->grad[j * m + i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::add(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "add");
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  const bool track = tracks({&a, &b});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), bn = b.handle(), on = out.handle()] {
      const auto& g = on->grad;
      if (an->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) an->grad[i] += g[i];
      if (bn->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) bn->grad[i] += g[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::sub(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "sub");
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  const bool track = tracks({&a, &b});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), bn = b.handle(), on = out.handle()] {
      const auto& g = on->grad;
      if (an->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) an->grad[i] += g[i];
      if (bn->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) bn->grad[i] -= g[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::mul(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "mul");
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * b[i];
  const bool track = tracks({&a, &b});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), bn = b.handle(), on = out.handle()] {
      const auto& g = on->grad;
      const auto& av = *an->values;
      const auto& bv = *bn->values;
      if (an->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) an->grad[i] += g[i] * bv[i];
      if (bn->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) bn->grad[i] += g[i] * av[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::add_row(const Tensor<T>& a, const Tensor<T>& row) {
  const auto m = a.rows(), n = a.cols();
  if (row.size() != n) {
    throw DimensionError("add_row: row " + to_string(row.shape()) + " does not fit " + to_string(a.shape()));
  }
  std::vector<T> c(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = a[i * n + j] + row[j];
  const bool track = tracks({&a, &row});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), rn = row.handle(), on = out.handle(), m, n] {
      const auto& g = on->grad;
      if (an->requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) an->grad[i] += g[i];
      if (rn->requires_grad)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) rn->grad[j] += g[i * n + j];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::scale(const Tensor<T>& a, T factor) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * factor;
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), factor] {
      for (std::size_t i = 0; i < on->grad.size(); ++i) an->grad[i] += factor * on->grad[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::add_scalar(const Tensor<T>& a, T offset) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + offset;
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      for (std::size_t i = 0; i < on->grad.size(); ++i) an->grad[i] += on->grad[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::sigmoid(const Tensor<T>& a) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = stable_sigmoid(a[i]);
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      const auto& s = *on->values;
      for (std::size_t i = 0; i < s.size(); ++i) an->grad[i] += on->grad[i] * s[i] * (T(1) - s[i]);
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::tanh(const Tensor<T>& a) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::tanh(a[i]);
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      const auto& y = *on->values;
      for (std::size_t i = 0; i < y.size(); ++i) an->grad[i] += on->grad[i] * (T(1) - y[i] * y[i]);
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::relu(const Tensor<T>& a) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] > T(0) ? a[i] : T(0);
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      const auto& x = *an->values;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > T(0)) an->grad[i] += on->grad[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::exp(const Tensor<T>& a) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::exp(a[i]);
  require_finite<T>(c, "exp");
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      const auto& y = *on->values;
      for (std::size_t i = 0; i < y.size(); ++i) an->grad[i] += on->grad[i] * y[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::log(const Tensor<T>& a) {
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(a[i] > T(0))) throw DomainError("log: argument " + std::to_string(a[i]) + " is not positive");
    c[i] = std::log(a[i]);
  }
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      const auto& x = *an->values;
      for (std::size_t i = 0; i < x.size(); ++i) an->grad[i] += on->grad[i] / x[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::dropout(const Tensor<T>& a, double p, Rng& rng) {
  if (p <= 0.0) return a;
  if (p >= 1.0) throw ContractError("dropout probability must be below 1");
  const T keep_scale = T(1.0 / (1.0 - p));
  std::vector<T> mask(a.size());
  for (auto& m : mask) m = rng.uniform() < p ? T(0) : keep_scale;
  std::vector<T> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * mask[i];
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), mask = std::move(mask)] {
      for (std::size_t i = 0; i < mask.size(); ++i) an->grad[i] += on->grad[i] * mask[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::sum(const Tensor<T>& a) {
  T acc = T(0);
  for (auto v : a.data()) acc += v;
  const bool track = tracks({&a});
  auto out = make({1, 1}, {acc}, track);
  if (track) {
    record([an = a.handle(), on = out.handle()] {
      const T g = on->grad[0];
      for (auto& d : an->grad) d += g;
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::sum_axis(const Tensor<T>& a, int axis) {
  const auto m = a.rows(), n = a.cols();
  if (axis != 0 && axis != 1) throw ContractError("sum_axis: axis must be 0 or 1");
  const bool track = tracks({&a});
  if (axis == 0) {
    std::vector<T> c(n, T(0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c[j] += a[i * n + j];
    auto out = make({1, n}, std::move(c), track);
    if (track) {
      record([an = a.handle(), on = out.handle(), m, n] {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) an->grad[i * n + j] += on->grad[j];
      });
    }
    return out;
  }
  std::vector<T> c(m, T(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i] += a[i * n + j];
  auto out = make({m, 1}, std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), m, n] {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) an->grad[i * n + j] += on->grad[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::concat(std::span<const Tensor<T>> parts, int axis) {
  if (parts.empty()) throw ContractError("concat: no inputs");
  if (axis != 0 && axis != 1) throw ContractError("concat: axis must be 0 or 1");
  bool track = false;
  std::vector<Node> handles;
  handles.reserve(parts.size());
  for (const auto& p : parts) {
    track = track || (enabled_ && p.requires_grad());
    handles.push_back(p.handle());
  }
  if (axis == 0) {
    const auto n = parts.front().cols();
    std::size_t m = 0;
    for (const auto& p : parts) {
      if (p.cols() != n) throw DimensionError("concat rows: column counts differ");
      m += p.rows();
    }
    std::vector<T> c;
    c.reserve(m * n);
    for (const auto& p : parts) c.insert(c.end(), p.data().begin(), p.data().end());
    auto out = make({m, n}, std::move(c), track);
    if (track) {
      record([handles = std::move(handles), on = out.handle()] {
        std::size_t offset = 0;
        for (const auto& h : handles) {
          const auto len = h->values->size();
          if (h->requires_grad)
            for (std::size_t i = 0; i < len; ++i) h->grad[i] += on->grad[offset + i];
          offset += len;
        }
      });
    }
    return out;
  }
  const auto m = parts.front().rows();
  std::size_t n = 0;
  for (const auto& p : parts) {
    if (p.rows() != m) throw DimensionError("concat cols: row counts differ");
    n += p.cols();
  }
  std::vector<T> c(m * n);
  std::size_t col = 0;
  for (const auto& p : parts) {
    const auto pc = p.cols();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < pc; ++j) c[i * n + col + j] = p[i * pc + j];
    col += pc;
  }
  auto out = make({m, n}, std::move(c), track);
  if (track) {
    record([handles = std::move(handles), on = out.handle(), m, n] {
      std::size_t col = 0;
      for (const auto& h : handles) {
        const auto pc = h->values->size() / m;
        if (h->requires_grad)
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < pc; ++j) h->grad[i * pc + j] += on->grad[i * n + col + j];
        col += pc;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::slice_rows(const Tensor<T>& a, std::size_t begin, std::size_t end) {
  const auto m = a.rows(), n = a.cols();
  if (begin >= end || end > m) {
    throw IndexError("slice_rows: [" + std::to_string(begin) + ", " + std::to_string(end) + ") out of " +
                     to_string(a.shape()));
  }
  std::vector<T> c(a.data().begin() + begin * n, a.data().begin() + end * n);
  const bool track = tracks({&a});
  auto out = make({end - begin, n}, std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), offset = begin * n] {
      for (std::size_t i = 0; i < on->grad.size(); ++i) an->grad[offset + i] += on->grad[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::slice_cols(const Tensor<T>& a, std::size_t begin, std::size_t end) {
  const auto m = a.rows(), n = a.cols();
  if (begin >= end || end > n) {
    throw IndexError("slice_cols: [" + std::to_string(begin) + ", " + std::to_string(end) + ") out of " +
                     to_string(a.shape()));
  }
  const auto w = end - begin;
  std::vector<T> c(m * w);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < w; ++j) c[i * w + j] = a[i * n + begin + j];
  const bool track = tracks({&a});
  auto out = make({m, w}, std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), m, n, w, begin] {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < w; ++j) an->grad[i * n + begin + j] += on->grad[i * w + j];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::softmax_rows(const Tensor<T>& a) {
  const auto m = a.rows(), n = a.cols();
  std::vector<T> c(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const T* x = a.data().data() + i * n;
    T* y = c.data() + i * n;
    const T mx = *std::max_element(x, x + n);
    T z = T(0);
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = std::exp(x[j] - mx);
      z += y[j];
    }
    for (std::size_t j = 0; j < n; ++j) y[j] /= z;
  }
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), m, n] {
      const auto& y = *on->values;
      for (std::size_t i = 0; i < m; ++i) {
        T dot = T(0);
        for (std::size_t j = 0; j < n; ++j) dot += on->grad[i * n + j] * y[i * n + j];
        for (std::size_t j = 0; j < n; ++j) an->grad[i * n + j] += y[i * n + j] * (on->grad[i * n + j] - dot);
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::log_softmax_rows(const Tensor<T>& a) {
  const auto m = a.rows(), n = a.cols();
  std::vector<T> c(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const T* x = a.data().data() + i * n;
    T* y = c.data() + i * n;
    const T mx = *std::max_element(x, x + n);
    T z = T(0);
    for (std::size_t j = 0; j < n; ++j) z += std::exp(x[j] - mx);
    const T lse = mx + std::log(z);
    for (std::size_t j = 0; j < n; ++j) y[j] = x[j] - lse;
  }
  const bool track = tracks({&a});
  auto out = make(a.shape(), std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), m, n] {
      const auto& y = *on->values;
      for (std::size_t i = 0; i < m; ++i) {
        T gsum = T(0);
        for (std::size_t j = 0; j < n; ++j) gsum += on->grad[i * n + j];
        for (std::size_t j = 0; j < n; ++j)
          an->grad[i * n + j] += on->grad[i * n + j] - std::exp(y[i * n + j]) * gsum;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias, T eps) {
  const auto m = x.rows(), n = x.cols();
  if (gain.size() != n || bias.size() != n) {
    throw DimensionError("layer_norm: gain/bias do not match " + to_string(x.shape()));
  }
  std::vector<T> xhat(m * n), rstd(m), c(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const T* row = x.data().data() + i * n;
    T mean = T(0);
    for (std::size_t j = 0; j < n; ++j) mean += row[j];
    mean /= T(n);
    T var = T(0);
    for (std::size_t j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= T(n);
    rstd[i] = T(1) / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) {
      xhat[i * n + j] = (row[j] - mean) * rstd[i];
      c[i * n + j] = gain[j] * xhat[i * n + j] + bias[j];
    }
  }
  const bool track = tracks({&x, &gain, &bias});
  auto out = make(x.shape(), std::move(c), track);
  if (track) {
    record([xn = x.handle(), gn = gain.handle(), bn = bias.handle(), on = out.handle(), xhat = std::move(xhat),
            rstd = std::move(rstd), m, n] {
      const auto& g = *gn->values;
      const auto& dy = on->grad;
      if (gn->requires_grad)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) gn->grad[j] += dy[i * n + j] * xhat[i * n + j];
      if (bn->requires_grad)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) bn->grad[j] += dy[i * n + j];
      if (xn->requires_grad) {
        for (std::size_t i = 0; i < m; ++i) {
          T mean_d = T(0), mean_dx = T(0);
          for (std::size_t j = 0; j < n; ++j) {
            const T d = dy[i * n + j] * g[j];
            mean_d += d;
            mean_dx += d * xhat[i * n + j];
          }
          mean_d /= T(n);
          mean_dx /= T(n);
          for (std::size_t j = 0; j < n; ++j) {
            const T d = dy[i * n + j] * g[j];
            xn->grad[i * n + j] += rstd[i] * (d - mean_d - xhat[i * n + j] * mean_dx);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::embedding_lookup(const Tensor<T>& table, std::span<const int> ids) {
  const auto v = table.rows(), d = table.cols();
  if (ids.empty()) throw ContractError("embedding_lookup: empty id list");
  std::vector<T> c(ids.size() * d);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] < 0 || static_cast<std::size_t>(ids[t]) >= v) {
      throw IndexError("embedding_lookup: id " + std::to_string(ids[t]) + " outside vocabulary of " +
                       std::to_string(v));
    }
    std::copy_n(table.data().begin() + static_cast<std::size_t>(ids[t]) * d, d, c.begin() + t * d);
  }
  const bool track = tracks({&table});
  auto out = make({ids.size(), d}, std::move(c), track);
  if (track) {
    record([tn = table.handle(), on = out.handle(), ids = std::vector<int>(ids.begin(), ids.end()), d] {
      for (std::size_t t = 0; t < ids.size(); ++t) {
        T* dst = tn->grad.data() + static_cast<std::size_t>(ids[t]) * d;
        const T* src = on->grad.data() + t * d;
        for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::pick(const Tensor<T>& a, std::span<const int> ids) {
  const auto m = a.rows(), n = a.cols();
  if (ids.size() != m) throw DimensionError("pick: need one id per row");
  std::vector<T> c(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= n) {
      throw IndexError("pick: id " + std::to_string(ids[i]) + " outside " + std::to_string(n) + " columns");
    }
    c[i] = a[i * n + static_cast<std::size_t>(ids[i])];
  }
  const bool track = tracks({&a});
  auto out = make({m, 1}, std::move(c), track);
  if (track) {
    record([an = a.handle(), on = out.handle(), ids = std::vector<int>(ids.begin(), ids.end()), n] {
      for (std::size_t i = 0; i < ids.size(); ++i) an->grad[i * n + static_cast<std::size_t>(ids[i])] += on->grad[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> Tape<T>::bce_with_logits(const Tensor<T>& logits, const Tensor<T>& targets, AttributeLoss form) {
  require_same_shape(logits, targets, "bce_with_logits");
  T total = T(0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const T l = logits[i], y = targets[i];
    if (y < T(0) || y > T(1)) throw DomainError("attribute target outside [0,1]");
    total += form == AttributeLoss::binary ? softplus(l) - y * l : y * softplus(-l);
  }
  const bool track = tracks({&logits});
  auto out = make({1, 1}, {total}, track);
  if (track) {
    record([ln = logits.handle(), tn = targets.handle(), on = out.handle(), form] {
      const T g = on->grad[0];
      const auto& l = *ln->values;
      const auto& y = *tn->values;
      for (std::size_t i = 0; i < l.size(); ++i) {
        const T s = stable_sigmoid(l[i]);
        const T d = form == AttributeLoss::binary ? s - y[i] : y[i] * (s - T(1));
        ln->grad[i] += g * d;
      }
    });
  }
  return out;
}

template <typename T>
void Tape<T>::backward(const Tensor<T>& loss) {
  if (consumed_) throw ContractError("backward called twice on the same tape");
  if (loss.size() != 1) throw ContractError("backward needs a scalar loss, got " + to_string(loss.shape()));
  if (!loss.requires_grad()) throw ContractError("loss does not depend on any tensor that requires grad");
  consumed_ = true;
  loss.node().grad[0] += T(1);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
  nodes_.clear();
}

template <typename T>
Tensor<T> causal_mask(std::size_t n) {
  std::vector<T> m(n * n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = T(-1e9);
  return Tensor<T>({n, n}, std::move(m));
}

template class Tape<float>;
template class Tape<double>;
template Tensor<float> causal_mask<float>(std::size_t);
template Tensor<double> causal_mask<double>(std::size_t);

}  // namespace fgim::num
