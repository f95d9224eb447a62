#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fgim/classifier/latent_classifier.hpp"
#include "fgim/errors.hpp"
#include "fgim/textdata/attributes.hpp"

namespace fgim::edit {

struct FgimConfig {
  std::vector<double> weights{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};  // tried in ascending order
  double decay = 0.9;                                         // lambda
  double threshold = 0.001;                                   // t, on the max-abs aspect error
  std::size_t s_steps = 30;                                   // inner iterations per weight

  // Throws ContractError unless 0 < w strictly ascending, 0 < decay < 1,
  // threshold > 0 and s_steps >= 1.
  void validate() const;
  bool operator==(const FgimConfig&) const = default;
};

// One inner iteration: the latent z* reached with `weight`, measured there.
struct EditStep {
  std::size_t weight_index = 0;
  std::size_t inner_step = 0;  // j; weight == decay^j * weights[weight_index]
  double weight = 0.0;
  double grad_norm = 0.0;      // norm of the gradient this step followed
  double edit_norm = 0.0;      // ||z* - z||_2
  double loss = 0.0;           // attribute loss at z*
  std::vector<double> prediction;  // C(z*)
};

struct EditTrace {
  std::vector<EditStep> steps;
  std::optional<std::size_t> success_weight_index;
};

template <typename T>
struct EditResult {
  std::vector<T> latent;  // z'
  bool success = false;
  EditTrace trace;
};

// Anything that can score a latent against a target attribute vector and
// return d loss / d z. LatentClassifier is the production model.
template <typename C, typename T>
concept LatentObjective = requires(const C& c, std::span<const T> z, const text::AttributeVector& y) {
  { c.evaluate(z, y) } -> std::same_as<clf::LatentEvaluation<T>>;
};

// max_k |y'_k - q_k|
inline double max_abs_error(std::span<const double> target, std::span<const double> prediction) {
  double worst = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) worst = std::max(worst, std::abs(target[k] - prediction[k]));
  return worst;
}

template <typename T>
double l2_distance(std::span<const T> a, std::span<const T> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

template <typename T>
double l2_norm(std::span<const T> a) {
  double s = 0.0;
  for (auto v : a) s += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(s);
}

// z - weight * grad_z L(C(z), target)
template <typename T, LatentObjective<T> C>
std::vector<T> fgim_step(std::span<const T> z, const text::AttributeVector& target, double weight,
                         const C& classifier) {
  if (!(weight > 0.0)) throw ContractError("fgim_step: weight must be positive");
  const auto eval = classifier.evaluate(z, target);
  std::vector<T> out(z.begin(), z.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= static_cast<T>(weight) * eval.grad[i];
  return out;
}

// Fast gradient iterative modification. For each weight in ascending order,
// restart from the original z, step along the negative loss gradient, and
// shrink the weight by `decay` after every step. The first z* whose
// prediction is within `threshold` of the target on every aspect is
// returned, so the smallest successful weight wins. When every weight fails
// the lowest-loss iterate is returned with success == false.
template <typename T, LatentObjective<T> C>
EditResult<T> fgim_edit(std::span<const T> z, const text::AttributeVector& target, const FgimConfig& config,
                        const C& classifier) {
  config.validate();
  const auto origin = classifier.evaluate(z, target);
  EditResult<T> result;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<T> best(z.begin(), z.end());
  for (std::size_t i = 0; i < config.weights.size(); ++i) {
    double weight = config.weights[i];
    std::vector<T> current(z.begin(), z.end());
    const auto* step_grad = &origin.grad;
    clf::LatentEvaluation<T> here;
    for (std::size_t j = 0; j < config.s_steps; ++j) {
      for (std::size_t c = 0; c < current.size(); ++c) current[c] -= static_cast<T>(weight) * (*step_grad)[c];
      const double grad_norm = l2_norm<T>(*step_grad);
      here = classifier.evaluate(current, target);
      result.trace.steps.push_back(EditStep{i, j, weight, grad_norm, l2_distance<T>(current, z), here.loss,
                                            here.prediction});
      if (max_abs_error(target.values(), here.prediction) < config.threshold) {
        result.latent = std::move(current);
        result.success = true;
        result.trace.success_weight_index = i;
        return result;
      }
      if (here.loss < best_loss) {
        best_loss = here.loss;
        best = current;
      }
      weight *= config.decay;
      step_grad = &here.grad;
    }
  }
  result.latent = std::move(best);
  return result;
}

}  // namespace fgim::edit
