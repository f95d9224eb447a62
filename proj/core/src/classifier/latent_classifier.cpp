#include "fgim/classifier/latent_classifier.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "fgim/numerics/adam.hpp"

namespace fgim::clf {

void ClassifierHyperParams::validate() const {
  if (latent_dim == 0 || hidden1 == 0 || hidden2 == 0 || attributes == 0) {
    throw ContractError("classifier dimensions must be positive");
  }
  if (lr <= 0.0) throw ContractError("classifier learning rate must be positive");
  if (batch_size == 0) throw ContractError("classifier batch_size must be positive");
}

template <typename T>
LatentClassifier<T> LatentClassifier<T>::init(const ClassifierHyperParams& hp, std::uint64_t seed) {
  hp.validate();
  num::Rng rng(seed);
  LatentClassifier c;
  c.hp_ = hp;
  c.layer1_ = ae::Linear<T>::init(hp.latent_dim, hp.hidden1, rng);
  c.layer2_ = ae::Linear<T>::init(hp.hidden1, hp.hidden2, rng);
  c.layer3_ = ae::Linear<T>::init(hp.hidden2, hp.attributes, rng);
  return c;
}

template <typename T>
LatentClassifier<T> LatentClassifier<T>::from_named(const ClassifierHyperParams& hp, const NamedTensors<T>& tensors) {
  auto c = init(hp, 0);
  num::assign_values(c.named_parameters(), tensors);
  return c;
}

template <typename T>
NamedTensors<T> LatentClassifier<T>::named_parameters() const {
  NamedTensors<T> out;
  layer1_.collect("clf.layer1", out);
  layer2_.collect("clf.layer2", out);
  layer3_.collect("clf.layer3", out);
  return out;
}

template <typename T>
Tensor<T> LatentClassifier<T>::forward(Tape<T>& tape, const Tensor<T>& z, bool frozen) const {
  if (z.cols() != hp_.latent_dim) {
    throw DimensionError("classifier expects latent_dim " + std::to_string(hp_.latent_dim) + ", got " +
                         num::to_string(z.shape()));
  }
  auto view = [frozen](const ae::Linear<T>& l) {
    return frozen ? ae::Linear<T>{l.weight.detached(), l.bias.detached()} : l;
  };
  const auto h1 = tape.sigmoid(view(layer1_)(tape, z));
  const auto h2 = tape.sigmoid(view(layer2_)(tape, h1));
  return view(layer3_)(tape, h2);
}

template <typename T>
Tensor<T> LatentClassifier<T>::logits(Tape<T>& tape, const Tensor<T>& z) const {
  return forward(tape, z, false);
}

template <typename T>
std::vector<double> LatentClassifier<T>::predict(std::span<const T> z) const {
  Tape<T> tape(num::GradMode::disabled);
  const auto q = tape.sigmoid(forward(tape, Tensor<T>::row({z.begin(), z.end()}), true));
  return {q.data().begin(), q.data().end()};
}

template <typename T>
LatentEvaluation<T> LatentClassifier<T>::evaluate(std::span<const T> z, const text::AttributeVector& target) const {
  if (target.size() != hp_.attributes) {
    throw DimensionError("target has " + std::to_string(target.size()) + " aspects, classifier predicts " +
                         std::to_string(hp_.attributes));
  }
  Tape<T> tape;
  const auto zt = Tensor<T>::row({z.begin(), z.end()}, true);
  const auto l = forward(tape, zt, true);
  std::vector<T> y(target.values().begin(), target.values().end());
  const auto loss = tape.bce_with_logits(l, Tensor<T>::row(std::move(y)), hp_.loss);
  const auto q = tape.sigmoid(l);
  tape.backward(loss);
  return {static_cast<double>(loss.item()), {zt.grad().begin(), zt.grad().end()}, {q.data().begin(), q.data().end()}};
}

double classifier_loss(std::span<const double> q, std::span<const double> target, AttributeLoss form) {
  if (q.size() != target.size()) throw DimensionError("classifier_loss: prediction and target sizes differ");
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0 && q[i] < 1.0)) throw DomainError("classifier_loss: prediction " + std::to_string(q[i]) + " outside (0,1)");
    total -= target[i] * std::log(q[i]);
    if (form == AttributeLoss::binary) total -= (1.0 - target[i]) * std::log(1.0 - q[i]);
  }
  return total;
}

template <typename T>
double latent_accuracy(const LatentClassifier<T>& model, const LatentSet<T>& data) {
  if (data.latents.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.latents.size(); ++i) {
    const auto q = model.predict(data.latents[i]);
    bool ok = true;
    for (std::size_t k = 0; k < q.size(); ++k) ok = ok && ((q[k] > 0.5) == (data.attributes[i][k] > 0.5));
    correct += ok ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.latents.size());
}

template <typename T>
double latent_loss(const LatentClassifier<T>& model, const LatentSet<T>& data) {
  if (data.latents.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.latents.size(); ++i) {
    total += model.evaluate(data.latents[i], data.attributes[i]).loss;
  }
  return total / static_cast<double>(data.latents.size());
}

template <typename T>
TrainedClassifier<T> train_classifier(const LatentSet<T>& train, const LatentSet<T>& dev,
                                      const ClassifierHyperParams& hp, std::uint64_t seed,
                                      const std::function<void(const ClassifierEpochLog&)>& on_epoch) {
  if (train.latents.empty()) throw ContractError("train_classifier: no training latents");
  if (train.latents.size() != train.attributes.size()) throw DimensionError("latents and labels differ in count");
  TrainedClassifier<T> result{LatentClassifier<T>::init(hp, seed), {}, 0};
  const auto params = result.model.named_parameters();
  auto tensors = num::tensors_of(params);
  auto state = num::make_adam_state<T>(tensors, {hp.lr});
  num::Rng rng(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<std::size_t> order(train.latents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  double best_acc = -1.0, best_loss = std::numeric_limits<double>::infinity();
  NamedTensors<T> best;
  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      const auto end = std::min(start + hp.batch_size, order.size());
      std::vector<T> zs, ys;
      for (auto i = start; i < end; ++i) {
        const auto& z = train.latents[order[i]];
        zs.insert(zs.end(), z.begin(), z.end());
        const auto y = train.attributes[order[i]].values();
        ys.insert(ys.end(), y.begin(), y.end());
      }
      const auto rows = end - start;
      Tape<T> tape;
      const auto l = result.model.logits(tape, Tensor<T>({rows, hp.latent_dim}, std::move(zs)));
      const auto loss = tape.bce_with_logits(l, Tensor<T>({rows, hp.attributes}, std::move(ys)), hp.loss);
      const double value = static_cast<double>(loss.item());
      if (!std::isfinite(value)) throw TrainingError("classifier loss diverged in epoch " + std::to_string(epoch));
      epoch_loss += value;
      tape.backward(tape.scale(loss, T(1) / static_cast<T>(rows)));
      num::adam_step<T>(tensors, state);
      num::zero_grads(params);
    }
    const auto& held_out = dev.latents.empty() ? train : dev;
    ClassifierEpochLog log{epoch, epoch_loss / static_cast<double>(order.size()), latent_loss(result.model, held_out),
                           latent_accuracy(result.model, held_out)};
    result.history.push_back(log);
    if (on_epoch) on_epoch(log);
    // equal accuracy: the lower loss is the more confident model, which FGIM needs to reach tight thresholds
    if (log.dev_accuracy > best_acc || (log.dev_accuracy == best_acc && log.dev_loss < best_loss)) {
      best_acc = log.dev_accuracy;
      best_loss = log.dev_loss;
      result.best_epoch = epoch;
      best.clear();
      for (const auto& [name, t] : params) best.emplace_back(name, t.clone());
    }
  }
  num::assign_values(params, best);
  return result;
}

template class LatentClassifier<float>;
template class LatentClassifier<double>;
template double latent_accuracy<float>(const LatentClassifier<float>&, const LatentSet<float>&);
template double latent_accuracy<double>(const LatentClassifier<double>&, const LatentSet<double>&);
template double latent_loss<float>(const LatentClassifier<float>&, const LatentSet<float>&);
template double latent_loss<double>(const LatentClassifier<double>&, const LatentSet<double>&);
template TrainedClassifier<float> train_classifier<float>(const LatentSet<float>&, const LatentSet<float>&,
                                                          const ClassifierHyperParams&, std::uint64_t,
                                                          const std::function<void(const ClassifierEpochLog&)>&);
template TrainedClassifier<double> train_classifier<double>(const LatentSet<double>&, const LatentSet<double>&,
                                                            const ClassifierHyperParams&, std::uint64_t,
                                                            const std::function<void(const ClassifierEpochLog&)>&);

}  // namespace fgim::clf
