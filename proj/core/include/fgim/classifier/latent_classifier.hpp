#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fgim/autoencoder/layers.hpp"
#include "fgim/textdata/attributes.hpp"

namespace fgim::clf {

using num::AttributeLoss;
using num::NamedTensors;
using num::Tape;
using num::Tensor;

struct ClassifierHyperParams {
  std::size_t latent_dim = 256;
  std::size_t hidden1 = 100;
  std::size_t hidden2 = 50;
  std::size_t attributes = 1;
  AttributeLoss loss = AttributeLoss::binary;
  double lr = 0.001;
  std::size_t batch_size = 128;
  std::size_t epochs = 20;

  void validate() const;
  bool operator==(const ClassifierHyperParams&) const = default;
};

// Loss, gradient and prediction of the attribute objective at one latent.
template <typename T>
struct LatentEvaluation {
  double loss = 0.0;
  std::vector<T> grad;             // d loss / d z
  std::vector<double> prediction;  // C(z), one entry per aspect
};

// Three linear layers (latent -> h1 -> h2 -> A), each followed by a sigmoid.
template <typename T>
class LatentClassifier {
 public:
  static LatentClassifier init(const ClassifierHyperParams& hp, std::uint64_t seed);
  static LatentClassifier from_named(const ClassifierHyperParams& hp, const NamedTensors<T>& tensors);

  const ClassifierHyperParams& hyper() const { return hp_; }

  // Pre-sigmoid outputs for z [n x latent] -> [n x A].
  Tensor<T> logits(Tape<T>& tape, const Tensor<T>& z) const;
  Tensor<T> classify(Tape<T>& tape, const Tensor<T>& z) const { return tape.sigmoid(logits(tape, z)); }

  std::vector<double> predict(std::span<const T> z) const;

  // Gradient of the attribute loss with respect to z. Parameters are read
  // through a detached view and never receive gradient.
  LatentEvaluation<T> evaluate(std::span<const T> z, const text::AttributeVector& target) const;

  NamedTensors<T> named_parameters() const;

 private:
  LatentClassifier() = default;
  Tensor<T> forward(Tape<T>& tape, const Tensor<T>& z, bool frozen) const;

  ClassifierHyperParams hp_;
  ae::Linear<T> layer1_, layer2_, layer3_;
};

// Same as LatentClassifier::evaluate; named for the operation it performs.
template <typename T>
std::vector<T> grad_wrt_latent(std::span<const T> z, const text::AttributeVector& target,
                               const LatentClassifier<T>& classifier) {
  return classifier.evaluate(z, target).grad;
}

// Per-aspect attribute loss on probabilities. Throws DomainError unless every
// q is strictly inside (0,1).
double classifier_loss(std::span<const double> q, std::span<const double> target,
                       AttributeLoss form = AttributeLoss::binary);

// A latent dataset: row i of `latents` is labelled by attributes[i].
template <typename T>
struct LatentSet {
  std::vector<std::vector<T>> latents;
  std::vector<text::AttributeVector> attributes;
};

struct ClassifierEpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_loss = 0.0;  // mean attribute loss per example
  double dev_accuracy = 0.0;
};

template <typename T>
struct TrainedClassifier {
  LatentClassifier<T> model;  // best dev accuracy, ties broken by lower dev loss
  std::vector<ClassifierEpochLog> history;
  std::size_t best_epoch = 0;
};

// Fraction of rows whose prediction is on the target's side of 0.5 for
// every aspect.
template <typename T>
double latent_accuracy(const LatentClassifier<T>& model, const LatentSet<T>& data);

// Mean attribute loss per row.
template <typename T>
double latent_loss(const LatentClassifier<T>& model, const LatentSet<T>& data);

// Adam on precomputed (z, y) pairs; the encoder is not involved.
template <typename T>
TrainedClassifier<T> train_classifier(const LatentSet<T>& train, const LatentSet<T>& dev,
                                      const ClassifierHyperParams& hp, std::uint64_t seed,
                                      const std::function<void(const ClassifierEpochLog&)>& on_epoch = {});

}  // namespace fgim::clf
