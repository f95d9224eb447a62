#include "fgim/eval/eval_classifier.hpp"

#include <cmath>
#include <numeric>

#include "fgim/numerics/adam.hpp"
#include "fgim/numerics/random.hpp"

namespace fgim::eval {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

EvalClassifier::EvalClassifier(const EvalClassifierOptions& options, std::size_t attributes, std::uint64_t seed)
    : options_(options) {
  if (options.buckets == 0 || options.dim == 0) throw ContractError("eval classifier sizes must be positive");
  num::Rng rng(seed);
  const double bound = 1.0 / static_cast<double>(options.dim);
  embedding_ = num::uniform_init<float>({options.buckets, options.dim}, -bound, bound, rng, true);
  output_ = num::xavier_init<float>(options.dim, attributes, rng);
  bias_ = num::Tensor<float>::zeros({1, attributes}, true);
}

std::vector<int> EvalClassifier::features(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ids.push_back(static_cast<int>(fnv1a(tokens[i]) % options_.buckets));
    if (i + 1 < tokens.size()) {
      const auto h = fnv1a(tokens[i + 1], fnv1a("\x1f", fnv1a(tokens[i])));
      ids.push_back(static_cast<int>(h % options_.buckets));
    }
  }
  return ids;
}

num::Tensor<float> EvalClassifier::forward_logits(num::Tape<float>& tape,
                                                  const std::vector<std::string>& tokens) const {
  const auto ids = features(tokens);
  if (ids.empty()) return tape.add_row(num::Tensor<float>::zeros({1, output_.cols()}), bias_);
  const auto rows = tape.embedding_lookup(embedding_, ids);
  const auto mean = tape.scale(tape.sum_axis(rows, 0), 1.0f / static_cast<float>(ids.size()));
  return tape.add_row(tape.matmul(mean, output_), bias_);
}

EvalClassifier EvalClassifier::train(const text::Corpus& corpus, const EvalClassifierOptions& options,
                                     std::uint64_t seed) {
  if (corpus.empty()) throw ContractError("train_eval_classifier: empty corpus");
  EvalClassifier clf(options, corpus.attribute_count(), seed);
  const auto params = clf.named_parameters();
  auto tensors = num::tensors_of(params);
  auto state = num::make_adam_state<float>(tensors, {options.lr});
  num::Rng rng(seed + 1);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const auto end = std::min(start + options.batch_size, order.size());
      for (auto i = start; i < end; ++i) {
        const auto& ex = corpus[order[i]];
        num::Tape<float> tape;
        const auto logits = clf.forward_logits(tape, ex.tokens);
        std::vector<float> y(ex.attributes.values().begin(), ex.attributes.values().end());
        const auto loss = tape.bce_with_logits(logits, num::Tensor<float>::row(std::move(y)));
        tape.backward(tape.scale(loss, 1.0f / static_cast<float>(end - start)));
      }
      num::adam_step<float>(tensors, state);
      num::zero_grads(params);
    }
  }
  return clf;
}

EvalClassifier EvalClassifier::from_named(const EvalClassifierOptions& options, std::size_t attributes,
                                          const num::NamedTensors<float>& tensors) {
  EvalClassifier clf(options, attributes, 0);
  num::assign_values(clf.named_parameters(), tensors);
  return clf;
}

std::vector<double> EvalClassifier::predict(const std::vector<std::string>& tokens) const {
  num::Tape<float> tape(num::GradMode::disabled);
  const auto q = tape.sigmoid(forward_logits(tape, tokens));
  return {q.data().begin(), q.data().end()};
}

num::NamedTensors<float> EvalClassifier::named_parameters() const {
  return {{"evalclf.embedding", embedding_}, {"evalclf.output", output_}, {"evalclf.bias", bias_}};
}

bool matches_target(const std::vector<double>& prediction, const text::AttributeVector& target) {
  if (prediction.size() != target.size()) throw DimensionError("prediction and target differ in aspect count");
  for (std::size_t k = 0; k < prediction.size(); ++k) {
    if ((prediction[k] > 0.5) != (target[k] > 0.5)) return false;
  }
  return true;
}

double eval_accuracy(const std::vector<std::vector<std::string>>& sentences,
                     const std::vector<text::AttributeVector>& targets, const EvalClassifier& classifier) {
  if (sentences.empty()) throw ContractError("eval_accuracy: no sentences");
  if (sentences.size() != targets.size()) throw DimensionError("eval_accuracy: sentence and target counts differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) hits += matches_target(classifier.predict(sentences[i]), targets[i]);
  return static_cast<double>(hits) / static_cast<double>(sentences.size());
}

}  // namespace fgim::eval
