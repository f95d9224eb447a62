#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgim/numerics/params.hpp"
#include "fgim/numerics/tape.hpp"
#include "fgim/textdata/corpus.hpp"

namespace fgim::eval {

struct EvalClassifierOptions {
  std::size_t buckets = 4096;  // hashed 1- and 2-gram feature rows
  std::size_t dim = 16;
  std::size_t epochs = 5;
  std::size_t batch_size = 32;
  double lr = 0.01;
};

// Text-side attribute classifier: averaged hashed unigram/bigram embeddings
// feeding a linear layer with one sigmoid per aspect. It sees only raw
// sentences and labels, never latents.
class EvalClassifier {
 public:
  static EvalClassifier train(const text::Corpus& corpus, const EvalClassifierOptions& options, std::uint64_t seed);
  static EvalClassifier from_named(const EvalClassifierOptions& options, std::size_t attributes,
                                   const num::NamedTensors<float>& tensors);

  std::size_t attributes() const { return output_.cols(); }
  // Empty input falls back to the bias term.
  std::vector<double> predict(const std::vector<std::string>& tokens) const;
  std::vector<int> features(const std::vector<std::string>& tokens) const;

  num::NamedTensors<float> named_parameters() const;

 private:
  EvalClassifier(const EvalClassifierOptions& options, std::size_t attributes, std::uint64_t seed);
  num::Tensor<float> forward_logits(num::Tape<float>& tape, const std::vector<std::string>& tokens) const;

  EvalClassifierOptions options_;
  num::Tensor<float> embedding_;  // [buckets x dim]
  num::Tensor<float> output_;     // [dim x A]
  num::Tensor<float> bias_;       // [1 x A]
};

// True when every aspect of `prediction` lies on the same side of 0.5 as
// the target.
bool matches_target(const std::vector<double>& prediction, const text::AttributeVector& target);

double eval_accuracy(const std::vector<std::vector<std::string>>& sentences,
                     const std::vector<text::AttributeVector>& targets, const EvalClassifier& classifier);

}  // namespace fgim::eval
