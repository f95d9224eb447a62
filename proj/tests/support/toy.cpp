#include "toy.hpp"

#include <iostream>

namespace fgim::testkit {

ToyOptions toy_options(std::size_t aspects) {
  ToyOptions o;
  o.corpus.aspects = aspects;
  o.corpus.train_size = aspects > 1 ? 4000 : 2000;
  o.config = io::toy_preset(aspects);
  return o;
}

text::AttributeVector flipped(const text::AttributeVector& y) {
  std::vector<double> v;
  for (double x : y.values()) v.push_back(1.0 - x);
  return text::AttributeVector(std::move(v));
}

namespace {

template <typename T>
clf::LatentSet<T> latents_of(const ae::Autoencoder<T>& model, const text::Corpus& corpus, const text::Vocab& vocab) {
  clf::LatentSet<T> set{ae::encode_corpus(model, corpus, vocab), {}};
  for (const auto& ex : corpus) set.attributes.push_back(ex.attributes);
  return set;
}

std::vector<std::vector<std::string>> sentences(const text::Corpus& corpus) {
  std::vector<std::vector<std::string>> out;
  for (const auto& ex : corpus) out.push_back(ex.tokens);
  return out;
}

}  // namespace

template <typename T>
ToyModels<T> train_toy(const ToyOptions& options) {
  const auto& config = options.config;
  auto splits = text::make_sentiment_corpus(options.corpus);
  auto vocab = text::build_vocab(splits.train, config.data.min_count, config.data.max_vocab);

  ae::TrainOptions ae_options;
  ae_options.seed = config.ae.seed;
  if (options.verbose) {
    ae_options.on_epoch = [](const ae::EpochLog& log) {
      std::cout << "  ae epoch " << log.epoch << " train " << log.train_loss << " dev " << log.dev_loss << "\n";
    };
  }
  auto trained = ae::train_autoencoder<T>(splits.train, splits.dev, vocab,
                                          io::autoencoder_hyper(config, vocab.size()), ae_options);
  auto train_latents = latents_of(trained.model, splits.train, vocab);
  auto dev_latents = latents_of(trained.model, splits.dev, vocab);
  auto hp = io::classifier_hyper(config, trained.model.hyper().latent_dim, splits.train.attribute_count());
  auto classifier = clf::train_classifier<T>(train_latents, dev_latents, hp, config.classifier.seed);
  eval::EvalClassifierOptions eval_options;
  eval_options.epochs = config.classifier.eval_epochs;
  auto evaluator = eval::EvalClassifier::train(splits.train, eval_options, config.classifier.eval_seed);
  auto lm = eval::train_lm(sentences(splits.train));
  return ToyModels<T>{std::move(splits),        std::move(vocab),      std::move(trained),
                      std::move(train_latents), std::move(dev_latents), std::move(classifier),
                      std::move(evaluator),     std::move(lm)};
}

template ToyModels<float> train_toy<float>(const ToyOptions&);
template ToyModels<double> train_toy<double>(const ToyOptions&);

}  // namespace fgim::testkit
