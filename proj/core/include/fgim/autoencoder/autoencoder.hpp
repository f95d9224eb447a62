#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fgim/autoencoder/layers.hpp"
#include "fgim/textdata/corpus.hpp"
#include "fgim/textdata/vocab.hpp"

namespace fgim::ae {

struct HyperParams {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 256;
  std::size_t latent_dim = 256;
  std::size_t attn_dim = 256;   // pooling self-attention
  std::size_t ffn_dim = 1024;
  std::size_t gru_hidden = 128;  // per direction
  std::size_t encoder_layers = 2;
  std::size_t decoder_layers = 2;
  std::size_t heads = 4;
  std::size_t max_len = 16;  // encoded ids, EOS included
  double smoothing = 0.1;
  double dropout = 0.1;
  double lr = 0.001;
  std::size_t batch_size = 128;
  std::size_t epochs = 10;

  // Throws ContractError on inconsistent sizes.
  void validate() const;
  bool operator==(const HyperParams&) const = default;
};

// Dropout is applied only when a generator is supplied.
struct ForwardContext {
  num::Rng* rng = nullptr;
  double dropout = 0.0;
};

// Transformer encoder -> (+ positions) -> bidirectional GRU -> self-attention
// -> sigmoid -> masked sum gives the latent z; a Transformer decoder
// conditioned on z reconstructs the sentence.
template <typename T>
class Autoencoder {
 public:
  static Autoencoder init(const HyperParams& hp, std::uint64_t seed);
  // Rebuilds a model from named tensors (e.g. a loaded checkpoint).
  static Autoencoder from_named(const HyperParams& hp, const NamedTensors<T>& tensors);

  const HyperParams& hyper() const { return hp_; }

  // ids: one sentence, optionally right-padded with PAD. Returns z [1 x latent].
  Tensor<T> encode_latent(Tape<T>& tape, std::span<const int> ids, ForwardContext ctx = {}) const;

  // Per-position vocabulary logits [len(teacher) x v]; teacher starts with BOS.
  Tensor<T> decode_logits(Tape<T>& tape, const Tensor<T>& z, std::span<const int> teacher,
                          ForwardContext ctx = {}) const;

  // Argmax decoding from BOS until EOS or max_len ids. EOS, when produced, is
  // the last element.
  std::vector<int> greedy_decode(const Tensor<T>& z, std::size_t max_len) const;

  NamedTensors<T> named_parameters() const;

 private:
  struct EncoderLayer {
    LayerNorm<T> norm1, norm2;
    Attention<T> attention;
    FeedForward<T> ffn;
  };
  struct DecoderLayer {
    LayerNorm<T> norm1, norm2, norm3;
    Attention<T> self_attention, cross_attention;
    FeedForward<T> ffn;
  };

  Autoencoder() = default;
  Tensor<T> decoder_states(Tape<T>& tape, const Tensor<T>& z, std::span<const int> teacher,
                           ForwardContext ctx) const;
  Tensor<T> embed(Tape<T>& tape, std::span<const int> ids) const;

  HyperParams hp_;
  Tensor<T> embedding_;  // [v x d], shared by encoder and decoder inputs
  Tensor<T> positions_;  // constant sinusoidal table
  std::vector<EncoderLayer> encoder_;
  LayerNorm<T> encoder_norm_;
  Gru<T> gru_forward_, gru_backward_;
  Linear<T> pool_query_, pool_key_, pool_value_;
  Linear<T> latent_to_memory_;
  std::vector<DecoderLayer> decoder_;
  LayerNorm<T> decoder_norm_;
  Linear<T> output_;
};

// Label-smoothed reconstruction loss summed over non-PAD target positions:
// -[(1 - eps) log p_target + (eps / v) sum_i log p_i] per position.
template <typename T>
Tensor<T> reconstruction_loss(Tape<T>& tape, const Tensor<T>& logits, std::span<const int> targets, double eps);

// BOS + ids without the final id: the teacher-forcing input for ids.
std::vector<int> teacher_input(std::span<const int> ids);

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // per target token
  double dev_loss = 0.0;
};

struct TrainOptions {
  std::uint64_t seed = 1;
  // Called after every epoch; useful for progress output.
  std::function<void(const EpochLog&)> on_epoch;
};

template <typename T>
struct TrainedAutoencoder {
  Autoencoder<T> model;  // parameters from the epoch with the lowest dev loss
  std::vector<EpochLog> history;
  std::size_t best_epoch = 0;
};

// Adam with teacher forcing. Throws TrainingError if the loss turns NaN.
template <typename T>
TrainedAutoencoder<T> train_autoencoder(const text::Corpus& train, const text::Corpus& dev, const text::Vocab& vocab,
                                        const HyperParams& hp, const TrainOptions& options);

// Mean per-token loss over a corpus, no dropout.
template <typename T>
double corpus_loss(const Autoencoder<T>& model, const text::Corpus& corpus, const text::Vocab& vocab);

struct ReconstructionScore {
  double token_accuracy = 0.0;     // position-wise matches over source ids (EOS included)
  double sentence_accuracy = 0.0;  // exact greedy reproductions
};

template <typename T>
ReconstructionScore reconstruction_accuracy(const Autoencoder<T>& model, const text::Corpus& corpus,
                                            const text::Vocab& vocab);

// z for each sentence, as rows of a [n x latent] matrix in corpus order.
template <typename T>
std::vector<std::vector<T>> encode_corpus(const Autoencoder<T>& model, const text::Corpus& corpus,
                                          const text::Vocab& vocab);

}  // namespace fgim::ae
