#include "fgim/autoencoder/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fgim/numerics/adam.hpp"
#include "fgim/textdata/batch.hpp"

namespace fgim::ae {

using text::Vocab;

void HyperParams::validate() const {
  if (vocab_size <= static_cast<std::size_t>(Vocab::kReserved)) throw ContractError("vocab_size must exceed the reserved ids");
  if (embed_dim == 0 || latent_dim == 0 || attn_dim == 0 || ffn_dim == 0 || gru_hidden == 0) {
    throw ContractError("model dimensions must be positive");
  }
  if (latent_dim != 2 * gru_hidden) {
    throw ContractError("latent_dim (" + std::to_string(latent_dim) + ") must equal 2 * gru_hidden (" +
                        std::to_string(gru_hidden) + ")");
  }
  if (heads == 0 || embed_dim % heads != 0) throw ContractError("embed_dim must be divisible by heads");
  if (encoder_layers == 0 || decoder_layers == 0) throw ContractError("need at least one layer per side");
  if (max_len < 2) throw ContractError("max_len must be at least 2");
  if (smoothing < 0.0 || smoothing >= 1.0) throw ContractError("smoothing must lie in [0,1)");
  if (dropout < 0.0 || dropout >= 1.0) throw ContractError("dropout must lie in [0,1)");
  if (lr <= 0.0) throw ContractError("learning rate must be positive");
  if (batch_size == 0) throw ContractError("batch_size must be positive");
}

template <typename T>
Autoencoder<T> Autoencoder<T>::init(const HyperParams& hp, std::uint64_t seed) {
  hp.validate();
  num::Rng rng(seed);
  Autoencoder m;
  m.hp_ = hp;
  const auto d = hp.embed_dim;
  m.embedding_ = num::xavier_init<T>(hp.vocab_size, d, rng);
  m.positions_ = sinusoidal_table<T>(hp.max_len + 1, d);
  for (std::size_t l = 0; l < hp.encoder_layers; ++l) {
    m.encoder_.push_back({LayerNorm<T>::init(d), LayerNorm<T>::init(d), Attention<T>::init(d, rng),
                          FeedForward<T>::init(d, hp.ffn_dim, rng)});
  }
  m.encoder_norm_ = LayerNorm<T>::init(d);
  m.gru_forward_ = Gru<T>::init(d, hp.gru_hidden, rng);
  m.gru_backward_ = Gru<T>::init(d, hp.gru_hidden, rng);
  m.pool_query_ = Linear<T>::init(2 * hp.gru_hidden, hp.attn_dim, rng);
  m.pool_key_ = Linear<T>::init(2 * hp.gru_hidden, hp.attn_dim, rng);
  m.pool_value_ = Linear<T>::init(2 * hp.gru_hidden, hp.latent_dim, rng);
  m.latent_to_memory_ = Linear<T>::init(hp.latent_dim, d, rng);
  for (std::size_t l = 0; l < hp.decoder_layers; ++l) {
    m.decoder_.push_back({LayerNorm<T>::init(d), LayerNorm<T>::init(d), LayerNorm<T>::init(d),
                          Attention<T>::init(d, rng), Attention<T>::init(d, rng),
                          FeedForward<T>::init(d, hp.ffn_dim, rng)});
  }
  m.decoder_norm_ = LayerNorm<T>::init(d);
  m.output_ = Linear<T>::init(d, hp.vocab_size, rng);
  return m;
}

template <typename T>
Autoencoder<T> Autoencoder<T>::from_named(const HyperParams& hp, const NamedTensors<T>& tensors) {
  auto m = init(hp, 0);
  num::assign_values(m.named_parameters(), tensors);
  return m;
}

template <typename T>
NamedTensors<T> Autoencoder<T>::named_parameters() const {
  NamedTensors<T> out;
  out.emplace_back("ae.embedding", embedding_);
  for (std::size_t l = 0; l < encoder_.size(); ++l) {
    const auto p = "ae.encoder." + std::to_string(l);
    encoder_[l].norm1.collect(p + ".norm1", out);
    encoder_[l].attention.collect(p + ".attention", out);
    encoder_[l].norm2.collect(p + ".norm2", out);
    encoder_[l].ffn.collect(p + ".ffn", out);
  }
  encoder_norm_.collect("ae.encoder.norm", out);
  gru_forward_.collect("ae.pool.gru_forward", out);
  gru_backward_.collect("ae.pool.gru_backward", out);
  pool_query_.collect("ae.pool.query", out);
  pool_key_.collect("ae.pool.key", out);
  pool_value_.collect("ae.pool.value", out);
  latent_to_memory_.collect("ae.decoder.memory", out);
  for (std::size_t l = 0; l < decoder_.size(); ++l) {
    const auto p = "ae.decoder." + std::to_string(l);
    decoder_[l].norm1.collect(p + ".norm1", out);
    decoder_[l].self_attention.collect(p + ".self_attention", out);
    decoder_[l].norm2.collect(p + ".norm2", out);
    decoder_[l].cross_attention.collect(p + ".cross_attention", out);
    decoder_[l].norm3.collect(p + ".norm3", out);
    decoder_[l].ffn.collect(p + ".ffn", out);
  }
  decoder_norm_.collect("ae.decoder.norm", out);
  output_.collect("ae.output", out);
  return out;
}

namespace {

template <typename T>
Tensor<T> leading_rows(const Tensor<T>& table, std::size_t n) {
  const auto d = table.cols();
  std::vector<T> values(table.data().begin(), table.data().begin() + static_cast<std::ptrdiff_t>(n * d));
  return Tensor<T>({n, d}, std::move(values));
}

template <typename T>
Tensor<T> maybe_dropout(Tape<T>& tape, const Tensor<T>& x, const ForwardContext& ctx) {
  if (!ctx.rng || ctx.dropout <= 0.0) return x;
  return tape.dropout(x, ctx.dropout, *ctx.rng);
}

}  // namespace

template <typename T>
Tensor<T> Autoencoder<T>::embed(Tape<T>& tape, std::span<const int> ids) const {
  if (ids.size() > hp_.max_len) {
    throw ContractError("sequence of " + std::to_string(ids.size()) + " ids exceeds max_len " +
                        std::to_string(hp_.max_len));
  }
  const auto tokens = tape.embedding_lookup(embedding_, ids);
  const auto scaled = tape.scale(tokens, std::sqrt(static_cast<T>(hp_.embed_dim)));
  return tape.add(scaled, leading_rows(positions_, ids.size()));
}

template <typename T>
Tensor<T> Autoencoder<T>::encode_latent(Tape<T>& tape, std::span<const int> ids, ForwardContext ctx) const {
  const auto len = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), Vocab::kPad) - ids.begin());
  if (len == 0) throw ContractError("encode_latent: sequence has no non-PAD ids");
  ids = ids.first(len);

  auto h = maybe_dropout(tape, embed(tape, ids), ctx);
  for (const auto& layer : encoder_) {
    const auto x = layer.norm1(tape, h);
    h = tape.add(h, maybe_dropout(tape, layer.attention(tape, x, x, hp_.heads, nullptr), ctx));
    h = tape.add(h, maybe_dropout(tape, layer.ffn(tape, layer.norm2(tape, h)), ctx));
  }
  const auto u = encoder_norm_(tape, h);
  const auto uh = tape.add(u, leading_rows(positions_, len));

  const auto states = tape.concat({gru_forward_.run(tape, uh, false), gru_backward_.run(tape, uh, true)}, 1);
  const auto q = pool_query_(tape, states);
  const auto k = pool_key_(tape, states);
  const auto v = pool_value_(tape, states);
  const T scale = T(1) / std::sqrt(static_cast<T>(hp_.attn_dim));
  const auto attended = tape.matmul(tape.softmax_rows(tape.scale(tape.matmul_nt(q, k), scale)), v);
  return tape.sum_axis(tape.sigmoid(attended), 0);
}

template <typename T>
Tensor<T> Autoencoder<T>::decoder_states(Tape<T>& tape, const Tensor<T>& z, std::span<const int> teacher,
                                         ForwardContext ctx) const {
  if (teacher.empty() || teacher.front() != Vocab::kBos) throw ContractError("decoder input must start with BOS");
  if (z.size() != hp_.latent_dim) {
    throw DimensionError("latent has " + std::to_string(z.size()) + " components, model expects " +
                         std::to_string(hp_.latent_dim));
  }
  const auto memory = latent_to_memory_(tape, z);  // [1 x d]
  auto h = maybe_dropout(tape, tape.add_row(embed(tape, teacher), memory), ctx);
  const auto mask = num::causal_mask<T>(teacher.size());
  for (const auto& layer : decoder_) {
    const auto x1 = layer.norm1(tape, h);
    h = tape.add(h, maybe_dropout(tape, layer.self_attention(tape, x1, x1, hp_.heads, &mask), ctx));
    const auto x2 = layer.norm2(tape, h);
    h = tape.add(h, maybe_dropout(tape, layer.cross_attention(tape, x2, memory, hp_.heads, nullptr), ctx));
    h = tape.add(h, maybe_dropout(tape, layer.ffn(tape, layer.norm3(tape, h)), ctx));
  }
  return decoder_norm_(tape, h);
}

template <typename T>
Tensor<T> Autoencoder<T>::decode_logits(Tape<T>& tape, const Tensor<T>& z, std::span<const int> teacher,
                                        ForwardContext ctx) const {
  return output_(tape, decoder_states(tape, z, teacher, ctx));
}

template <typename T>
std::vector<int> Autoencoder<T>::greedy_decode(const Tensor<T>& z, std::size_t max_len) const {
  max_len = std::min(max_len, hp_.max_len);
  std::vector<int> prefix{Vocab::kBos};
  std::vector<int> out;
  while (out.size() < max_len) {
    Tape<T> tape(num::GradMode::disabled);
    const auto states = decoder_states(tape, z, prefix, {});
    const auto last = output_(tape, tape.slice_rows(states, states.rows() - 1, states.rows()));
    const auto scores = last.data();
    const auto best = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    out.push_back(best);
    if (best == Vocab::kEos) break;
    prefix.push_back(best);
  }
  return out;
}

template <typename T>
Tensor<T> reconstruction_loss(Tape<T>& tape, const Tensor<T>& logits, std::span<const int> targets, double eps) {
  const auto n = logits.rows(), v = logits.cols();
  if (targets.size() != n) {
    throw DimensionError("reconstruction_loss: " + std::to_string(targets.size()) + " targets for " +
                         std::to_string(n) + " positions");
  }
  std::vector<int> ids(targets.begin(), targets.end());
  std::vector<T> keep(n);
  for (std::size_t i = 0; i < n; ++i) {
    keep[i] = ids[i] == Vocab::kPad ? T(0) : T(1);
    if (ids[i] == Vocab::kPad) ids[i] = 0;
  }
  const auto logp = tape.log_softmax_rows(logits);
  const auto target_term = tape.scale(tape.pick(logp, ids), static_cast<T>(1.0 - eps));
  const auto uniform_term = tape.scale(tape.sum_axis(logp, 1), static_cast<T>(eps / static_cast<double>(v)));
  const auto per_position = tape.mul(tape.add(target_term, uniform_term), Tensor<T>({n, 1}, std::move(keep)));
  return tape.scale(tape.sum(per_position), T(-1));
}

std::vector<int> teacher_input(std::span<const int> ids) {
  std::vector<int> teacher{Vocab::kBos};
  if (!ids.empty()) teacher.insert(teacher.end(), ids.begin(), ids.end() - 1);
  return teacher;
}

template <typename T>
double corpus_loss(const Autoencoder<T>& model, const text::Corpus& corpus, const Vocab& vocab) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& ex : corpus) {
    const auto ids = text::encode(ex.tokens, vocab, model.hyper().max_len);
    Tape<T> tape(num::GradMode::disabled);
    const auto z = model.encode_latent(tape, ids);
    const auto logits = model.decode_logits(tape, z, teacher_input(ids));
    total += static_cast<double>(reconstruction_loss(tape, logits, ids, model.hyper().smoothing).item());
    tokens += ids.size();
  }
  return tokens ? total / static_cast<double>(tokens) : 0.0;
}

template <typename T>
TrainedAutoencoder<T> train_autoencoder(const text::Corpus& train, const text::Corpus& dev, const Vocab& vocab,
                                        const HyperParams& hp, const TrainOptions& options) {
  if (train.empty()) throw ContractError("train_autoencoder: empty training corpus");
  if (hp.vocab_size != vocab.size()) throw ContractError("hyperparameter vocab_size disagrees with the vocabulary");
  TrainedAutoencoder<T> result{Autoencoder<T>::init(hp, options.seed), {}, 0};
  auto& model = result.model;
  const auto params = model.named_parameters();
  auto tensors = num::tensors_of(params);
  auto state = num::make_adam_state<T>(tensors, {hp.lr});
  num::Rng dropout_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  const ForwardContext ctx{&dropout_rng, hp.dropout};

  double best_dev = std::numeric_limits<double>::infinity();
  NamedTensors<T> best;
  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    auto batches = text::batch_iter(train, vocab, hp.batch_size, true, options.seed + epoch, hp.max_len);
    double epoch_loss = 0.0;
    std::size_t epoch_tokens = 0;
    while (auto batch = batches.next()) {
      std::size_t batch_tokens = 0;
      for (auto len : batch->lengths) batch_tokens += len;
      const T norm = T(1) / static_cast<T>(batch_tokens);
      for (std::size_t b = 0; b < batch->size; ++b) {
        const auto ids = batch->row(b);
        Tape<T> tape;
        const auto z = model.encode_latent(tape, ids, ctx);
        const auto logits = model.decode_logits(tape, z, teacher_input(ids), ctx);
        const auto loss = reconstruction_loss(tape, logits, ids, hp.smoothing);
        const double value = static_cast<double>(loss.item());
        if (!std::isfinite(value)) throw TrainingError("autoencoder loss diverged in epoch " + std::to_string(epoch));
        epoch_loss += value;
        tape.backward(tape.scale(loss, norm));
      }
      epoch_tokens += batch_tokens;
      num::adam_step<T>(tensors, state);
      num::zero_grads(params);
    }
    EpochLog log{epoch, epoch_loss / static_cast<double>(epoch_tokens),
                 dev.empty() ? epoch_loss / static_cast<double>(epoch_tokens) : corpus_loss(model, dev, vocab)};
    result.history.push_back(log);
    if (options.on_epoch) options.on_epoch(log);
    if (log.dev_loss < best_dev) {
      best_dev = log.dev_loss;
      result.best_epoch = epoch;
      best.clear();
      for (const auto& [name, t] : params) best.emplace_back(name, t.clone());
    }
  }
  if (!best.empty()) num::assign_values(params, best);
  return result;
}

template <typename T>
ReconstructionScore reconstruction_accuracy(const Autoencoder<T>& model, const text::Corpus& corpus,
                                            const Vocab& vocab) {
  std::size_t matched = 0, total = 0, exact = 0;
  for (const auto& ex : corpus) {
    const auto ids = text::encode(ex.tokens, vocab, model.hyper().max_len);
    Tape<T> tape(num::GradMode::disabled);
    const auto z = model.encode_latent(tape, ids);
    const auto out = model.greedy_decode(z, model.hyper().max_len);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ids.size() && i < out.size(); ++i) hits += ids[i] == out[i] ? 1 : 0;
    matched += hits;
    total += ids.size();
    exact += (out == ids) ? 1 : 0;
  }
  if (total == 0) return {};
  return {static_cast<double>(matched) / static_cast<double>(total),
          static_cast<double>(exact) / static_cast<double>(corpus.size())};
}

template <typename T>
std::vector<std::vector<T>> encode_corpus(const Autoencoder<T>& model, const text::Corpus& corpus,
                                          const Vocab& vocab) {
  std::vector<std::vector<T>> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus) {
    const auto ids = text::encode(ex.tokens, vocab, model.hyper().max_len);
    Tape<T> tape(num::GradMode::disabled);
    const auto z = model.encode_latent(tape, ids);
    out.emplace_back(z.data().begin(), z.data().end());
  }
  return out;
}

#define FGIM_INSTANTIATE(T)                                                                                         \
  template class Autoencoder<T>;                                                                                     \
  template Tensor<T> reconstruction_loss<T>(Tape<T>&, const Tensor<T>&, std::span<const int>, double);              \
  template double corpus_loss<T>(const Autoencoder<T>&, const text::Corpus&, const Vocab&);                          \
  template TrainedAutoencoder<T> train_autoencoder<T>(const text::Corpus&, const text::Corpus&, const Vocab&,        \
                                                      const HyperParams&, const TrainOptions&);                      \
  template ReconstructionScore reconstruction_accuracy<T>(const Autoencoder<T>&, const text::Corpus&, const Vocab&); \
  template std::vector<std::vector<T>> encode_corpus<T>(const Autoencoder<T>&, const text::Corpus&, const Vocab&);

FGIM_INSTANTIATE(float)
FGIM_INSTANTIATE(double)
#undef FGIM_INSTANTIATE

}  // namespace fgim::ae
