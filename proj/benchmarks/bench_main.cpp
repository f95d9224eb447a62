#include <benchmark/benchmark.h>

#include "fgim/autoencoder/autoencoder.hpp"
#include "fgim/classifier/latent_classifier.hpp"
#include "fgim/edit/fgim.hpp"
#include "fgim/eval/bleu.hpp"
#include "fgim/eval/ngram_lm.hpp"
#include "fgim/numerics/random.hpp"
#include "fgim/numerics/tape.hpp"

using namespace fgim;

namespace {

num::Tensor<float> random_matrix(std::size_t r, std::size_t c, num::Rng& rng) {
  std::vector<float> v(r * c);
  for (auto& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return num::Tensor<float>({r, c}, std::move(v), true);
}

std::vector<std::vector<std::string>> random_sentences(std::size_t n, std::size_t vocab, num::Rng& rng) {
  std::vector<std::vector<std::string>> out(n);
  for (auto& s : out) {
    const auto len = 5 + rng.index(11);
    for (std::size_t i = 0; i < len; ++i) s.push_back("w" + std::to_string(rng.index(vocab)));
  }
  return out;
}

ae::HyperParams full_sized() {
  ae::HyperParams hp;
  hp.vocab_size = 9640;
  return hp;
}

}  // namespace

static void BM_MatmulForwardBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  num::Rng rng(1);
  auto a = random_matrix(n, n, rng);
  auto b = random_matrix(n, n, rng);
  for (auto _ : state) {
    num::Tape<float> tape;
    const auto loss = tape.sum(tape.matmul(a, b));
    tape.backward(loss);
    benchmark::DoNotOptimize(a.grad().data());
    a.zero_grad();
    b.zero_grad();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_MatmulForwardBackward)->Arg(32)->Arg(128)->Arg(256);

static void BM_EncodeLatent(benchmark::State& state) {
  const auto model = ae::Autoencoder<float>::init(full_sized(), 1);
  num::Rng rng(2);
  std::vector<int> ids(static_cast<std::size_t>(state.range(0)));
  for (auto& id : ids) id = static_cast<int>(text::Vocab::kReserved + rng.index(9000));
  for (auto _ : state) {
    num::Tape<float> tape(num::GradMode::disabled);
    benchmark::DoNotOptimize(model.encode_latent(tape, ids).data().data());
  }
}
BENCHMARK(BM_EncodeLatent)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_FgimEdit(benchmark::State& state) {
  clf::ClassifierHyperParams hp;
  const auto model = clf::LatentClassifier<float>::init(hp, 3);
  num::Rng rng(4);
  std::vector<float> z(hp.latent_dim);
  for (auto& v : z) v = static_cast<float>(rng.uniform(0.0, 15.0));
  edit::FgimConfig config;
  config.threshold = 1e-9;  // never met, so every weight runs its full budget
  const text::AttributeVector target({1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(edit::fgim_edit<float>(z, target, config, model).latent.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.weights.size() * config.s_steps));
}
BENCHMARK(BM_FgimEdit)->Unit(benchmark::kMillisecond);

static void BM_Bleu(benchmark::State& state) {
  num::Rng rng(5);
  const auto hyp = random_sentences(static_cast<std::size_t>(state.range(0)), 50, rng);
  const auto ref = random_sentences(hyp.size(), 50, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval::bleu(hyp, ref));
}
BENCHMARK(BM_Bleu)->Arg(500)->Arg(2000);

static void BM_LmTrain(benchmark::State& state) {
  num::Rng rng(6);
  const auto corpus = random_sentences(static_cast<std::size_t>(state.range(0)), 2000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval::train_lm(corpus).vocab_size());
}
BENCHMARK(BM_LmTrain)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_LmPerplexity(benchmark::State& state) {
  num::Rng rng(7);
  const auto lm = eval::train_lm(random_sentences(5000, 2000, rng));
  const auto test = random_sentences(500, 2000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lm.perplexity(test));
}
BENCHMARK(BM_LmPerplexity)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
