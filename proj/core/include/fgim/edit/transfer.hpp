#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fgim/autoencoder/autoencoder.hpp"
#include "fgim/edit/fgim.hpp"
#include "fgim/eval/eval_classifier.hpp"
#include "fgim/eval/ngram_lm.hpp"

namespace fgim::edit {

template <typename T>
struct TransferResult {
  std::vector<std::string> source;
  text::AttributeVector target;
  bool success = false;
  std::vector<T> latent;  // z
  std::vector<T> edited;  // z'
  std::vector<std::string> output;
  EditTrace trace;
};

// encode -> fgim_edit -> greedy decode. Throws IncompatibleModelError when
// the two models disagree on latent_dim.
template <typename T>
TransferResult<T> transfer(const std::vector<std::string>& tokens, const text::AttributeVector& target,
                           const ae::Autoencoder<T>& model, const text::Vocab& vocab,
                           const clf::LatentClassifier<T>& classifier, const FgimConfig& config);

struct SweepRow {
  double weight = 0.0;
  double acc = 0.0;         // evaluation-classifier target rate
  double acc_stderr = 0.0;  // sqrt(acc (1 - acc) / n), not written to CSV
  double bleu = 0.0;
  double ppl = 0.0;
  double mean_edit_norm = 0.0;
  double success_rate = 0.0;
};

// What a sweep runs on. With no references, BLEU is taken against sources.
struct SweepSample {
  std::vector<std::vector<std::string>> sources;
  std::vector<text::AttributeVector> targets;
  std::vector<std::vector<std::string>> references;
};

struct SweepModels {
  const eval::EvalClassifier* eval_classifier = nullptr;
  const eval::NGramLM* lm = nullptr;
};

// One row per weight of base.weights, each run with the singleton set {w}.
template <typename T>
std::vector<SweepRow> sweep_degrees(const SweepSample& sample, const ae::Autoencoder<T>& model,
                                    const text::Vocab& vocab, const clf::LatentClassifier<T>& classifier,
                                    const SweepModels& evaluators, const FgimConfig& base);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace fgim::edit
