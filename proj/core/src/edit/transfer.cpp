#include "fgim/edit/transfer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fgim/eval/bleu.hpp"

namespace fgim::edit {

template <typename T>
TransferResult<T> transfer(const std::vector<std::string>& tokens, const text::AttributeVector& target,
                           const ae::Autoencoder<T>& model, const text::Vocab& vocab,
                           const clf::LatentClassifier<T>& classifier, const FgimConfig& config) {
  if (model.hyper().latent_dim != classifier.hyper().latent_dim) {
    throw IncompatibleModelError("autoencoder latent_dim " + std::to_string(model.hyper().latent_dim) +
                                 " differs from classifier latent_dim " +
                                 std::to_string(classifier.hyper().latent_dim));
  }
  const auto& hp = model.hyper();
  const auto ids = text::encode(tokens, vocab, hp.max_len);
  num::Tape<T> tape(num::GradMode::disabled);
  const auto z = model.encode_latent(tape, ids);
  std::vector<T> latent(z.data().begin(), z.data().end());
  auto edited = fgim_edit<T>(latent, target, config, classifier);
  const auto out_ids = model.greedy_decode(num::Tensor<T>::row(edited.latent), hp.max_len);

  TransferResult<T> result;
  result.source = tokens;
  result.target = target;
  result.success = edited.success;
  result.latent = std::move(latent);
  result.edited = std::move(edited.latent);
  result.output = text::decode(out_ids, vocab);
  result.trace = std::move(edited.trace);
  return result;
}

template <typename T>
std::vector<SweepRow> sweep_degrees(const SweepSample& sample, const ae::Autoencoder<T>& model,
                                    const text::Vocab& vocab, const clf::LatentClassifier<T>& classifier,
                                    const SweepModels& evaluators, const FgimConfig& base) {
  if (sample.sources.size() != sample.targets.size()) throw DimensionError("sweep: sources and targets differ in count");
  if (!sample.references.empty() && sample.references.size() != sample.sources.size()) {
    throw DimensionError("sweep: references and sources differ in count");
  }
  base.validate();
  const auto& refs = sample.references.empty() ? sample.sources : sample.references;
  std::vector<SweepRow> rows;
  for (double w : base.weights) {
    FgimConfig config = base;
    config.weights = {w};
    std::vector<std::vector<std::string>> outputs;
    double edit_sum = 0.0;
    std::size_t successes = 0;
    for (std::size_t i = 0; i < sample.sources.size(); ++i) {
      auto r = transfer<T>(sample.sources[i], sample.targets[i], model, vocab, classifier, config);
      edit_sum += l2_distance<T>(r.edited, r.latent);
      successes += r.success ? 1 : 0;
      outputs.push_back(std::move(r.output));
    }
    const auto n = static_cast<double>(sample.sources.size());
    SweepRow row;
    row.weight = w;
    if (n > 0) {
      if (evaluators.eval_classifier) {
        row.acc = eval::eval_accuracy(outputs, sample.targets, *evaluators.eval_classifier);
        row.acc_stderr = std::sqrt(row.acc * (1.0 - row.acc) / n);
      }
      row.bleu = eval::bleu(outputs, refs);
      if (evaluators.lm) row.ppl = evaluators.lm->perplexity(outputs);
      row.mean_edit_norm = edit_sum / n;
      row.success_rate = static_cast<double>(successes) / n;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(9);
  out << "weight,acc,bleu,ppl,mean_edit_norm,success_rate\n";
  for (const auto& r : rows) {
    out << r.weight << ',' << r.acc << ',' << r.bleu << ',' << r.ppl << ',' << r.mean_edit_norm << ','
        << r.success_rate << '\n';
  }
  return out.str();
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError(path.string() + ":0: cannot open for writing");
  out << sweep_csv(rows);
}

template TransferResult<float> transfer<float>(const std::vector<std::string>&, const text::AttributeVector&,
                                               const ae::Autoencoder<float>&, const text::Vocab&,
                                               const clf::LatentClassifier<float>&, const FgimConfig&);
template TransferResult<double> transfer<double>(const std::vector<std::string>&, const text::AttributeVector&,
                                                 const ae::Autoencoder<double>&, const text::Vocab&,
                                                 const clf::LatentClassifier<double>&, const FgimConfig&);
template std::vector<SweepRow> sweep_degrees<float>(const SweepSample&, const ae::Autoencoder<float>&,
                                                    const text::Vocab&, const clf::LatentClassifier<float>&,
                                                    const SweepModels&, const FgimConfig&);
template std::vector<SweepRow> sweep_degrees<double>(const SweepSample&, const ae::Autoencoder<double>&,
                                                     const text::Vocab&, const clf::LatentClassifier<double>&,
                                                     const SweepModels&, const FgimConfig&);

}  // namespace fgim::edit
