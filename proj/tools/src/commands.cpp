#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fgim/autoencoder/autoencoder.hpp"
#include "fgim/classifier/latent_classifier.hpp"
#include "fgim/edit/transfer.hpp"
#include "fgim/eval/bleu.hpp"
#include "fgim/eval/projection.hpp"
#include "fgim/io/checkpoint.hpp"
#include "fgim/io/trace.hpp"
#include "fgim/textdata/dataset.hpp"
#include "fgim/textdata/synthetic.hpp"
#include "fgim/textdata/tokenize.hpp"

namespace fgim::cli {

namespace fs = std::filesystem;

namespace {

fs::path out_dir(const io::RunConfig& c) { return c.data.output_dir; }
fs::path vocab_path(const io::RunConfig& c) { return out_dir(c) / "vocab.txt"; }
fs::path ae_path(const io::RunConfig& c) { return out_dir(c) / "ae.ckpt"; }
fs::path clf_path(const io::RunConfig& c) { return out_dir(c) / "clf.ckpt"; }
fs::path eval_clf_path(const io::RunConfig& c) { return out_dir(c) / "eval_clf.ckpt"; }

text::DatasetSplits load_data(const io::RunConfig& c) {
  text::LoadOptions opt;
  opt.layout = c.data.layout;
  opt.prefix = c.data.prefix;
  opt.max_len = c.data.max_len;
  return text::load_dataset(c.data.dir, opt);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError(path.string() + ":0: cannot open for writing");
  return out;
}

std::vector<std::vector<std::string>> read_sentences(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  for (std::string line; std::getline(in, line);) out.push_back(text::tokenize(line));
  return out;
}

std::vector<std::vector<std::string>> read_sentences(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string() + ":0: cannot open");
  return read_sentences(in);
}

num::NamedTensors<float> load_archive(const fs::path& path, const std::string& what) {
  if (!fs::exists(path)) throw MissingCheckpointError("missing " + what + " checkpoint " + path.string());
  return io::load_checkpoint(path);
}

text::Vocab load_vocab(const io::RunConfig& c) {
  if (!fs::exists(vocab_path(c))) throw MissingCheckpointError("missing vocabulary " + vocab_path(c).string());
  return text::Vocab::load(vocab_path(c));
}

text::AttributeVector parse_target(const std::string& s, std::size_t aspects) {
  text::AttributeVector y;
  try {
    y = text::AttributeVector::parse(s);
  } catch (const Error& e) {
    throw MalformedTargetError("'" + s + "': " + e.what());
  }
  if (y.size() != aspects) {
    throw MalformedTargetError("'" + s + "' has " + std::to_string(y.size()) + " aspects, the classifier predicts " +
                               std::to_string(aspects));
  }
  return y;
}

text::AttributeVector flip(const text::AttributeVector& y) {
  std::vector<double> v;
  for (double x : y.values()) v.push_back(x >= 0.5 ? 0.0 : 1.0);
  return text::AttributeVector(v);
}

template <typename T>
ae::Autoencoder<T> load_autoencoder(const io::RunConfig& c, const text::Vocab& vocab) {
  const auto tensors = load_archive(ae_path(c), "autoencoder");
  const auto hp = io::autoencoder_hyper(c, vocab.size());
  const auto memory = io::entry_shape(tensors, "ae.decoder.memory.weight");
  if (memory.front() != hp.latent_dim) {
    throw IncompatibleModelError(ae_path(c).string() + " has latent_dim " + std::to_string(memory.front()) +
                                 ", the configuration asks for " + std::to_string(hp.latent_dim));
  }
  try {
    return ae::Autoencoder<T>::from_named(hp, io::cast_tensors<T>(tensors));
  } catch (const DimensionError& e) {
    throw IncompatibleModelError(ae_path(c).string() + " does not match the [ae] section: " + e.what());
  }
}

// The classifier's input width is read from the archive, not the config.
template <typename T>
clf::LatentClassifier<T> load_classifier(const io::RunConfig& c, std::size_t latent_dim) {
  const auto tensors = load_archive(clf_path(c), "classifier");
  const auto first = io::entry_shape(tensors, "clf.layer1.weight");
  const auto last = io::entry_shape(tensors, "clf.layer3.bias");
  if (first.front() != latent_dim) {
    throw IncompatibleModelError(clf_path(c).string() + " expects latent_dim " + std::to_string(first.front()) +
                                 " but " + ae_path(c).string() + " produces " + std::to_string(latent_dim));
  }
  try {
    return clf::LatentClassifier<T>::from_named(io::classifier_hyper(c, latent_dim, last.back()),
                                                io::cast_tensors<T>(tensors));
  } catch (const DimensionError& e) {
    throw IncompatibleModelError(clf_path(c).string() + " does not match the [classifier] section: " + e.what());
  }
}

eval::EvalClassifier load_eval_classifier(const io::RunConfig& c) {
  const auto tensors = load_archive(eval_clf_path(c), "evaluation classifier");
  const auto bias = io::entry_shape(tensors, "evalclf.bias");
  eval::EvalClassifierOptions opt;
  opt.epochs = c.classifier.eval_epochs;
  try {
    return eval::EvalClassifier::from_named(opt, bias.back(), tensors);
  } catch (const DimensionError& e) {
    throw CheckpointError(eval_clf_path(c).string() + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> sentences_of(const text::Corpus& corpus) {
  std::vector<std::vector<std::string>> out;
  for (const auto& ex : corpus) out.push_back(ex.tokens);
  return out;
}

template <typename T>
clf::LatentSet<T> latent_set(const ae::Autoencoder<T>& model, const text::Corpus& corpus, const text::Vocab& vocab) {
  clf::LatentSet<T> set{ae::encode_corpus(model, corpus, vocab), {}};
  for (const auto& ex : corpus) set.attributes.push_back(ex.attributes);
  return set;
}

template <typename F>
void with_precision(const io::RunConfig& c, F&& f) {
  if (c.ae.precision == io::Precision::f64) f(double{});
  else f(float{});
}

template <typename T>
void train_ae_impl(const io::RunConfig& c, Streams io) {
  const auto data = load_data(c);
  const auto vocab = text::build_vocab(data.train, c.data.min_count, c.data.max_vocab);
  const auto hp = io::autoencoder_hyper(c, vocab.size());
  fs::create_directories(out_dir(c));
  vocab.save(vocab_path(c));
  auto log = open_out(out_dir(c) / "ae_log.csv");
  log << "epoch,train_loss,dev_loss\n" << std::setprecision(9);
  ae::TrainOptions opt;
  opt.seed = c.ae.seed;
  opt.on_epoch = [&](const ae::EpochLog& e) {
    log << e.epoch << ',' << e.train_loss << ',' << e.dev_loss << '\n';
    io.err << "epoch " << e.epoch << ": train " << e.train_loss << ", dev " << e.dev_loss << "\n";
  };
  const auto trained = ae::train_autoencoder<T>(data.train, data.dev, vocab, hp, opt);
  io::save_checkpoint(trained.model.named_parameters(), ae_path(c));
  const auto score = ae::reconstruction_accuracy(trained.model, data.train, vocab);
  io.out << "vocabulary " << vocab.size() << ", best epoch " << trained.best_epoch << ", train token accuracy "
         << score.token_accuracy << "\n";
}

template <typename T>
void train_clf_impl(const io::RunConfig& c, Streams io) {
  const auto data = load_data(c);
  const auto vocab = load_vocab(c);
  const auto model = load_autoencoder<T>(c, vocab);
  const auto train = latent_set(model, data.train, vocab);
  const auto dev = latent_set(model, data.dev, vocab);
  const auto hp = io::classifier_hyper(c, model.hyper().latent_dim, data.train.attribute_count());
  auto log = open_out(out_dir(c) / "clf_log.csv");
  log << "epoch,train_loss,dev_loss,dev_accuracy\n" << std::setprecision(9);
  const auto trained = clf::train_classifier(train, dev, hp, c.classifier.seed, [&](const clf::ClassifierEpochLog& e) {
    log << e.epoch << ',' << e.train_loss << ',' << e.dev_loss << ',' << e.dev_accuracy << '\n';
  });
  io::save_checkpoint(trained.model.named_parameters(), clf_path(c));

  eval::EvalClassifierOptions opt;
  opt.epochs = c.classifier.eval_epochs;
  const auto evaluator = eval::EvalClassifier::train(data.train, opt, c.classifier.eval_seed);
  io::save_checkpoint(evaluator.named_parameters(), eval_clf_path(c));
  io.out << "latent classifier dev accuracy " << clf::latent_accuracy(trained.model, dev) << " (epoch "
         << trained.best_epoch << "), evaluation classifier dev accuracy "
         << eval::eval_accuracy(sentences_of(data.dev), latent_set(model, data.dev, vocab).attributes, evaluator)
         << "\n";
}

template <typename T>
void transfer_impl(const io::RunConfig& c, const TransferArgs& args, Streams io) {
  const auto vocab = load_vocab(c);
  const auto model = load_autoencoder<T>(c, vocab);
  const auto classifier = load_classifier<T>(c, model.hyper().latent_dim);
  const auto target = parse_target(args.target, classifier.hyper().attributes);
  const auto sentences = args.input ? read_sentences(*args.input) : read_sentences(io.in);

  std::ofstream file;
  if (args.output) file = open_out(*args.output);
  std::ostream& out = args.output ? file : io.out;
  auto trace = open_out(args.trace ? *args.trace : out_dir(c) / "trace.jsonl");
  std::size_t successes = 0;
  for (const auto& s : sentences) {
    const auto r = edit::transfer(s, target, model, vocab, classifier, c.fgim);
    out << text::join(r.output) << '\n';
    trace << io::trace_json(r, c.fgim) << '\n';
    successes += r.success ? 1 : 0;
  }
  io.err << successes << " of " << sentences.size() << " sentences reached the target\n";
}

template <typename T>
void sweep_impl(const io::RunConfig& c, const SweepArgs& args, Streams io) {
  const auto data = load_data(c);
  const auto vocab = load_vocab(c);
  const auto model = load_autoencoder<T>(c, vocab);
  const auto classifier = load_classifier<T>(c, model.hyper().latent_dim);
  const auto evaluator = load_eval_classifier(c);
  const auto lm = eval::train_lm(sentences_of(data.train));
  const auto fixed = args.target ? std::optional(parse_target(*args.target, classifier.hyper().attributes))
                                 : std::nullopt;
  edit::SweepSample sample;
  bool all_refs = true;
  const std::size_t n = args.limit ? std::min(args.limit, data.test.size()) : data.test.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ex = data.test[i];
    sample.sources.push_back(ex.tokens);
    sample.targets.push_back(fixed ? *fixed : flip(ex.attributes));
    all_refs = all_refs && ex.reference.has_value();
    if (ex.reference) sample.references.push_back(*ex.reference);
  }
  if (!all_refs) sample.references.clear();
  const auto rows = edit::sweep_degrees(sample, model, vocab, classifier, {&evaluator, &lm}, c.fgim);
  const auto path = args.output ? *args.output : out_dir(c) / "sweep.csv";
  open_out(path) << edit::sweep_csv(rows);
  io.out << edit::sweep_csv(rows);
}

template <typename T>
void export_impl(const io::RunConfig& c, const ExportArgs& args, Streams io) {
  const auto data = load_data(c);
  const auto vocab = load_vocab(c);
  const auto model = load_autoencoder<T>(c, vocab);
  const auto& corpus = args.split == "train" ? data.train : args.split == "dev" ? data.dev : data.test;
  const std::size_t n = args.limit ? std::min(args.limit, corpus.size()) : corpus.size();
  auto label_of = [&](const text::AttributeVector& y) {
    if (y.size() == 1 && corpus.attribute_names.size() == 2) return corpus.attribute_names[y[0] >= 0.5 ? 1 : 0];
    return y.to_string();
  };
  std::vector<eval::LatentPoint> points;
  std::vector<std::vector<T>> latents;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ids = text::encode(corpus[i].tokens, vocab, model.hyper().max_len);
    num::Tape<T> tape(num::GradMode::disabled);
    const auto z = model.encode_latent(tape, ids);
    latents.emplace_back(z.data().begin(), z.data().end());
    points.push_back({label_of(corpus[i].attributes), 0.0, {z.data().begin(), z.data().end()}});
  }
  if (args.edit) {
    const auto classifier = load_classifier<T>(c, model.hyper().latent_dim);
    for (double w : c.fgim.weights) {
      auto single = c.fgim;
      single.weights = {w};
      for (std::size_t i = 0; i < n; ++i) {
        const auto target = flip(corpus[i].attributes);
        const auto r = edit::fgim_edit<T>(latents[i], target, single, classifier);
        points.push_back({label_of(target), w, {r.latent.begin(), r.latent.end()}});
      }
    }
  }
  std::vector<std::vector<double>> values;
  for (const auto& p : points) values.push_back(p.values);
  const auto projection = eval::project_latents(values);
  const fs::path prefix = args.output_prefix ? *args.output_prefix : out_dir(c) / "latents";
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  eval::write_projection_csv(prefix.string() + ".csv", projection, points);
  eval::write_raw_latents(prefix.string() + "_raw.txt", points);
  io.out << points.size() << " latents, top-2 variance share " << projection.captured_share << "\n";
}

}  // namespace

void train_ae(const io::RunConfig& config, Streams io) {
  with_precision(config, [&](auto tag) { train_ae_impl<decltype(tag)>(config, io); });
}

void train_clf(const io::RunConfig& config, Streams io) {
  with_precision(config, [&](auto tag) { train_clf_impl<decltype(tag)>(config, io); });
}

void transfer(const io::RunConfig& config, const TransferArgs& args, Streams io) {
  with_precision(config, [&](auto tag) { transfer_impl<decltype(tag)>(config, args, io); });
}

void sweep(const io::RunConfig& config, const SweepArgs& args, Streams io) {
  with_precision(config, [&](auto tag) { sweep_impl<decltype(tag)>(config, args, io); });
}

void export_latents(const io::RunConfig& config, const ExportArgs& args, Streams io) {
  with_precision(config, [&](auto tag) { export_impl<decltype(tag)>(config, args, io); });
}

void evaluate(const io::RunConfig& config, const EvalArgs& args, Streams io) {
  const auto data = load_data(config);
  const auto evaluator = load_eval_classifier(config);
  const auto target = parse_target(args.target, evaluator.attributes());
  const auto outputs = read_sentences(args.input);
  const auto references = read_sentences(args.references);
  if (outputs.size() != references.size()) {
    throw IngestionError(args.references.string() + ":0: " + std::to_string(references.size()) +
                         " references for " + std::to_string(outputs.size()) + " sentences");
  }
  if (outputs.empty()) throw IngestionError(args.input.string() + ":0: no sentences");
  const double acc = eval::eval_accuracy(outputs, std::vector<text::AttributeVector>(outputs.size(), target), evaluator);
  const double bleu = eval::bleu(outputs, references);
  const double ppl = eval::train_lm(sentences_of(data.train)).perplexity(outputs);
  std::ostringstream csv;
  csv << std::setprecision(9) << "acc,bleu,ppl\n" << acc << ',' << bleu << ',' << ppl << '\n';
  if (args.output) open_out(*args.output) << csv.str();
  else io.out << csv.str();
}

void make_toy(const MakeToyArgs& args, Streams io) {
  text::SyntheticOptions opt;
  opt.aspects = args.aspects;
  opt.seed = args.seed;
  opt.train_size = args.train_size ? args.train_size : (args.aspects > 1 ? 4000 : 2000);
  const auto splits = text::make_sentiment_corpus(opt);
  fs::create_directories(args.output);
  text::write_tsv_layout(splits, args.output);
  auto config = io::toy_preset(args.aspects);
  config.data.dir = fs::absolute(args.output).string();
  config.data.output_dir = (fs::absolute(args.output) / "out").string();
  const auto path = args.output / "toy.cfg";
  open_out(path) << io::serialize_config(config);
  io.out << path.string() << "\n";
}

}  // namespace fgim::cli
