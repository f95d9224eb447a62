// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every selected criterion passes.
//
//   fgim_acceptance [--workdir DIR] [--only N[,N...]] [--verbose]

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "fgim/edit/transfer.hpp"
#include "fgim/eval/bleu.hpp"
#include "fgim/eval/projection.hpp"
#include "fgim/io/checkpoint.hpp"
#include "fgim/textdata/tokenize.hpp"
#include "gradcases.hpp"
#include "toy.hpp"

using namespace fgim;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects the checks of one criterion; the first failures are kept for the report.
struct Verdict {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

template <typename... Args>
std::string fmt(const Args&... args) {
  std::ostringstream s;
  s << std::setprecision(6);
  (s << ... << args);
  return s.str();
}

bool verbose = false;

// ---- 1. gradient integrity

Verdict gradient_integrity() {
  Verdict v;
  const auto t0 = Clock::now();
  auto cases = testkit::primitive_cases();
  for (auto& c : testkit::composite_cases()) cases.push_back(std::move(c));
  num::Rng rng(2024);
  for (const auto& c : cases) {
    double worst32 = 0.0, worst64 = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      worst32 = std::max(worst32, c.run32(rng));
      worst64 = std::max(worst64, c.run64(rng));
    }
    v.require(worst32 < 1e-4, fmt(c.name, " 32-bit rel error ", worst32));
    v.require(worst64 < 1e-6, fmt(c.name, " 64-bit rel error ", worst64));
    if (verbose) std::cout << "  " << c.name << " 32-bit " << worst32 << " 64-bit " << worst64 << "\n";
  }
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 60.0, fmt("took ", elapsed, " s"));
  v.note(fmt(cases.size(), " ops x 100 trials"));
  return v;
}

// ---- 2. loss oracles

double smoothed_loss(const std::vector<double>& logits, std::size_t v, const std::vector<int>& targets, double eps) {
  num::Tape<double> tape(num::GradMode::disabled);
  return ae::reconstruction_loss(tape, num::Tensor<double>({logits.size() / v, v}, logits), targets, eps).item();
}

Verdict loss_oracles() {
  Verdict v;
  for (std::size_t size = 2; size <= 12; ++size) {
    for (double eps : {0.0, 0.1, 0.3}) {
      const double got = smoothed_loss(std::vector<double>(size, 0.0), size, {1}, eps);
      v.require(std::abs(got - std::log(static_cast<double>(size))) < 1e-9, fmt("uniform v=", size, " gives ", got));
    }
  }
  num::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(5), size = 2 + rng.index(10);
    std::vector<double> logits(n * size);
    for (auto& x : logits) x = rng.uniform(-6.0, 6.0);
    std::vector<int> targets(n);
    double ce = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      targets[r] = 1 + static_cast<int>(rng.index(size - 1));
      double m = -INFINITY, s = 0.0;
      for (std::size_t k = 0; k < size; ++k) m = std::max(m, logits[r * size + k]);
      for (std::size_t k = 0; k < size; ++k) s += std::exp(logits[r * size + k] - m);
      ce += m + std::log(s) - logits[r * size + static_cast<std::size_t>(targets[r])];
    }
    const double got = smoothed_loss(logits, size, targets, 0.0);
    v.require(std::abs(got - ce) < 1e-6, fmt("eps=0 gives ", got, ", cross-entropy ", ce));
  }
  // p = (0.2, 0.7, 0.1), true class 1 (id 0 is padding), eps = 0.1
  const double hand = 0.4632974;
  const double formula = -(0.9 * std::log(0.7) + (0.1 / 3) * (std::log(0.2) + std::log(0.7) + std::log(0.1)));
  const double got = smoothed_loss({std::log(0.2), std::log(0.7), std::log(0.1)}, 3, {1}, 0.1);
  v.require(std::abs(got - formula) < 1e-9, fmt("three-class example gives ", got, ", expected ", formula));
  v.require(std::abs(formula - hand) < 1e-7, fmt("three-class closed form ", formula));
  v.note(fmt("three-class loss ", std::setprecision(10), got));
  return v;
}

// ---- 3, 4, 5, 9: the one-aspect toy run

struct ToyRun {
  testkit::ToyModels<double> models;
  std::vector<edit::TransferResult<double>> transfers;
  double token_accuracy = 0.0;
  double dev_accuracy = 0.0;
  double flip_rate = 0.0;
  double seconds = 0.0;
};

std::string format_csv(const std::vector<std::vector<double>>& rows, const std::string& header) {
  std::ostringstream s;
  s << header << "\n" << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
    s << "\n";
  }
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

const std::vector<std::string> kRunFiles{"ae.ckpt", "clf.ckpt", "eval_clf.ckpt", "ae_log.csv", "clf_log.csv",
                                         "metrics.csv", "transfers.txt"};

ToyRun run_toy(const fs::path& dir) {
  const auto t0 = Clock::now();
  auto options = testkit::toy_options(1);
  options.verbose = verbose;
  ToyRun run{testkit::train_toy<double>(options), {}, 0, 0, 0, 0};
  auto& m = run.models;
  run.token_accuracy = ae::reconstruction_accuracy(m.autoencoder.model, m.splits.train, m.vocab).token_accuracy;
  run.dev_accuracy = clf::latent_accuracy(m.classifier.model, m.dev_latents);

  std::size_t flips = 0;
  std::ostringstream outputs;
  for (const auto& ex : m.splits.test) {
    const auto target = testkit::flipped(ex.attributes);
    auto r = edit::transfer<double>(ex.tokens, target, m.autoencoder.model, m.vocab, m.classifier.model,
                                    options.config.fgim);
    flips += eval::matches_target(m.eval_classifier.predict(r.output), target) ? 1 : 0;
    outputs << text::join(r.output) << "\n";
    run.transfers.push_back(std::move(r));
  }
  run.flip_rate = static_cast<double>(flips) / static_cast<double>(m.splits.test.size());
  run.seconds = seconds_since(t0);

  fs::create_directories(dir);
  io::save_checkpoint(m.autoencoder.model.named_parameters(), dir / "ae.ckpt");
  io::save_checkpoint(m.classifier.model.named_parameters(), dir / "clf.ckpt");
  io::save_checkpoint(m.eval_classifier.named_parameters(), dir / "eval_clf.ckpt");
  std::vector<std::vector<double>> ae_rows, clf_rows;
  for (const auto& e : m.autoencoder.history) ae_rows.push_back({double(e.epoch), e.train_loss, e.dev_loss});
  for (const auto& e : m.classifier.history) clf_rows.push_back({double(e.epoch), e.train_loss, e.dev_loss, e.dev_accuracy});
  write_file(dir / "ae_log.csv", format_csv(ae_rows, "epoch,train_loss,dev_loss"));
  write_file(dir / "clf_log.csv", format_csv(clf_rows, "epoch,train_loss,dev_loss,dev_accuracy"));
  write_file(dir / "metrics.csv", format_csv({{run.token_accuracy, run.dev_accuracy, run.flip_rate}},
                                             "token_accuracy,dev_accuracy,flip_rate"));
  write_file(dir / "transfers.txt", outputs.str());
  return run;
}

Verdict toy_end_to_end(const ToyRun& run) {
  Verdict v;
  const auto& m = run.models;
  v.require(m.splits.train.size() >= 1800 && m.splits.train.size() <= 2200, fmt("train size ", m.splits.train.size()));
  v.require(m.vocab.size() <= 200, fmt("vocabulary ", m.vocab.size()));
  v.require(m.splits.train.attribute_count() == 1, "one aspect");
  v.require(run.token_accuracy >= 0.95, fmt("token accuracy ", run.token_accuracy));
  v.require(run.dev_accuracy >= 0.95, fmt("latent classifier dev accuracy ", run.dev_accuracy));
  v.require(run.transfers.size() >= 200, fmt("held-out sentences ", run.transfers.size()));
  v.require(run.flip_rate >= 0.80, fmt("evaluation classifier flip rate ", run.flip_rate));
  v.require(run.seconds < 15 * 60, fmt("took ", run.seconds, " s"));
  v.note(fmt("vocab ", m.vocab.size(), ", token acc ", run.token_accuracy, ", dev acc ", run.dev_accuracy,
             ", flip ", run.flip_rate, ", ", std::setprecision(4), run.seconds, " s"));
  return v;
}

// Trace invariants for one FGIM run; the prediction is re-derived from the
// latent classifier rather than taken from the trace.
void check_trace(Verdict& v, const edit::TransferResult<double>& r, const edit::FgimConfig& config,
                 const clf::LatentClassifier<double>& classifier, std::size_t index) {
  const auto& steps = r.trace.steps;
  const auto tag = fmt("sentence ", index, ": ");
  if (steps.empty()) {
    v.require(false, tag + "empty trace");
    return;
  }
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& s = steps[k];
    const bool first = k == 0 || steps[k - 1].weight_index != s.weight_index;
    if (k > 0) v.require(s.weight_index >= steps[k - 1].weight_index, tag + "weights not ascending");
    if (k > 0 && first) {
      v.require(steps[k - 1].inner_step + 1 == config.s_steps, tag + "weight abandoned before its step budget");
      v.require(s.weight_index == steps[k - 1].weight_index + 1, tag + "a weight was skipped");
    }
    v.require(s.inner_step == (first ? 0 : steps[k - 1].inner_step + 1), tag + "inner step count");
    const double expected = config.weights[s.weight_index] * std::pow(config.decay, static_cast<double>(s.inner_step));
    v.require(std::abs(s.weight - expected) <= 1e-12 * expected, tag + fmt("weight ", s.weight, " vs ", expected));
    const bool last = k + 1 == steps.size();
    if (!last || !r.success) {
      v.require(edit::max_abs_error(r.target.values(), s.prediction) >= config.threshold,
                tag + "an earlier iterate already met the threshold");
    }
  }
  if (r.success) {
    v.require(r.trace.success_weight_index == steps.back().weight_index, tag + "success index");
    const auto q = classifier.predict(r.edited);
    const double err = edit::max_abs_error(r.target.values(), q);
    v.require(err < config.threshold, tag + fmt("success re-check error ", err));
  } else {
    v.require(!r.trace.success_weight_index, tag + "failure with a success index");
    v.require(steps.size() == config.weights.size() * config.s_steps, tag + "failure without the full budget");
  }
}

Verdict fgim_postconditions(const ToyRun& run) {
  Verdict v;
  const auto config = testkit::toy_options(1).config.fgim;
  std::size_t successes = 0;
  for (std::size_t i = 0; i < run.transfers.size(); ++i) {
    check_trace(v, run.transfers[i], config, run.models.classifier.model, i);
    successes += run.transfers[i].success ? 1 : 0;
  }
  v.note(fmt(successes, "/", run.transfers.size(), " successes re-checked"));
  return v;
}

Verdict degree_control(const ToyRun& run) {
  Verdict v;
  const auto& m = run.models;
  edit::SweepSample sample;
  for (const auto& ex : m.splits.test) {
    sample.sources.push_back(ex.tokens);
    sample.targets.push_back(testkit::flipped(ex.attributes));
  }
  const auto config = testkit::toy_options(1).config.fgim;
  const auto rows = edit::sweep_degrees<double>(sample, m.autoencoder.model, m.vocab, m.classifier.model,
                                                {&m.eval_classifier, &m.lm}, config);
  v.require(rows.size() == 6, fmt(rows.size(), " sweep rows"));
  std::ostringstream shape;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    shape << (i ? " " : "") << "w" << rows[i].weight << ":" << std::setprecision(3) << rows[i].acc << "/"
          << rows[i].mean_edit_norm;
    if (i == 0) continue;
    v.require(rows[i].mean_edit_norm >= rows[i - 1].mean_edit_norm,
              fmt("edit norm drops from w=", rows[i - 1].weight, " to w=", rows[i].weight));
    const double se = std::max(rows[i].acc_stderr, rows[i - 1].acc_stderr);
    v.require(rows[i].acc + se >= rows[i - 1].acc,
              fmt("target rate drops from ", rows[i - 1].acc, " to ", rows[i].acc, " beyond stderr ", se));
  }
  v.note(shape.str());

  // first step of every singleton run moves exactly w * |grad|
  const auto latents = ae::encode_corpus(m.autoencoder.model, m.splits.test, m.vocab);
  for (std::size_t i = 0; i < latents.size(); i += 4) {
    const auto g = edit::l2_norm<double>(m.classifier.model.evaluate(latents[i], sample.targets[i]).grad);
    for (double w : config.weights) {
      auto single = config;
      single.weights = {w};
      single.s_steps = 1;
      const auto r = edit::fgim_edit<double>(latents[i], sample.targets[i], single, m.classifier.model);
      const double moved = r.trace.steps.front().edit_norm;
      v.require(std::abs(moved - w * g) <= 1e-6 * w * g, fmt("first step ", moved, " vs w|g| ", w * g));
    }
  }
  return v;
}

Verdict determinism(const ToyRun& first, const fs::path& a, const fs::path& b) {
  Verdict v;
  const auto second = run_toy(b);
  (void)first;
  for (const auto& f : kRunFiles) {
    const auto x = read_bytes(a / f), y = read_bytes(b / f);
    v.require(!x.empty(), f + " is empty");
    v.require(x == y, f + " differs between runs");
  }
  v.note(fmt(kRunFiles.size(), " files compared, second run ", std::setprecision(4), second.seconds, " s"));
  return v;
}

// ---- 6. two aspects

Verdict multi_aspect() {
  Verdict v;
  const auto t0 = Clock::now();
  auto options = testkit::toy_options(2);
  options.verbose = verbose;
  const auto m = testkit::train_toy<float>(options);
  v.require(m.splits.train.attribute_count() == 2, "two aspects");
  const std::size_t n = std::min<std::size_t>(100, m.splits.test.size());
  v.require(n == 100, fmt(n, " held-out sentences"));
  std::ostringstream rates;
  for (const auto& corner : {text::AttributeVector{0.0, 0.0}, text::AttributeVector{0.0, 1.0},
                             text::AttributeVector{1.0, 0.0}, text::AttributeVector{1.0, 1.0}}) {
    std::size_t reached = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = edit::transfer<float>(m.splits.test[i].tokens, corner, m.autoencoder.model, m.vocab,
                                           m.classifier.model, options.config.fgim);
      reached += r.success ? 1 : 0;
    }
    const double rate = static_cast<double>(reached) / static_cast<double>(n);
    v.require(rate >= 0.70, fmt("corner ", corner.to_string(), " reached for ", rate));
    rates << corner.to_string() << ":" << rate << " ";
  }
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 15 * 60, fmt("took ", elapsed, " s"));
  v.note(fmt(rates.str(), "dev acc ", clf::latent_accuracy(m.classifier.model, m.dev_latents), ", ",
             std::setprecision(4), elapsed, " s"));
  return v;
}

// ---- 7. scalar oracle

struct Sigmoid1D {
  clf::LatentEvaluation<double> evaluate(std::span<const double> z, const text::AttributeVector& y) const {
    const double q = 1.0 / (1.0 + std::exp(-z[0]));
    const double loss = std::log1p(std::exp(-std::abs(z[0]))) + std::max(z[0], 0.0) - y[0] * z[0];
    return {loss, {q - y[0]}, {q}};
  }
};

Verdict scalar_oracle() {
  Verdict v;
  edit::FgimConfig config;
  config.decay = 0.995;
  config.s_steps = 1000;
  const auto r = edit::fgim_edit<double>(std::vector<double>{0.0}, text::AttributeVector{1.0}, config, Sigmoid1D{});

  // independent replay: z <- z + w (1 - sigmoid(z)), w <- lambda w
  std::vector<double> iterates;
  double final_z = 0.0;
  bool success = false;
  for (std::size_t i = 0; i < config.weights.size() && !success; ++i) {
    double z = 0.0, w = config.weights[i];
    for (std::size_t j = 0; j < config.s_steps; ++j) {
      z += w * (1.0 - 1.0 / (1.0 + std::exp(-z)));
      iterates.push_back(z);
      if (1.0 - 1.0 / (1.0 + std::exp(-z)) < config.threshold) {
        success = true;
        final_z = z;
        break;
      }
      w *= config.decay;
    }
  }
  v.require(success && r.success, "no success");
  v.require(r.trace.steps.size() == iterates.size(), fmt(r.trace.steps.size(), " vs ", iterates.size(), " steps"));
  for (std::size_t k = 0; k < std::min(iterates.size(), r.trace.steps.size()); ++k) {
    v.require(std::abs(r.trace.steps[k].edit_norm - std::abs(iterates[k])) < 1e-9, fmt("step ", k, " differs"));
  }
  v.require(std::abs(r.latent[0] - final_z) < 1e-9, fmt("final ", r.latent[0], " vs ", final_z));
  v.require(r.latent[0] > std::log(999.0), fmt("success iterate ", r.latent[0], " below ln 999"));
  v.note(fmt("z' = ", std::setprecision(12), r.latent[0], " at weight ", config.weights[*r.trace.success_weight_index],
             " step ", r.trace.steps.back().inner_step));
  return v;
}

// ---- 8. metric fixtures

std::vector<eval::Sentence> read_sentences(const fs::path& path) {
  std::ifstream f(path);
  std::vector<eval::Sentence> out;
  for (std::string line; std::getline(f, line);) out.push_back(text::tokenize(line));
  return out;
}

Verdict metric_fixtures() {
  Verdict v;
  const auto splits = text::make_sentiment_corpus({});
  std::vector<eval::Sentence> train;
  for (const auto& ex : splits.train) train.push_back(ex.tokens);

  v.require(std::abs(eval::bleu(train, train) - 100.0) < 1e-9, "identity BLEU");
  v.require(eval::bleu({text::tokenize("the the the the")}, {text::tokenize("the cat sat down")}) == 0.0,
            "clipped-count fixture");
  const fs::path data(FGIM_TEST_DATA_DIR);
  const auto hyp = read_sentences(data / "bleu/hypotheses.txt");
  const auto ref = read_sentences(data / "bleu/references.txt");
  double golden = -1.0;
  std::ifstream(data / "bleu/golden.txt") >> golden;
  v.require(hyp.size() == 20 && ref.size() == 20, "fixture size");
  const double score = eval::bleu(hyp, ref);
  v.require(golden > 0.0 && std::abs(score - golden) < 0.1, fmt("fixture BLEU ", score, " vs golden ", golden));

  const auto lm = eval::train_lm(train);
  num::Rng rng(8);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto& s = train[rng.index(train.size())];
    std::vector<std::string> context(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(rng.index(s.size() + 1)));
    if (k % 10 == 9) context = {"unseen", "context"};
    double total = 0.0;
    for (const auto& w : lm.vocabulary()) total += lm.probability(w, context);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  v.require(worst < 1e-6, fmt("LM normalization error ", worst));

  const auto uniform = eval::NGramLM::train(train, 0);
  const double ppl = uniform.perplexity(std::vector<eval::Sentence>(train.begin(), train.begin() + 100));
  const double size = static_cast<double>(uniform.vocab_size());
  v.require(std::abs(ppl - size) <= 1e-3 * size, fmt("uniform PPL ", ppl, " vs v ", size));
  v.note(fmt("fixture BLEU ", score, ", uniform PPL ", ppl, " (v ", size, ")"));
  return v;
}

// ---- 10. PCA

Verdict pca_export() {
  Verdict v;
  num::Rng rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.index(60), d = 2 + rng.index(30);
    std::vector<std::vector<double>> points(n, std::vector<double>(d));
    std::vector<double> scale(d);
    for (auto& s : scale) s = rng.uniform(0.1, 5.0);
    for (auto& p : points) {
      for (std::size_t j = 0; j < d; ++j) p[j] = scale[j] * rng.normal() + rng.uniform(0.0, 10.0) * (j == 0);
    }
    const auto proj = eval::project_latents(points);

    Eigen::MatrixXd x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) x(i, j) = points[i][j];
    }
    const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n);  // population covariance
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const auto& ev = solver.eigenvalues();  // ascending
    const double top2 = ev(d - 1) + ev(d - 2);
    const double share = top2 / cov.trace();
    const double got = proj.eigenvalues[0] + proj.eigenvalues[1];
    const double rel = std::max(std::abs(got - top2) / top2, std::abs(proj.captured_share - share) / share);
    worst = std::max(worst, rel);
  }
  v.require(worst < 1e-6, fmt("worst relative error ", worst));
  v.note(fmt("50 random sets, worst relative error ", worst));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path workdir = fs::temp_directory_path() / "fgim-acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--workdir" && i + 1 < argc) {
      workdir = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      for (std::string n; std::getline(s, n, ',');) only.insert(std::stoi(n));
    } else if (a == "--verbose") {
      verbose = true;
    } else {
      std::cerr << "usage: fgim_acceptance [--workdir DIR] [--only N[,N...]] [--verbose]\n";
      return 2;
    }
  }
  fs::create_directories(workdir);
  auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  bool all = true;
  auto report = [&](int n, const std::string& name, const std::function<Verdict()>& check) {
    if (!wanted(n)) return;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::cout << "criterion " << std::setw(2) << n << " " << (v.pass ? "PASS" : "FAIL") << "  " << name << " ("
              << std::fixed << std::setprecision(1) << seconds_since(t0) << " s)" << std::defaultfloat << std::setprecision(6);
    for (const auto& s : v.notes) std::cout << "; " << s;
    std::cout << "\n";
    for (const auto& f : v.failures) std::cout << "    " << f << "\n";
    std::cout.flush();
  };

  report(1, "gradient integrity", gradient_integrity);
  report(2, "loss oracles", loss_oracles);

  std::optional<ToyRun> toy;
  auto need_toy = [&]() -> const ToyRun& {
    if (!toy) toy = run_toy(workdir / "run1");
    return *toy;
  };
  report(3, "toy end-to-end", [&] { return toy_end_to_end(need_toy()); });
  report(4, "FGIM postconditions", [&] { return fgim_postconditions(need_toy()); });
  report(5, "degree control", [&] { return degree_control(need_toy()); });
  report(6, "multi-aspect corners", multi_aspect);
  report(7, "scalar FGIM oracle", scalar_oracle);
  report(8, "metric fixtures", metric_fixtures);
  report(9, "determinism", [&] { return determinism(need_toy(), workdir / "run1", workdir / "run2"); });
  report(10, "PCA export", pca_export);

  std::cout << (all ? "all selected criteria passed" : "some criteria failed") << "\n";
  return all ? 0 : 1;
}
