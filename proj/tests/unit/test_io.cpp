#include <gtest/gtest.h>

#include <cstring>

#include "fgim/autoencoder/autoencoder.hpp"
#include "fgim/errors.hpp"
#include "fgim/io/checkpoint.hpp"
#include "fgim/io/config.hpp"
#include "fgim/io/trace.hpp"
#include "gradcases.hpp"
#include "json.hpp"
#include "tempdir.hpp"

using namespace fgim;
using num::NamedTensors;
using num::Tensor;

namespace {

std::string le64(std::uint64_t v) {
  std::string s(8, '\0');
  for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

std::string header(std::uint64_t count) { return std::string("FGIM") + std::string("\x01\0\0\0", 4) + le64(count); }

template <typename Fn>
std::string error_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

NamedTensors<float> random_tensors(num::Rng& rng) {
  NamedTensors<float> out;
  const std::size_t n = rng.index(6);
  for (std::size_t k = 0; k < n; ++k) {
    num::Shape shape;
    for (std::size_t r = 0, rank = 1 + rng.index(3); r < rank; ++r) shape.push_back(1 + rng.index(4));
    std::size_t size = 1;
    for (auto d : shape) size *= d;
    std::vector<float> v(size);
    for (auto& x : v) x = static_cast<float>(rng.normal());
    out.emplace_back("t" + std::to_string(k) + ".w", Tensor<float>(shape, v));
  }
  return out;
}

}  // namespace

TEST(Checkpoint, EmptySetIsHeaderOnly) {
  const auto bytes = io::serialize_checkpoint(NamedTensors<float>{});
  EXPECT_EQ(bytes, header(0));
  EXPECT_TRUE(io::deserialize_checkpoint(bytes).empty());
}

TEST(Checkpoint, SingleValueLayout) {
  NamedTensors<float> t{{"w", Tensor<float>({1, 1}, {1.0f})}};
  const auto bytes = io::serialize_checkpoint(t);
  const std::string expected = header(1) + le64(1) + "w" + le64(2) + le64(1) + le64(1) + std::string("\x00\x00\x80\x3f", 4);
  EXPECT_EQ(bytes, expected);
  EXPECT_EQ(bytes.substr(bytes.size() - 4), std::string("\x00\x00\x80\x3f", 4));
}

TEST(Checkpoint, RandomSetsRoundTripBitExact) {
  num::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_tensors(rng);
    const auto bytes = io::serialize_checkpoint(t);
    const auto back = io::deserialize_checkpoint(bytes);
    ASSERT_EQ(back.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_EQ(back[i].first, t[i].first);
      EXPECT_EQ(back[i].second.shape(), t[i].second.shape());
      EXPECT_EQ(std::memcmp(back[i].second.data().data(), t[i].second.data().data(), t[i].second.size() * 4), 0);
    }
    EXPECT_EQ(io::serialize_checkpoint(back), bytes);
  }
}

TEST(Checkpoint, ModelSaveLoadSaveIsByteIdentical) {
  const auto model = ae::Autoencoder<double>::init(testkit::tiny_autoencoder_hyper(), 5);
  testkit::TempDir dir;
  io::save_checkpoint(model.named_parameters(), dir / "a.ckpt");
  const auto loaded = io::load_checkpoint(dir / "a.ckpt");
  io::save_checkpoint(loaded, dir / "b.ckpt");
  EXPECT_EQ(testkit::read_file(dir / "a.ckpt"), testkit::read_file(dir / "b.ckpt"));
  const auto rebuilt = ae::Autoencoder<double>::from_named(testkit::tiny_autoencoder_hyper(), io::cast_tensors<double>(loaded));
  io::save_checkpoint(rebuilt.named_parameters(), dir / "c.ckpt");
  EXPECT_EQ(testkit::read_file(dir / "a.ckpt"), testkit::read_file(dir / "c.ckpt"));
}

TEST(Checkpoint, MalformedArchivesAreRejected) {
  NamedTensors<float> t{{"w", Tensor<float>({2, 2}, {1, 2, 3, 4})}};
  const auto good = io::serialize_checkpoint(t);
  for (std::size_t cut = 0; cut < good.size(); ++cut) {
    EXPECT_THROW(io::deserialize_checkpoint(good.substr(0, cut)), CheckpointError) << "cut at " << cut;
  }
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_NE(error_of([&] { io::deserialize_checkpoint(bad_magic); }).find("magic"), std::string::npos);
  auto bad_version = good;
  bad_version[4] = 2;
  EXPECT_NE(error_of([&] { io::deserialize_checkpoint(bad_version); }).find("version"), std::string::npos);
  EXPECT_THROW(io::deserialize_checkpoint(good + "x"), CheckpointError);
  auto huge_rank = header(1) + le64(1) + "w" + le64(1000);
  EXPECT_THROW(io::deserialize_checkpoint(huge_rank), CheckpointError);
  auto huge_dim = header(1) + le64(1) + "w" + le64(1) + le64(std::uint64_t{1} << 62);
  EXPECT_THROW(io::deserialize_checkpoint(huge_dim), CheckpointError);
}

TEST(Checkpoint, DuplicateNamesRejectedBothWays) {
  NamedTensors<float> t{{"w", Tensor<float>({1}, {1.0f})}, {"w", Tensor<float>({1}, {2.0f})}};
  EXPECT_THROW(io::serialize_checkpoint(t), CheckpointError);
  NamedTensors<float> single{{"w", Tensor<float>({1}, {1.0f})}};
  auto one = io::serialize_checkpoint(single).substr(16);
  EXPECT_NE(error_of([&] { io::deserialize_checkpoint(header(2) + one + one); }).find("duplicate"), std::string::npos);
}

TEST(Checkpoint, MissingFileAndEntries) {
  EXPECT_THROW(io::load_checkpoint("/nonexistent/model.ckpt"), CheckpointError);
  NamedTensors<float> t{{"w", Tensor<float>({2, 3}, std::vector<float>(6, 0.0f))}};
  EXPECT_EQ(io::entry_shape(t, "w"), (num::Shape{2, 3}));
  EXPECT_THROW(io::entry_shape(t, "v"), CheckpointError);
}

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = io::parse_config_text("");
  EXPECT_EQ(c, io::RunConfig{});
  EXPECT_EQ(c.fgim.weights, (std::vector<double>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(c.fgim.threshold, 0.001);
  EXPECT_EQ(c.fgim.decay, 0.9);
  EXPECT_EQ(c.ae.hp.latent_dim, 256u);
  EXPECT_EQ(c.ae.hp.ffn_dim, 1024u);
  EXPECT_EQ(c.ae.hp.smoothing, 0.1);
  EXPECT_EQ(c.classifier.hp.hidden1, 100u);
  EXPECT_EQ(c.classifier.hp.hidden2, 50u);
}

TEST(Config, ParsesSectionsCommentsAndLists) {
  const auto c = io::parse_config_text(
      "# toy run\n"
      "[data]\n"
      "dir = /tmp/corpus   # trailing comment\n"
      "layout = tsv-with-attribute-columns\n"
      "\n"
      "[ae]\n"
      "precision = 64\n"
      "epochs=3\n"
      "[fgim]\n"
      "weights = 0.5, 1.5 ,4\n"
      "lambda = 0.8\n"
      "[classifier]\n"
      "loss = one_sided\n");
  EXPECT_EQ(c.data.dir, "/tmp/corpus");
  EXPECT_EQ(c.data.layout, text::DatasetLayout::tsv_with_attribute_columns);
  EXPECT_EQ(c.ae.precision, io::Precision::f64);
  EXPECT_EQ(c.ae.hp.epochs, 3u);
  EXPECT_EQ(c.fgim.weights, (std::vector<double>{0.5, 1.5, 4.0}));
  EXPECT_EQ(c.fgim.decay, 0.8);
  EXPECT_EQ(c.classifier.hp.loss, num::AttributeLoss::one_sided);
}

TEST(Config, DomainErrorsNameTheKey) {
  const auto msg = error_of([] { io::parse_config_text("[fgim]\nlambda = 1.5\n"); });
  EXPECT_NE(msg.find("fgim.lambda"), std::string::npos) << msg;
  EXPECT_THROW(io::parse_config_text("[fgim]\nweights = 2, 1\n"), ConfigError);
  EXPECT_THROW(io::parse_config_text("[fgim]\nthreshold = 0\n"), ConfigError);
  EXPECT_THROW(io::parse_config_text("[ae]\nlatent_dim = 100\n"), ConfigError);
  EXPECT_THROW(io::parse_config_text("[ae]\nheads = 3\n"), ConfigError);
  EXPECT_THROW(io::parse_config_text("[ae]\nprecision = 16\n"), ConfigError);
  EXPECT_THROW(io::parse_config_text("[ae]\nepochs = -1\n"), ConfigError);
  EXPECT_THROW(io::parse_config_text("[ae]\nlr = fast\n"), ConfigError);
}

TEST(Config, SyntaxErrorsCarryLineNumbers) {
  EXPECT_NE(error_of([] { io::parse_config_text("[fgim]\n\nbogus = 1\n", "run.cfg"); }).find("run.cfg:3:"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::parse_config_text("[nope]\n", "run.cfg"); }).find("run.cfg:1:"), std::string::npos);
  EXPECT_NE(error_of([] { io::parse_config_text("[ae]\nno equals sign\n", "run.cfg"); }).find("run.cfg:2:"),
            std::string::npos);
  EXPECT_THROW(io::parse_config_text("lambda = 0.5\n"), ConfigError);  // key outside a section
  EXPECT_THROW(io::parse_config("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, SerializeRoundTripsRandomConfigs) {
  num::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    io::RunConfig c;
    c.data.dir = "dir" + std::to_string(rng.index(100));
    c.data.prefix = trial % 2 ? "sentiment." : "";
    c.data.max_len = 5 + rng.index(30);
    c.ae.hp.gru_hidden = 1 + rng.index(64);
    c.ae.hp.latent_dim = 2 * c.ae.hp.gru_hidden;
    c.ae.hp.heads = 1 + rng.index(4);
    c.ae.hp.embed_dim = c.ae.hp.heads * (1 + rng.index(32));
    c.ae.hp.smoothing = rng.uniform(0.0, 0.5);
    c.ae.hp.lr = rng.uniform(1e-5, 1e-2);
    c.ae.seed = rng.next();
    c.ae.precision = trial % 3 ? io::Precision::f32 : io::Precision::f64;
    c.classifier.hp.loss = trial % 2 ? num::AttributeLoss::binary : num::AttributeLoss::one_sided;
    c.classifier.seed = rng.next();
    c.fgim.weights.clear();
    double w = 0.0;
    for (std::size_t k = 0, n = 1 + rng.index(8); k < n; ++k) c.fgim.weights.push_back(w += rng.uniform(0.01, 3.0));
    c.fgim.decay = rng.uniform(0.01, 0.99);
    c.fgim.threshold = rng.uniform(1e-6, 0.1);
    c.fgim.s_steps = 1 + rng.index(100);
    const auto text = io::serialize_config(c);
    const auto back = io::parse_config_text(text);
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(io::serialize_config(back), text);
  }
}

TEST(Config, NormalizesHandWrittenFiles) {
  const std::string messy = "[fgim]\n  lambda=0.5 # smaller\n[ae]\nepochs = 3\n";
  const auto once = io::serialize_config(io::parse_config_text(messy));
  EXPECT_EQ(io::serialize_config(io::parse_config_text(once)), once);
  testkit::TempDir dir;
  dir.write("run.cfg", messy);
  EXPECT_EQ(io::parse_config(dir / "run.cfg"), io::parse_config_text(messy));
}

TEST(Config, PresetsAndDerivedHyperparameters) {
  for (std::size_t a : {1u, 2u}) {
    const auto c = io::toy_preset(a);
    EXPECT_EQ(io::parse_config_text(io::serialize_config(c)), c);
    const auto hp = io::autoencoder_hyper(c, 123);
    EXPECT_EQ(hp.vocab_size, 123u);
    EXPECT_NO_THROW(hp.validate());
    const auto chp = io::classifier_hyper(c, hp.latent_dim, a);
    EXPECT_EQ(chp.latent_dim, hp.latent_dim);
    EXPECT_EQ(chp.attributes, a);
  }
}

TEST(Trace, JsonLineCarriesEveryField) {
  edit::TransferResult<double> r;
  r.source = {"the", "food", "was", "bad"};
  r.target = text::AttributeVector{1.0};
  r.success = true;
  r.latent = {0.5, 1.5};
  r.edited = {0.75, 1.25};
  r.output = {"the", "food", "was", "good"};
  r.trace.steps.push_back({0, 0, 1.0, 2.0, 0.3, 0.9, {0.4}});
  r.trace.steps.push_back({0, 1, 0.9, 1.0, 0.35, 0.01, {0.9995}});
  r.trace.success_weight_index = 0;
  const auto line = io::trace_json(r, edit::FgimConfig{});
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["source"], "the food was bad");
  EXPECT_EQ(j["output"], "the food was good");
  EXPECT_EQ(j["target"], nlohmann::json::array({1.0}));
  EXPECT_TRUE(j["success"].get<bool>());
  EXPECT_EQ(j["success_weight_index"], 0);
  EXPECT_EQ(j["config"]["weights"].size(), 6u);
  EXPECT_EQ(j["config"]["lambda"], 0.9);
  EXPECT_EQ(j["config"]["threshold"], 0.001);
  EXPECT_EQ(j["config"]["s_steps"], 30);
  EXPECT_EQ(j["z"], nlohmann::json::array({0.5, 1.5}));
  EXPECT_EQ(j["z_edited"], nlohmann::json::array({0.75, 1.25}));
  ASSERT_EQ(j["steps"].size(), 2u);
  const auto& s = j["steps"][1];
  EXPECT_EQ(s["weight_index"], 0);
  EXPECT_EQ(s["inner_step"], 1);
  EXPECT_EQ(s["weight"], 0.9);
  EXPECT_EQ(s["grad_norm"], 1.0);
  EXPECT_EQ(s["edit_norm"], 0.35);
  EXPECT_EQ(s["loss"], 0.01);
  EXPECT_EQ(s["prediction"], nlohmann::json::array({0.9995}));
  r.success = false;
  r.trace.success_weight_index.reset();
  EXPECT_TRUE(nlohmann::json::parse(io::trace_json(r, edit::FgimConfig{}))["success_weight_index"].is_null());
}
