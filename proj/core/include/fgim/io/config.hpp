#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fgim/autoencoder/autoencoder.hpp"
#include "fgim/classifier/latent_classifier.hpp"
#include "fgim/edit/fgim.hpp"
#include "fgim/textdata/dataset.hpp"

namespace fgim::io {

enum class Precision { f32, f64 };

struct DataConfig {
  std::string dir = "data";
  text::DatasetLayout layout = text::DatasetLayout::split_per_attribute_file;
  std::string prefix;
  std::size_t max_len = 15;  // tokens per sentence
  std::size_t min_count = 1;
  std::size_t max_vocab = 10000;
  std::string output_dir = "out";

  bool operator==(const DataConfig&) const = default;
};

// vocab_size is taken from the vocabulary at training time and is not a key.
struct AeConfig {
  ae::HyperParams hp;
  std::uint64_t seed = 1;
  Precision precision = Precision::f32;

  bool operator==(const AeConfig&) const = default;
};

// latent_dim and attributes come from the autoencoder and the dataset.
struct ClassifierConfig {
  clf::ClassifierHyperParams hp;
  std::uint64_t seed = 2;
  std::size_t eval_epochs = 5;  // text-side evaluation classifier
  std::uint64_t eval_seed = 3;

  bool operator==(const ClassifierConfig&) const = default;
};

struct RunConfig {
  DataConfig data;
  AeConfig ae;
  ClassifierConfig classifier;
  edit::FgimConfig fgim;

  bool operator==(const RunConfig&) const = default;
};

// `key = value` lines under [data] [ae] [classifier] [fgim]; `#` starts a
// comment. Missing keys keep their defaults. Throws ConfigError carrying the
// line number for syntax errors and the key name for out-of-domain values.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

// Model hyperparameters with the values only known after loading data.
ae::HyperParams autoencoder_hyper(const RunConfig& config, std::size_t vocab_size);
clf::ClassifierHyperParams classifier_hyper(const RunConfig& config, std::size_t latent_dim, std::size_t attributes);

// Small model sizes and longer classifier training that fit the synthetic
// sentiment corpus on one CPU core in about a minute. aspects selects the
// one- or two-slot corpus; the two-slot classifier needs more epochs and the
// two-slot autoencoder keeps dropout, while the one-slot preset runs without
// it so 64-bit runs are plain deterministic functions of the seed.
RunConfig toy_preset(std::size_t aspects = 1);

// Every key in a fixed order; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace fgim::io
