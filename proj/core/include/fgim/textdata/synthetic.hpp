#pragma once

#include <cstdint>
#include <filesystem>

#include "fgim/textdata/corpus.hpp"

namespace fgim::text {

// Templated review sentences whose sentiment is carried by a few adjective
// slots. With aspects == 1 every slot shares one polarity; with aspects == 2
// a "food" clause and a "service" clause carry independent polarities.
struct SyntheticOptions {
  std::size_t aspects = 1;
  std::size_t train_size = 2000;
  std::size_t dev_size = 200;
  std::size_t test_size = 200;
  std::uint64_t seed = 7;
  std::size_t max_len = 15;
};

DatasetSplits make_sentiment_corpus(const SyntheticOptions& options);

// Writes splits in the TSV layout (<split>.tsv), which covers any A.
void write_tsv_layout(const DatasetSplits& splits, const std::filesystem::path& dir);

}  // namespace fgim::text
