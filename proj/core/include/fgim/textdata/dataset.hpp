#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fgim/textdata/corpus.hpp"

namespace fgim::text {

enum class DatasetLayout {
  // <prefix><split>.<attr_name>, one sentence per line; optional
  // <prefix><split>.<attr_name>.ref reference files aligned line by line.
  split_per_attribute_file,
  // <prefix><split>.tsv: sentence, then A tab-separated ratings in [0,1].
  tsv_with_attribute_columns,
};

DatasetLayout parse_layout(const std::string& name);
std::string layout_name(DatasetLayout layout);

struct LoadOptions {
  DatasetLayout layout = DatasetLayout::split_per_attribute_file;
  std::string prefix;         // e.g. "sentiment." for the released Yelp files
  std::size_t max_len = 15;   // tokens kept per sentence
};

// With two attribute files the attribute is a single scalar: the
// lexicographically first name maps to 0.0 and the second to 1.0. With k > 2
// files each item gets a one-hot vector of length k.
DatasetSplits load_dataset(const std::filesystem::path& dir, const LoadOptions& options);

// Per-split, per-attribute-name counts plus length statistics.
struct CorpusStats {
  std::map<std::string, std::size_t> counts;  // attribute label -> items
  std::size_t max_length = 0;
  double mean_length = 0.0;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace fgim::text
