#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgim/textdata/attributes.hpp"

namespace fgim::text {

enum class Split { train, dev, test };

const char* split_name(Split split);

struct Example {
  std::vector<std::string> tokens;
  AttributeVector attributes;
  std::optional<std::vector<std::string>> reference;
};

// Attribute-labelled sentences of one split. Every item carries exactly
// attribute_count() aspects and at most max_len() tokens.
class Corpus {
 public:
  Corpus(Split split, std::size_t attribute_count, std::size_t max_len);

  // Truncates to max_len tokens; rejects a mismatched attribute count.
  void add(Example example);

  Split split() const { return split_; }
  std::size_t attribute_count() const { return attribute_count_; }
  std::size_t max_len() const { return max_len_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Example& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Example>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  std::vector<std::string> attribute_names;

 private:
  Split split_;
  std::size_t attribute_count_;
  std::size_t max_len_;
  std::vector<Example> items_;
};

struct DatasetSplits {
  Corpus train;
  Corpus dev;
  Corpus test;
};

}  // namespace fgim::text
