#include "fgim/textdata/corpus.hpp"

#include "fgim/errors.hpp"

namespace fgim::text {

const char* split_name(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "?";
}

Corpus::Corpus(Split split, std::size_t attribute_count, std::size_t max_len)
    : split_(split), attribute_count_(attribute_count), max_len_(max_len) {
  if (attribute_count_ == 0) throw ContractError("corpus needs at least one attribute");
  if (max_len_ == 0) throw ContractError("corpus max length must be positive");
}

void Corpus::add(Example example) {
  if (example.attributes.size() != attribute_count_) {
    throw IngestionError("item has " + std::to_string(example.attributes.size()) + " attributes, corpus expects " +
                         std::to_string(attribute_count_));
  }
  if (example.tokens.size() > max_len_) example.tokens.resize(max_len_);
  items_.push_back(std::move(example));
}

}  // namespace fgim::text
