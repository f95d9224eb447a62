#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fgim/textdata/corpus.hpp"
#include "fgim/textdata/vocab.hpp"

namespace fgim::text {

// Padded id matrix [size x width]; mask is 1 exactly where id != PAD.
struct Batch {
  std::size_t size = 0;
  std::size_t width = 0;
  std::size_t attribute_count = 0;
  std::vector<int> ids;
  std::vector<std::uint8_t> mask;
  std::vector<std::size_t> lengths;
  std::vector<double> attributes;    // [size x attribute_count]
  std::vector<std::size_t> indices;  // positions in the source corpus

  std::vector<int> row(std::size_t b) const;  // unpadded
};

// Deterministic, single-consumer stream of batches. The final partial batch
// is emitted.
class BatchIterator {
 public:
  BatchIterator(const Corpus& corpus, const Vocab& vocab, std::size_t batch_size, bool shuffle,
                std::uint64_t seed, std::size_t max_len);

  std::optional<Batch> next();

 private:
  const Corpus& corpus_;
  const Vocab& vocab_;
  std::size_t batch_size_;
  std::size_t max_len_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

inline BatchIterator batch_iter(const Corpus& corpus, const Vocab& vocab, std::size_t batch_size, bool shuffle,
                                std::uint64_t seed, std::size_t max_len) {
  return BatchIterator(corpus, vocab, batch_size, shuffle, seed, max_len);
}

}  // namespace fgim::text
