#include "fgim/textdata/batch.hpp"

#include <algorithm>
#include <numeric>

#include "fgim/errors.hpp"
#include "fgim/numerics/random.hpp"

namespace fgim::text {

std::vector<int> Batch::row(std::size_t b) const {
  const auto* begin = ids.data() + b * width;
  return {begin, begin + lengths[b]};
}

BatchIterator::BatchIterator(const Corpus& corpus, const Vocab& vocab, std::size_t batch_size, bool shuffle,
                             std::uint64_t seed, std::size_t max_len)
    : corpus_(corpus), vocab_(vocab), batch_size_(batch_size), max_len_(max_len), order_(corpus.size()) {
  if (batch_size_ == 0) throw ContractError("batch size must be at least 1");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (shuffle) {
    num::Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order_));
  }
}

std::optional<Batch> BatchIterator::next() {
  if (cursor_ >= order_.size()) return std::nullopt;
  const auto end = std::min(cursor_ + batch_size_, order_.size());
  Batch batch;
  batch.size = end - cursor_;
  batch.attribute_count = corpus_.attribute_count();
  std::vector<std::vector<int>> rows;
  for (auto i = cursor_; i < end; ++i) {
    const auto& ex = corpus_[order_[i]];
    rows.push_back(encode(ex.tokens, vocab_, max_len_));
    batch.width = std::max(batch.width, rows.back().size());
    batch.indices.push_back(order_[i]);
    batch.attributes.insert(batch.attributes.end(), ex.attributes.values().begin(), ex.attributes.values().end());
  }
  batch.ids.assign(batch.size * batch.width, Vocab::kPad);
  batch.mask.assign(batch.size * batch.width, 0);
  for (std::size_t b = 0; b < rows.size(); ++b) {
    std::copy(rows[b].begin(), rows[b].end(), batch.ids.begin() + static_cast<std::ptrdiff_t>(b * batch.width));
    std::fill_n(batch.mask.begin() + static_cast<std::ptrdiff_t>(b * batch.width), rows[b].size(), 1);
    batch.lengths.push_back(rows[b].size());
  }
  cursor_ = end;
  return batch;
}

}  // namespace fgim::text
