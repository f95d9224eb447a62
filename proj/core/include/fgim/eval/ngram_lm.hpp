#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace fgim::eval {

// Interpolated Kneser-Ney n-gram model. The recursion bottoms out in the
// uniform distribution over the vocabulary (observed words, </s> and <unk>),
// so order 0 is exactly that uniform model.
class NGramLM {
 public:
  static NGramLM train(const std::vector<std::vector<std::string>>& sentences, std::size_t order = 3);

  std::size_t order() const { return order_; }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& vocabulary() const { return words_; }

  // P(word | context); context is the preceding words (BOS-padded if short).
  // Unknown words are scored as <unk>.
  double probability(const std::string& word, const std::vector<std::string>& context) const;

  // exp of the mean negative log-probability per token, </s> included.
  double perplexity(const std::vector<std::vector<std::string>>& sentences) const;

  double discount(std::size_t n) const { return levels_.at(n - 1).discount; }

 private:
  using Key = std::vector<int>;
  struct Level {
    std::map<Key, double> counts;   // full n-gram -> (continuation) count
    std::map<Key, double> totals;   // context -> sum of counts
    std::map<Key, double> types;    // context -> distinct followers
    double discount = 0.5;
  };

  int id(const std::string& word) const;
  double prob(int word, const Key& context, std::size_t n) const;

  std::size_t order_ = 3;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
  std::vector<Level> levels_;  // levels_[n-1] holds n-grams
};

inline NGramLM train_lm(const std::vector<std::vector<std::string>>& sentences, std::size_t order = 3) {
  return NGramLM::train(sentences, order);
}

}  // namespace fgim::eval
