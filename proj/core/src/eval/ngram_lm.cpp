#include "fgim/eval/ngram_lm.hpp"

#include <cmath>
#include <set>

#include "fgim/errors.hpp"

namespace fgim::eval {

namespace {
constexpr int kBos = -1;  // context-only symbol, never predicted
const std::string kEosToken = "</s>";
const std::string kUnkToken = "<unk>";
}  // namespace

int NGramLM::id(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? ids_.at(kUnkToken) : it->second;
}

NGramLM NGramLM::train(const std::vector<std::vector<std::string>>& sentences, std::size_t order) {
  if (sentences.empty()) throw ContractError("train_lm: empty corpus");
  NGramLM lm;
  lm.order_ = order;
  std::set<std::string> seen;
  for (const auto& s : sentences) seen.insert(s.begin(), s.end());
  seen.erase(kEosToken);
  seen.erase(kUnkToken);
  lm.words_.assign(seen.begin(), seen.end());
  lm.words_.push_back(kEosToken);
  lm.words_.push_back(kUnkToken);
  for (std::size_t i = 0; i < lm.words_.size(); ++i) lm.ids_[lm.words_[i]] = static_cast<int>(i);
  if (order == 0) return lm;

  // Raw counts of every n-gram, n = 1..order, over BOS-padded sentences.
  std::vector<std::map<Key, double>> raw(order);
  for (const auto& s : sentences) {
    std::vector<int> ids(order - 1, kBos);
    for (const auto& w : s) ids.push_back(lm.id(w));
    ids.push_back(lm.id(kEosToken));
    for (std::size_t end = order - 1; end < ids.size(); ++end) {
      for (std::size_t n = 1; n <= order; ++n) {
        const Key gram(ids.begin() + static_cast<std::ptrdiff_t>(end + 1 - n), ids.begin() + static_cast<std::ptrdiff_t>(end + 1));
        raw[n - 1][gram] += 1.0;
      }
    }
  }

  lm.levels_.resize(order);
  for (std::size_t n = 1; n <= order; ++n) {
    auto& level = lm.levels_[n - 1];
    if (n == order) {
      level.counts = raw[n - 1];
    } else {
      // Continuation counts: distinct left extensions seen at order n+1.
      // N-grams whose left neighbour is always BOS keep their raw counts.
      for (const auto& [gram, c] : raw[n]) {
        const Key suffix(gram.begin() + 1, gram.end());
        if (suffix.front() != kBos) level.counts[suffix] += 1.0;
      }
      for (const auto& [gram, c] : raw[n - 1]) {
        if (gram.front() == kBos) level.counts[gram] = c;
      }
    }
    std::size_t n1 = 0, n2 = 0;
    for (const auto& [gram, c] : level.counts) {
      const Key ctx(gram.begin(), gram.end() - 1);
      level.totals[ctx] += c;
      level.types[ctx] += 1.0;
      if (c == 1.0) ++n1;
      if (c == 2.0) ++n2;
    }
    const double d = n1 > 0 ? static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2) : 0.0;
    level.discount = (d > 0.0 && d <= 1.0) ? d : 0.5;
  }
  return lm;
}

double NGramLM::prob(int word, const Key& context, std::size_t n) const {
  if (n == 0) return 1.0 / static_cast<double>(words_.size());
  const Key ctx(context.end() - static_cast<std::ptrdiff_t>(n - 1), context.end());
  const double lower = prob(word, context, n - 1);
  const auto& level = levels_[n - 1];
  auto total = level.totals.find(ctx);
  if (total == level.totals.end()) return lower;
  Key gram = ctx;
  gram.push_back(word);
  auto c = level.counts.find(gram);
  const double count = c == level.counts.end() ? 0.0 : c->second;
  const double d = level.discount;
  const double types = level.types.at(ctx);
  return std::max(count - d, 0.0) / total->second + d * types / total->second * lower;
}

double NGramLM::probability(const std::string& word, const std::vector<std::string>& context) const {
  Key ctx;
  const std::size_t need = order_ > 0 ? order_ - 1 : 0;
  for (std::size_t i = context.size(); i < need; ++i) ctx.push_back(kBos);
  const std::size_t skip = context.size() > need ? context.size() - need : 0;
  for (std::size_t i = skip; i < context.size(); ++i) ctx.push_back(id(context[i]));
  return prob(id(word), ctx, order_);
}

double NGramLM::perplexity(const std::vector<std::vector<std::string>>& sentences) const {
  if (sentences.empty()) throw ContractError("perplexity: empty evaluation set");
  double nll = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : sentences) {
    std::vector<std::string> history;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      const auto& w = i < s.size() ? s[i] : kEosToken;
      nll -= std::log(probability(w, history));
      history.push_back(w);
      ++tokens;
    }
  }
  return std::exp(nll / static_cast<double>(tokens));
}

}  // namespace fgim::eval
