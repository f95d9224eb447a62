#include "fgim/textdata/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "fgim/errors.hpp"
#include "fgim/textdata/corpus.hpp"

namespace fgim::text {

namespace {
const std::vector<std::string> kReservedTokens = {"<pad>", "<s>", "</s>", "<unk>"};
}

Vocab::Vocab() : Vocab(std::vector<std::string>{}) {}

Vocab::Vocab(const std::vector<std::string>& tokens) {
  tokens_ = kReservedTokens;
  tokens_.insert(tokens_.end(), tokens.begin(), tokens.end());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw ContractError("duplicate vocabulary entry '" + tokens_[i] + "'");
    }
  }
}

int Vocab::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw IndexError("token id " + std::to_string(id) + " outside vocabulary of " + std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IngestionError(path.string() + ": cannot open for writing");
  for (std::size_t i = kReserved; i < tokens_.size(); ++i) out << tokens_[i] << '\n';
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string() + ": cannot open vocabulary");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) tokens.push_back(line);
  }
  return Vocab(tokens);
}

Vocab build_vocab(const Corpus& corpus, std::size_t min_count, std::size_t max_size) {
  if (corpus.empty()) throw IngestionError("cannot build a vocabulary from an empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& ex : corpus) {
    for (const auto& tok : ex.tokens) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // map order is lexicographic, so a stable sort on count keeps ties sorted.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t capacity = max_size > Vocab::kReserved ? max_size - Vocab::kReserved : 0;
  std::vector<std::string> tokens;
  for (const auto& [tok, n] : ranked) {
    if (n < min_count || tokens.size() >= capacity) break;
    if (std::find(kReservedTokens.begin(), kReservedTokens.end(), tok) != kReservedTokens.end()) continue;
    tokens.push_back(tok);
  }
  return Vocab(tokens);
}

std::vector<int> encode(std::span<const std::string> tokens, const Vocab& vocab, std::size_t max_len) {
  if (max_len == 0) throw ContractError("encode: max_len must be at least 1");
  const auto keep = std::min(tokens.size(), max_len - 1);
  std::vector<int> ids;
  ids.reserve(keep + 1);
  for (std::size_t i = 0; i < keep; ++i) ids.push_back(vocab.id(tokens[i]));
  ids.push_back(Vocab::kEos);
  return ids;
}

std::vector<std::string> decode(std::span<const int> ids, const Vocab& vocab) {
  std::vector<std::string> out;
  for (int id : ids) {
    const auto& tok = vocab.token(id);
    if (id == Vocab::kEos) break;
    if (id < Vocab::kReserved) continue;
    out.push_back(tok);
  }
  return out;
}

}  // namespace fgim::text
