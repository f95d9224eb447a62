#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fgim::text {

class Corpus;

// Token <-> id bijection. Ids 0..3 are reserved.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kReserved = 4;

  Vocab();
  // Reserved tokens are prepended; `tokens` must not contain them or repeat.
  explicit Vocab(const std::vector<std::string>& tokens);

  std::size_t size() const { return tokens_.size(); }
  int id(const std::string& token) const;  // kUnk when absent
  bool contains(const std::string& token) const { return ids_.count(token) != 0; }
  const std::string& token(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  void save(const std::filesystem::path& path) const;
  static Vocab load(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Descending frequency, ties broken lexicographically; tokens below
// min_count are dropped and the total size (reserved included) is capped at
// max_size.
Vocab build_vocab(const Corpus& corpus, std::size_t min_count, std::size_t max_size);

// OOV -> UNK. At most max_len - 1 tokens are kept, then EOS is appended, so
// the result is never longer than max_len.
std::vector<int> encode(std::span<const std::string> tokens, const Vocab& vocab, std::size_t max_len);

// Stops at the first EOS and drops reserved ids.
std::vector<std::string> decode(std::span<const int> ids, const Vocab& vocab);

}  // namespace fgim::text
