#include "fgim/eval/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "fgim/errors.hpp"

namespace fgim::eval {

namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngrams(const Sentence& s, std::size_t n) {
  Counts counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[std::vector<std::string>(s.begin() + i, s.begin() + i + n)];
  return counts;
}

}  // namespace

double bleu(const std::vector<Sentence>& candidates, const std::vector<std::vector<Sentence>>& references,
            std::size_t max_n) {
  if (candidates.size() != references.size()) {
    throw ContractError("bleu: " + std::to_string(candidates.size()) + " candidates but " +
                        std::to_string(references.size()) + " reference sets");
  }
  if (max_n == 0) throw ContractError("bleu: max_n must be positive");
  std::vector<double> matched(max_n, 0.0), total(max_n, 0.0);
  double cand_len = 0.0, ref_len = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cand = candidates[i];
    const auto& refs = references[i];
    if (refs.empty()) throw ContractError("bleu: candidate without reference");
    cand_len += static_cast<double>(cand.size());
    // Closest reference length; ties go to the shorter one.
    std::size_t best = refs.front().size();
    for (const auto& r : refs) {
      const auto d = std::abs(static_cast<long>(r.size()) - static_cast<long>(cand.size()));
      const auto bd = std::abs(static_cast<long>(best) - static_cast<long>(cand.size()));
      if (d < bd || (d == bd && r.size() < best)) best = r.size();
    }
    ref_len += static_cast<double>(best);
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto cc = ngrams(cand, n);
      Counts clip;
      for (const auto& r : refs) {
        for (const auto& [g, c] : ngrams(r, n)) clip[g] = std::max(clip[g], c);
      }
      for (const auto& [g, c] : cc) {
        auto it = clip.find(g);
        matched[n - 1] += static_cast<double>(std::min(c, it == clip.end() ? std::size_t{0} : it->second));
        total[n - 1] += static_cast<double>(c);
      }
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (total[n] == 0.0 || matched[n] == 0.0) return 0.0;
    log_sum += std::log(matched[n] / total[n]);
  }
  const double bp = cand_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return 100.0 * bp * std::exp(log_sum / static_cast<double>(max_n));
}

double bleu(const std::vector<Sentence>& candidates, const std::vector<Sentence>& references, std::size_t max_n) {
  std::vector<std::vector<Sentence>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back({r});
  return bleu(candidates, refs, max_n);
}

}  // namespace fgim::eval
