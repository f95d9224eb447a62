#pragma once

#include <string>
#include <vector>

namespace fgim::eval {

using Sentence = std::vector<std::string>;

// Corpus-level BLEU in [0, 100] as computed by multi-bleu: clipped n-gram
// precisions pooled over the corpus, geometric mean, closest-reference
// brevity penalty, no smoothing (any zero precision gives 0).
double bleu(const std::vector<Sentence>& candidates, const std::vector<std::vector<Sentence>>& references,
            std::size_t max_n = 4);

// Single reference per candidate.
double bleu(const std::vector<Sentence>& candidates, const std::vector<Sentence>& references, std::size_t max_n = 4);

}  // namespace fgim::eval
