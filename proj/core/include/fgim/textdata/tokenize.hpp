#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fgim::text {

// Lowercases ASCII letters and splits on whitespace. Punctuation is expected
// to be pre-separated, as in the released sentiment/style corpora.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace fgim::text
