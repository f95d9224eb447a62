#include "fgim/textdata/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>

#include "fgim/errors.hpp"
#include "fgim/textdata/tokenize.hpp"

namespace fgim::text {

namespace fs = std::filesystem;

namespace {

constexpr Split kSplits[] = {Split::train, Split::dev, Split::test};

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string() + ":0: cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string where(const fs::path& path, std::size_t line) { return path.string() + ":" + std::to_string(line) + ": "; }

// Attribute names present for a split, sorted.
std::vector<std::string> attribute_files(const fs::path& dir, const std::string& prefix, Split split) {
  const std::string stem = prefix + split_name(split) + ".";
  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.rfind(stem, 0) != 0) continue;
    const auto attr = name.substr(stem.size());
    if (attr.empty() || attr.find('.') != std::string::npos) continue;  // skips *.ref
    names.insert(attr);
  }
  return {names.begin(), names.end()};
}

Corpus load_per_attribute(const fs::path& dir, const LoadOptions& opt, Split split,
                          const std::vector<std::string>& names) {
  const std::size_t a = names.size() == 2 ? 1 : names.size();
  Corpus corpus(split, a, opt.max_len);
  corpus.attribute_names = names;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const fs::path path = dir / (opt.prefix + split_name(split) + "." + names[k]);
    if (!fs::exists(path)) throw IngestionError(where(path, 0) + "missing attribute file");
    const auto lines = read_lines(path);
    const fs::path ref_path = fs::path(path.string() + ".ref");
    std::optional<std::vector<std::string>> refs;
    if (fs::exists(ref_path)) {
      refs = read_lines(ref_path);
      if (refs->size() != lines.size()) {
        throw IngestionError(where(ref_path, refs->size()) + "reference file has " + std::to_string(refs->size()) +
                             " lines, source has " + std::to_string(lines.size()));
      }
    }
    std::vector<double> values(a, 0.0);
    if (a == 1) {
      values[0] = static_cast<double>(k);
    } else {
      values[k] = 1.0;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Example ex{tokenize(lines[i]), AttributeVector(values), std::nullopt};
      if (ex.tokens.empty()) continue;
      if (refs) ex.reference = tokenize((*refs)[i]);
      corpus.add(std::move(ex));
    }
  }
  return corpus;
}

Corpus load_tsv(const fs::path& path, const LoadOptions& opt, Split split, std::optional<std::size_t>& attrs) {
  const auto lines = read_lines(path);
  std::optional<Corpus> corpus;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2) throw IngestionError(where(path, i + 1) + "expected a sentence and at least one rating");
    const std::size_t a = cols.size() - 1;
    if (!attrs) attrs = a;
    if (*attrs != a) {
      throw IngestionError(where(path, i + 1) + "row has " + std::to_string(a) + " ratings, expected " +
                           std::to_string(*attrs));
    }
    std::vector<double> values;
    for (std::size_t c = 1; c < cols.size(); ++c) {
      double v = 0.0;
      const auto& s = cols[c];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IngestionError(where(path, i + 1) + "malformed rating '" + s + "'");
      }
      if (v < 0.0 || v > 1.0) throw IngestionError(where(path, i + 1) + "rating " + s + " outside [0,1]");
      values.push_back(v);
    }
    if (!corpus) corpus.emplace(split, a, opt.max_len);
    corpus->add(Example{tokenize(cols[0]), AttributeVector(std::move(values)), std::nullopt});
  }
  if (!corpus) throw IngestionError(where(path, 0) + "no rows");
  return std::move(*corpus);
}

}  // namespace

DatasetLayout parse_layout(const std::string& name) {
  if (name == "split-per-attribute-file" || name == "per-attribute") return DatasetLayout::split_per_attribute_file;
  if (name == "tsv-with-attribute-columns" || name == "tsv") return DatasetLayout::tsv_with_attribute_columns;
  throw ConfigError("unknown dataset layout '" + name + "'");
}

std::string layout_name(DatasetLayout layout) {
  return layout == DatasetLayout::split_per_attribute_file ? "split-per-attribute-file" : "tsv-with-attribute-columns";
}

DatasetSplits load_dataset(const fs::path& dir, const LoadOptions& options) {
  if (!fs::is_directory(dir)) throw IngestionError(where(dir, 0) + "dataset directory does not exist");
  std::vector<Corpus> parts;
  if (options.layout == DatasetLayout::split_per_attribute_file) {
    const auto names = attribute_files(dir, options.prefix, Split::train);
    if (names.size() < 2) {
      throw IngestionError(where(dir / (options.prefix + "train.*"), 0) + "need at least two attribute files");
    }
    for (auto split : kSplits) parts.push_back(load_per_attribute(dir, options, split, names));
  } else {
    std::optional<std::size_t> attrs;
    for (auto split : kSplits) {
      parts.push_back(load_tsv(dir / (options.prefix + split_name(split) + ".tsv"), options, split, attrs));
    }
  }
  return DatasetSplits{std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  std::size_t total = 0;
  for (const auto& ex : corpus) {
    std::string label;
    if (corpus.attribute_count() == 1 && corpus.attribute_names.size() == 2) {
      label = corpus.attribute_names[ex.attributes[0] >= 0.5 ? 1 : 0];
    } else {
      label = ex.attributes.to_string();
    }
    ++stats.counts[label];
    stats.max_length = std::max(stats.max_length, ex.tokens.size());
    total += ex.tokens.size();
  }
  stats.mean_length = corpus.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(corpus.size());
  return stats;
}

}  // namespace fgim::text
