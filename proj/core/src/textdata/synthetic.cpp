#include "fgim/textdata/synthetic.hpp"

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include "fgim/errors.hpp"
#include "fgim/numerics/random.hpp"
#include "fgim/textdata/tokenize.hpp"

namespace fgim::text {

namespace {

using Words = std::vector<std::string>;

const Words kPositive = {"good",  "great", "delicious", "friendly", "amazing", "excellent",
                         "fresh", "nice",  "wonderful", "perfect",  "tasty",   "lovely"};
const Words kNegative = {"bad",  "terrible", "bland", "rude",  "awful",        "horrible",
                         "cold", "dirty",    "slow",  "stale", "disappointing", "greasy"};
const Words kAdverbs = {"very", "really", "quite", "so", "pretty", "always"};
const Words kSubjects = {"the food",  "the service", "the staff", "our waiter", "the pizza", "the room",
                         "the place", "the coffee",  "the menu",  "the pasta",  "the bar",   "the owner"};
const Words kFood = {"the food", "the pizza", "the pasta", "the soup", "the steak", "the salad"};
const Words kService = {"the service", "the staff", "our waiter", "the host", "the manager", "the cashier"};
// Each aspect has its own adjectives so the slot of a sentiment word is
// recoverable from the words alone.
const Words kFoodPositive = {"delicious", "tasty", "fresh", "flavorful", "perfect", "yummy"};
const Words kFoodNegative = {"bland", "stale", "greasy", "cold", "soggy", "burnt"};
const Words kServicePositive = {"friendly", "helpful", "quick", "attentive", "polite", "welcoming"};
const Words kServiceNegative = {"rude", "slow", "careless", "dismissive", "unhelpful", "lazy"};

const std::string& pick(const Words& words, num::Rng& rng) { return words[rng.index(words.size())]; }

std::string adjective(bool positive, num::Rng& rng) { return pick(positive ? kPositive : kNegative, rng); }

std::string single_aspect(bool pos, num::Rng& rng) {
  const auto& subj = pick(kSubjects, rng);
  switch (rng.index(6)) {
    case 0: return subj + " was " + adjective(pos, rng) + " .";
    case 1: return subj + " is " + pick(kAdverbs, rng) + " " + adjective(pos, rng) + " .";
    case 2: return "i think " + subj + " was " + adjective(pos, rng) + " .";
    case 3: return subj + " was " + adjective(pos, rng) + " and " + adjective(pos, rng) + " .";
    case 4: return "we found " + subj + " " + pick(kAdverbs, rng) + " " + adjective(pos, rng) + " .";
    default: return "honestly " + subj + " is " + adjective(pos, rng) + " !";
  }
}

std::string two_aspect(bool food_pos, bool service_pos, num::Rng& rng) {
  const auto& food = pick(kFood, rng);
  const auto& service = pick(kService, rng);
  const auto& food_adj = pick(food_pos ? kFoodPositive : kFoodNegative, rng);
  const auto& service_adj = pick(service_pos ? kServicePositive : kServiceNegative, rng);
  const std::string joiner = food_pos == service_pos ? "and" : "but";
  switch (rng.index(3)) {
    case 0: return food + " was " + food_adj + " " + joiner + " " + service + " was " + service_adj + " .";
    case 1:
      return food + " was " + pick(kAdverbs, rng) + " " + food_adj + " " + joiner + " " + service + " was " +
             service_adj + " .";
    default:
      return food + " is " + food_adj + " , " + service + " is " + pick(kAdverbs, rng) + " " + service_adj + " .";
  }
}

Corpus generate(Split split, std::size_t n, const SyntheticOptions& opt, num::Rng& rng) {
  Corpus corpus(split, opt.aspects, opt.max_len);
  if (opt.aspects == 1) {
    corpus.attribute_names = {"negative", "positive"};
  } else {
    corpus.attribute_names = {"food", "service"};
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (opt.aspects == 1) {
      const bool pos = (i % 2) == 1;
      corpus.add({tokenize(single_aspect(pos, rng)), AttributeVector{pos ? 1.0 : 0.0}, std::nullopt});
    } else {
      const bool food = (i % 2) == 1;
      const bool service = ((i / 2) % 2) == 1;
      corpus.add({tokenize(two_aspect(food, service, rng)),
                  AttributeVector{food ? 1.0 : 0.0, service ? 1.0 : 0.0}, std::nullopt});
    }
  }
  return corpus;
}

}  // namespace

DatasetSplits make_sentiment_corpus(const SyntheticOptions& options) {
  if (options.aspects != 1 && options.aspects != 2) throw ContractError("synthetic corpus supports 1 or 2 aspects");
  num::Rng rng(options.seed);
  auto train = generate(Split::train, options.train_size, options, rng);
  auto dev = generate(Split::dev, options.dev_size, options, rng);
  auto test = generate(Split::test, options.test_size, options, rng);
  return DatasetSplits{std::move(train), std::move(dev), std::move(test)};
}

void write_tsv_layout(const DatasetSplits& splits, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const Corpus* c : {&splits.train, &splits.dev, &splits.test}) {
    const auto path = dir / (std::string(split_name(c->split())) + ".tsv");
    std::ofstream out(path);
    if (!out) throw IngestionError(path.string() + ":0: cannot open for writing");
    for (const auto& ex : *c) {
      out << join(ex.tokens);
      for (double v : ex.attributes.values()) out << '\t' << v;
      out << '\n';
    }
  }
}

}  // namespace fgim::text
