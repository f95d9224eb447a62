#include "fgim/textdata/attributes.hpp"

#include <charconv>
#include <sstream>

#include "fgim/errors.hpp"

namespace fgim::text {

AttributeVector::AttributeVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractError("attribute vector needs at least one aspect");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("attribute value " + std::to_string(v) + " outside [0,1]");
  }
}

AttributeVector AttributeVector::parse(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto first = piece.find_first_not_of(" \t");
    const auto last = piece.find_last_not_of(" \t");
    if (first == std::string::npos) throw ContractError("empty attribute value in '" + text + "'");
    const auto trimmed = piece.substr(first, last - first + 1);
    double v = 0.0;
    const auto* b = trimmed.data();
    const auto* e = trimmed.data() + trimmed.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) throw ContractError("malformed attribute value '" + trimmed + "'");
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return AttributeVector(std::move(values));
}

std::string AttributeVector::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) os << ',';
    os << values_[i];
  }
  return os.str();
}

}  // namespace fgim::text
