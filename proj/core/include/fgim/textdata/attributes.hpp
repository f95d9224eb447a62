#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fgim::text {

// One value in [0,1] per aspect. Binary attributes are 0.0 / 1.0.
class AttributeVector {
 public:
  AttributeVector() = default;
  explicit AttributeVector(std::vector<double> values);
  AttributeVector(std::initializer_list<double> values) : AttributeVector(std::vector<double>(values)) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  // Comma-separated decimals, e.g. "1.0,0,0.5".
  static AttributeVector parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const AttributeVector&) const = default;

 private:
  std::vector<double> values_;
};

}  // namespace fgim::text
