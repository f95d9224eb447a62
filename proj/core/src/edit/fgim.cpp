#include "fgim/edit/fgim.hpp"

#include <string>

namespace fgim::edit {

void FgimConfig::validate() const {
  if (weights.empty()) throw ContractError("fgim: weight set is empty");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw ContractError("fgim: weight " + std::to_string(weights[i]) + " is not positive");
    if (i > 0 && !(weights[i] > weights[i - 1])) throw ContractError("fgim: weights must be strictly ascending");
  }
  if (!(decay > 0.0 && decay < 1.0)) throw ContractError("fgim: decay must lie in (0,1)");
  if (!(threshold > 0.0)) throw ContractError("fgim: threshold must be positive");
  if (s_steps == 0) throw ContractError("fgim: s_steps must be at least 1");
}

}  // namespace fgim::edit
