#include "fgim/io/trace.hpp"

#include "json.hpp"

#include "fgim/textdata/tokenize.hpp"

namespace fgim::io {

template <typename T>
std::string trace_json(const edit::TransferResult<T>& result, const edit::FgimConfig& config) {
  using nlohmann::json;
  json steps = json::array();
  for (const auto& s : result.trace.steps) {
    steps.push_back({{"weight_index", s.weight_index},
                     {"inner_step", s.inner_step},
                     {"weight", s.weight},
                     {"grad_norm", s.grad_norm},
                     {"edit_norm", s.edit_norm},
                     {"loss", s.loss},
                     {"prediction", s.prediction}});
  }
  json j;
  j["source"] = text::join(result.source);
  j["target"] = std::vector<double>(result.target.values().begin(), result.target.values().end());
  j["output"] = text::join(result.output);
  j["success"] = result.success;
  j["success_weight_index"] =
      result.trace.success_weight_index ? json(*result.trace.success_weight_index) : json(nullptr);
  j["config"] = {{"weights", config.weights},
                 {"lambda", config.decay},
                 {"threshold", config.threshold},
                 {"s_steps", config.s_steps}};
  j["z"] = std::vector<double>(result.latent.begin(), result.latent.end());
  j["z_edited"] = std::vector<double>(result.edited.begin(), result.edited.end());
  j["steps"] = std::move(steps);
  return j.dump();
}

template std::string trace_json<float>(const edit::TransferResult<float>&, const edit::FgimConfig&);
template std::string trace_json<double>(const edit::TransferResult<double>&, const edit::FgimConfig&);

}  // namespace fgim::io
