#pragma once

#include <string>

#include "fgim/edit/transfer.hpp"

namespace fgim::io {

// One JSON object per transferred sentence, without a trailing newline:
// source, target, output, success, success_weight_index, config (weights,
// lambda, threshold, s_steps), z, z_edited and every inner step.
template <typename T>
std::string trace_json(const edit::TransferResult<T>& result, const edit::FgimConfig& config);

}  // namespace fgim::io
