#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fgim/numerics/params.hpp"

namespace fgim::io {

inline constexpr char kCheckpointMagic[4] = {'F', 'G', 'I', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Archive layout, all integers little-endian:
//   "FGIM" | u32 version | u64 count |
//   count x (u64 name_len | name | u64 rank | rank x u64 dim | f32 values)
// Values are stored as 32-bit floats whatever T is.
template <typename T>
std::string serialize_checkpoint(const num::NamedTensors<T>& tensors);

// Validates magic, version, lengths and name uniqueness; throws
// CheckpointError otherwise.
num::NamedTensors<float> deserialize_checkpoint(const std::string& bytes);

template <typename T>
void save_checkpoint(const num::NamedTensors<T>& tensors, const std::filesystem::path& path);

// Throws CheckpointError for unreadable or malformed files.
num::NamedTensors<float> load_checkpoint(const std::filesystem::path& path);

template <typename T>
num::NamedTensors<T> cast_tensors(const num::NamedTensors<float>& tensors) {
  num::NamedTensors<T> out;
  out.reserve(tensors.size());
  for (const auto& [name, t] : tensors) out.emplace_back(name, num::cast<T>(t));
  return out;
}

// Shape of a named entry; throws CheckpointError when absent.
num::Shape entry_shape(const num::NamedTensors<float>& tensors, const std::string& name);

}  // namespace fgim::io
