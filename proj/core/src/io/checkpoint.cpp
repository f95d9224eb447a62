#include "fgim/io/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "fgim/errors.hpp"

namespace fgim::io {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename U>
void put(std::string& out, U value) {
  char buf[sizeof(U)];
  std::memcpy(buf, &value, sizeof(U));
  out.append(buf, sizeof(U));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename U>
  U get(const char* what) {
    need(sizeof(U), what);
    U value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(U));
    pos_ += sizeof(U);
    return value;
  }

  std::string take(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void need(std::size_t n, const char* what) const {
    if (n > bytes_.size() - pos_) {
      throw CheckpointError("checkpoint truncated while reading " + std::string(what) + " at byte " +
                            std::to_string(pos_));
    }
  }

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t position() const { return pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

template <typename T>
std::string serialize_checkpoint(const num::NamedTensors<T>& tensors) {
  std::set<std::string> names;
  for (const auto& [name, t] : tensors) {
    if (!names.insert(name).second) throw CheckpointError("duplicate checkpoint entry '" + name + "'");
  }
  std::string out(kCheckpointMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, tensors.size());
  for (const auto& [name, t] : tensors) {
    put<std::uint64_t>(out, name.size());
    out += name;
    put<std::uint64_t>(out, t.shape().size());
    for (auto d : t.shape()) put<std::uint64_t>(out, d);
    for (auto v : t.data()) put<float>(out, static_cast<float>(v));
  }
  return out;
}

num::NamedTensors<float> deserialize_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.take(4, "magic") != std::string(kCheckpointMagic, 4)) throw CheckpointError("not a checkpoint: bad magic");
  const auto version = in.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = in.get<std::uint64_t>("entry count");
  num::NamedTensors<float> out;
  std::set<std::string> names;
  for (std::uint64_t e = 0; e < count; ++e) {
    const auto len = in.get<std::uint64_t>("name length");
    auto name = in.take(len, "name");
    if (!names.insert(name).second) throw CheckpointError("duplicate checkpoint entry '" + name + "'");
    const auto rank = in.get<std::uint64_t>("rank");
    if (rank > 8) throw CheckpointError("entry '" + name + "' has implausible rank " + std::to_string(rank));
    num::Shape shape;
    std::size_t total = 1;
    for (std::uint64_t r = 0; r < rank; ++r) {
      const auto d = in.get<std::uint64_t>("dimension");
      shape.push_back(d);
      if (d != 0 && total > bytes.size() / d) throw CheckpointError("entry '" + name + "' is larger than the file");
      total *= d;
    }
    in.need(total * 4, "values");
    std::vector<float> values(total);
    for (auto& v : values) v = in.get<float>("value");
    try {
      out.emplace_back(name, num::Tensor<float>(std::move(shape), std::move(values)));
    } catch (const DimensionError& e) {
      throw CheckpointError("entry '" + name + "': " + e.what());
    }
  }
  if (!in.done()) {
    throw CheckpointError("checkpoint has " + std::to_string(bytes.size() - in.position()) + " trailing bytes");
  }
  return out;
}

template <typename T>
void save_checkpoint(const num::NamedTensors<T>& tensors, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(tensors);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing checkpoint " + path.string());
}

num::NamedTensors<float> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_checkpoint(bytes);
  } catch (const CheckpointError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

num::Shape entry_shape(const num::NamedTensors<float>& tensors, const std::string& name) {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t.shape();
  }
  throw CheckpointError("checkpoint has no entry '" + name + "'");
}

template std::string serialize_checkpoint<float>(const num::NamedTensors<float>&);
template std::string serialize_checkpoint<double>(const num::NamedTensors<double>&);
template void save_checkpoint<float>(const num::NamedTensors<float>&, const std::filesystem::path&);
template void save_checkpoint<double>(const num::NamedTensors<double>&, const std::filesystem::path&);

}  // namespace fgim::io
