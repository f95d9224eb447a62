#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fgim/errors.hpp"
#include "fgim/io/config.hpp"

namespace fgim::cli {

class MissingCheckpointError : public Error {
 public:
  using Error::Error;
};

class MalformedTargetError : public Error {
 public:
  using Error::Error;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

struct TransferArgs {
  std::string target;
  std::optional<std::filesystem::path> input, output, trace;
};

struct SweepArgs {
  std::optional<std::string> target;  // default: flip each test label
  std::size_t limit = 0;              // 0 = whole test split
  std::optional<std::filesystem::path> output;
};

struct EvalArgs {
  std::filesystem::path input;
  std::filesystem::path references;
  std::string target;
  std::optional<std::filesystem::path> output;
};

struct ExportArgs {
  std::string split = "test";
  std::size_t limit = 0;
  bool edit = false;  // also export FGIM-edited latents per weight
  std::optional<std::filesystem::path> output_prefix;
};

struct MakeToyArgs {
  std::filesystem::path output;
  std::size_t aspects = 1;
  std::size_t train_size = 0;  // 0 = preset size
  std::uint64_t seed = 7;
};

void train_ae(const io::RunConfig& config, Streams io);
void train_clf(const io::RunConfig& config, Streams io);
void transfer(const io::RunConfig& config, const TransferArgs& args, Streams io);
void sweep(const io::RunConfig& config, const SweepArgs& args, Streams io);
void evaluate(const io::RunConfig& config, const EvalArgs& args, Streams io);
void export_latents(const io::RunConfig& config, const ExportArgs& args, Streams io);
void make_toy(const MakeToyArgs& args, Streams io);

}  // namespace fgim::cli
