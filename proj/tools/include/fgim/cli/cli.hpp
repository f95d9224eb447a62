#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fgim::cli {

enum class ExitCode : int {
  ok = 0,
  failure = 1,            // anything not listed below
  usage = 2,              // bad command line
  config = 3,             // unreadable or invalid config file
  ingestion = 4,          // dataset or input text problems
  missing_checkpoint = 5,
  checkpoint_format = 6,
  incompatible_models = 7,  // latent_dim (or other shapes) disagree
  malformed_target = 8,
  training_diverged = 9,
};

// Runs one subcommand. args excludes the program name. Sentences for
// `transfer` are read from `in` when --input is absent.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fgim::cli
