#pragma once

#include <stdexcept>
#include <string>

namespace fgim {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// log/exp of out-of-domain values, probabilities outside (0,1), etc.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition (non-scalar loss, empty input, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Dataset files missing or malformed. Messages carry "path:line:".
class IngestionError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

// Two checkpoints that cannot be used together (e.g. latent size differs).
class IncompatibleModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace fgim
