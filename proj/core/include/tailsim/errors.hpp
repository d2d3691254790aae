#pragma once

#include <stdexcept>
#include <string>

namespace tailsim {

struct InvalidMorphology : std::runtime_error {
  explicit InvalidMorphology(const std::string& what) : std::runtime_error(what) {}
};

struct WrongTailVariant : std::runtime_error {
  explicit WrongTailVariant(const std::string& what) : std::runtime_error(what) {}
};

struct WrongTerrain : std::runtime_error {
  explicit WrongTerrain(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the stepper when state blows past sane bounds; the trial runner
// converts it into a failure reason instead of aborting the batch.
struct NumericalDivergence : std::runtime_error {
  explicit NumericalDivergence(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientCycles : std::runtime_error {
  explicit InsufficientCycles(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tailsim
