#pragma once

// Command-line entry point: `run`, `sweep`, and `report` subcommands.
// Split from main() so tests can drive it directly.

namespace tailsim {

int cli_main(int argc, const char* const* argv);

}  // namespace tailsim
