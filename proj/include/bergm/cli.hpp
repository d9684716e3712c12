#pragma once

namespace bergm {

/// Command-line entry point. Exit codes: 0 success, 1 usage or validation
/// error, 2 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace bergm
