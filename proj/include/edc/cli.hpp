#pragma once

#include <iosfwd>

namespace edc::cli {

/// Exit codes: 0 success, 1 usage or runtime error, 2 malformed config or
/// input document, 3 missing file.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMalformed = 2;
inline constexpr int kExitMissingFile = 3;

/// Subcommands: run, compare, trace, gen-config. See `edc --help`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edc::cli
