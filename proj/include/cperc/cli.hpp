#ifndef CPERC_CLI_HPP
#define CPERC_CLI_HPP

#include <iosfwd>

namespace cperc::cli {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSizing = 3;

const char* version();

/// Parses argv, runs the subcommand and returns its exit code. Results go to
/// `out` unless --out names a file; errors go to `err` as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace cperc::cli

#endif  // CPERC_CLI_HPP
