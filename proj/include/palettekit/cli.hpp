#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace palettekit::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIo = 2,
    kEmptyCorpus = 3,
    kModel = 4,
    kBadPalette = 5,
    kResourceCap = 6,
};

/// Runs the command line `args` (args[0] is the program name). Human-readable
/// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace palettekit::cli
