#pragma once

#include <string>
#include <vector>

namespace lpcalc::cli {

inline constexpr const char* kToolName = "lpcalc";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kPass = 0,
    kCheckFailure = 1,
    kUsageError = 2,
    kIoError = 3,
};

struct Outcome {
    int exit_code = kPass;
    /// JSON report (empty after a usage or I/O error that precedes the run).
    std::string report;
    /// Usage text or error message for stderr.
    std::string diagnostics;
    /// True when the report went to --out instead of the caller.
    bool written = false;
};

/// Runs one subcommand. `args` excludes the program name:
///   {"partition-check", "--jmax", "5"}
/// Subcommands: norm, partition-check, weight-check, decompose, embed-check,
/// product-check, resolution-check, sharpness, lift-check, pde, logschrodinger.
/// `--config file.json` supplies any flag by its long name; flags on the
/// command line win.
Outcome dispatch(const std::vector<std::string>& args);

/// Removes the provenance timestamp so two reports can be compared byte for byte.
std::string strip_timestamp(const std::string& report);

}  // namespace lpcalc::cli
