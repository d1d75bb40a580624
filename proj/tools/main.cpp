#include <iostream>

#include "lpcalc/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const lpcalc::cli::Outcome r = lpcalc::cli::dispatch(args);
    if (!r.report.empty() && !r.written) std::cout << r.report;
    if (!r.diagnostics.empty()) (r.exit_code == 0 ? std::cout : std::cerr) << r.diagnostics;
    return r.exit_code;
}
