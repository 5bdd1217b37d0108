#pragma once

#include <iosfwd>

namespace nullgauge::cli
{

enum ExitCode { ok = 0, semantic_false = 1, input_error = 2, numeric_failure = 3 };

// Runs the nullgauge command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace nullgauge::cli
