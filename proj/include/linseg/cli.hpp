#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linseg {

enum ExitStatus { kExitOk = 0, kExitIo = 1, kExitUsage = 2 };

// Entry point of the `linseg` tool; args excludes the program name.
// Failures print one JSON line {"error": kind, "message": ...} to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linseg
