#pragma once

#include <iosfwd>

namespace bandsign::cli {

// Parses and runs one command; the report goes to `out` (JSON), logs to
// `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bandsign::cli
