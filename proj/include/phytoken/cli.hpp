#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phytoken::cli {

// Entry point of the `phytoken` tool. Subcommands: generate, tokenize,
// detokenize, traits, eval, distcmp, grid. Each run writes one JSON run report
// (command, input digests, outputs, payload, wall time) to `out` or to the
// --report path. Returns 0 on success, 1 on a data or I/O error, 2 on a
// usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phytoken::cli
