#pragma once

#include <iosfwd>

namespace sphsemi {

/// Runs the harness. Returns 0 when every verdict passes, 1 on a verdict
/// failure, 2 on a bad command line or configuration.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphsemi
