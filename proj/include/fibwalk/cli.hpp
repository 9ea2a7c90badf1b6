#pragma once

#include <iosfwd>

namespace fibwalk::cli {

/// Runs one command line. Returns 0 on success or TRUE, 1 on FALSE or a
/// failed check, 2 on usage, parse and input errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fibwalk::cli
