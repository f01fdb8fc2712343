#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepbell::cli {

/// Runs the command line tool. Exit code 0 on success or verified
/// expectation, 1 on a violated expectation (e.g. a monogamy minimum below
/// -tol or an invalid chain proof), 2 on usage or input errors. Errors are
/// reported as one-line JSON documents on the error stream.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sepbell::cli
