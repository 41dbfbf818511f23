#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qzs::cli {

enum ExitCode : int { ok = 0, usage_error = 1, numerical_failure = 2 };

/// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace qzs::cli
