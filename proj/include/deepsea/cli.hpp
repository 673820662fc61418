#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deepsea {

/// Command-line entry point. Returns 0 on success, 2 on usage errors and 1
/// on any other failure (with a single "error: ..." line on `err`).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace deepsea
