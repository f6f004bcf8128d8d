#pragma once

// Command-line entry point, callable in-process for tests. Returns the
// process exit code: 0 when the requested computation completed (a fit that
// stopped on its iteration budget still completed; converged=false is data),
// 1 on any error, with a message on stderr.

#include <string>
#include <vector>

namespace hawkes {

int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace hawkes
