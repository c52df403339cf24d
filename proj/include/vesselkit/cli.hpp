#pragma once

#include <string>
#include <vector>

namespace vesselkit {
namespace cli {

// Exit codes: 0 pass, 2 check failure, 3 I/O or parse error, 4 internal.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace cli
}  // namespace vesselkit
