#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcu::cli {

/// Entry point of the `mcu` tool. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mcu::cli
