#pragma once

#include <ostream>

namespace hyperrelax {

/// Entry point of the hyperrelax command-line tool. Returns 0 on success,
/// 1 on numerical failure, 2 on usage or configuration errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperrelax
