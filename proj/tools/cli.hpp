#pragma once

#include <ostream>

namespace lfe {

/// Entry point of the `lfe` tool. Returns 0 on PASS, 1 on FAIL, 2 on input
/// errors. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lfe
