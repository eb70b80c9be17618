#pragma once

namespace infharm {

// Entry point of the command line tool. Returns the process exit code:
// 0 on success, 1 when the input or the computation fails, 2 on usage
// errors.
int run(int argc, const char* const* argv);

}  // namespace infharm
