#ifndef MGKAN_CLI_HPP
#define MGKAN_CLI_HPP

namespace mgkan::cli {

/// Entry point behind the `mgkan` binary. Exit codes: 0 success,
/// 1 training failure, 2 input/config error, 3 checkpoint error.
int run(int argc, const char* const* argv);

} // namespace mgkan::cli

#endif // MGKAN_CLI_HPP
