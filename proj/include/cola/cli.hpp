#ifndef COLA_CLI_HPP
#define COLA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cola::cli {

enum ExitCode : int {
  kOk = 0,
  kReferenceMismatch = 1,
  kIoOrConfig = 2,
  kDomainValidation = 3,
};

/// Environment variable naming the default output directory.
inline constexpr const char *kOutDirEnv = "COLA_OUT_DIR";

/// Entry point of the `cola` executable; args[0] is the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cola::cli

#endif
