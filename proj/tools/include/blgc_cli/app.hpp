#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blgc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitInvariant = 4,
  kExitIo = 5,
};

// Environment variable consulted for the output directory when --out is absent.
inline constexpr const char* kOutDirEnv = "BLGC_OUT_DIR";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blgc::cli
