#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nearsq::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitAnomalies = 1,
  kExitUsage = 2,
};

// Default directory for relative --checkpoint paths and for the default
// checkpoint file name.
inline constexpr const char* kCheckpointDirEnv = "NEARSQ_CHECKPOINT_DIR";

// args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace nearsq::cli
