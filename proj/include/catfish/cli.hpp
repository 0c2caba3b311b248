#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace catfish::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Environment variable consulted for the default --seed.
inline constexpr const char* kSeedEnv = "CATFISH_SEED";

int run(int argc, char** argv);
// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catfish::cli
