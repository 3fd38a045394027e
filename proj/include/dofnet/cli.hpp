#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dofnet {

// Exit codes: 0 ok, 1 verification failure or inconsistency, 2 usage, 3 resource guard.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

// Seed used when --seed is absent.
inline constexpr const char* kSeedEnvVar = "DOFNET_SEED";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dofnet
