#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fockbench {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kManifestFormatVersion = "fockbench-manifest-v1";
inline constexpr const char* kToolVersion = "fockbench 1.0.0";

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

// "0.1,0.2", "0:1:0.25" (inclusive), or a single number.
std::vector<double> parse_value_list(const std::string& spec);

}  // namespace fockbench
