#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gscsat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // infeasible request or runtime failure
inline constexpr int kExitUsage = 2;    // bad arguments, configuration or input file

/// Entry point for the `gscsat` tool; argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gscsat
