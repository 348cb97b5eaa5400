#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "prioritizer/scorers.hpp"

namespace prioritizer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `prioritizer` tool. args[0] is the program name.
/// Errors are reported on `err` as one line: "error: <category>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Scores CSV: "index,method,score", one row per input in index order,
// scores printed with 9 significant digits and +inf as "inf".
std::string format_score(double score);
void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRecord>& scores);
std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path);

}  // namespace prioritizer::cli
