#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace modcomplete::cli {

struct RunConfig {
  std::string model_path;
  std::string corpus_path;
  std::optional<std::string> kb_path;  // default knowledge base when empty
  std::string out_model_path;
  std::string report_path;
  std::string trace_path;
  std::optional<std::string> diagram_dir;
  bool strict = false;  // warnings fail the run
  bool explain = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputFailure = 1;
inline constexpr int kExitFindings = 2;

// Runs the full pipeline and writes model, report, trace and diagrams.
// Nothing is written when an input cannot be read.
int cmd_complete(const RunConfig& config, std::ostream& out, std::ostream& err);

// Dry run: per-requirement verdicts and acceptability findings, no files.
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_kb_lint(const std::optional<std::string>& kb_path, bool strict, std::ostream& out, std::ostream& err);

}  // namespace modcomplete::cli
