#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace metaeval::cli {

// Parsed `analyze` invocation.
struct Options {
  std::string config_path;
  std::optional<std::string> effect_type;  // overrides the manifest family
  std::optional<double> alpha;             // overrides the manifest alpha
  std::string out_svg;
  std::string out_md;
};

// Runs the analysis and writes both artifacts, or neither. Returns the
// process exit code:
//   0  success
//   1  usage or manifest problems
//   2  unreadable, malformed, or misaligned input data
//   3  degenerate statistics or rendering failures
int run(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace metaeval::cli
