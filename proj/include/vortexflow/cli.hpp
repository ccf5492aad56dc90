#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vortexflow {

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& subcommands();

// Runs one subcommand, writing artifacts into the output directory. On failure
// prints a single line "error field=<field> message=<text>" to err, removes
// any artifacts written so far and returns a nonzero status.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace vortexflow
