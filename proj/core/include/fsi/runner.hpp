#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsi/config.hpp"

namespace fsi {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitCompat = 2,
  kExitNonConvergence = 3,
  kExitDegenerate = 4,
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand (simulate, verify, mms, compat, dependence,
/// inequalities) and writes its artifacts plus `manifest.txt` into the output
/// directory. Errors are reported on `err` and mapped to exit codes.
int run(const std::string& subcommand, const std::string& config_path, std::ostream& out, std::ostream& err);
int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace fsi
