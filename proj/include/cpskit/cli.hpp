#ifndef CPSKIT_CLI_HPP_
#define CPSKIT_CLI_HPP_

#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpskit/core.hpp"

namespace cpskit {

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stable process exit codes.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitValidationFailure = 3,
};

// Reads "x1,...,xd,y" CSV with a header row. Throws DataError.
std::vector<Observation> read_observations_csv(std::istream& in);

// Runs the command line `args` (args[0] is the program name) and returns the
// process exit code. Output goes to `out`, diagnostics to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cpskit

#endif  // CPSKIT_CLI_HPP_
