#pragma once

#include <stdexcept>
#include <string>

namespace claimforge {

// Process exit codes used by the CLI.
enum class ExitCode : int {
    ok = 0,
    usage = 1,     // bad flags or bad config
    data = 2,      // input files violate a contract
    internal = 3,  // anything unexpected
};

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration problems: missing files, malformed config, bad flag combinations.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Data validation problems: malformed records, invariant violations, bad joins.
class DataError : public Error {
  public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

}  // namespace claimforge
