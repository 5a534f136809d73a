#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bubbles/errors.hpp"
#include "bubbles/rational_map.hpp"

namespace bubbles::cli {

// Bad flags or values: exit code 2.
class UsageError : public Error {
 public:
  UsageError(const std::string& stage, const std::string& key, const std::string& what);
};

// A pipeline stage failed on valid input: exit code 1.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& key, const std::string& what);
};

// Accepts RE, IMi, RE+IMi and RE-IMi; each number may carry an exponent
// ("1e-3-2.5E+1i"). A bare "i" means 1. Throws std::invalid_argument.
cplx parse_complex(const std::string& text);

struct JobConfig {
  std::string command;
  std::string family;
  std::map<std::string, std::string> params;  // as given on the command line
  std::optional<cplx> center;
  std::optional<double> width;
  int resolution = 512;
  int budget = 10000;
  int workers = 0;
  std::string kernel = "auto";
  std::uint64_t seed = 1;
  std::string image;   // PPM output, empty for none
  std::string report;  // JSON output, empty for stdout
};

constexpr int kMinResolution = 16;
constexpr int kMaxResolution = 8192;
constexpr int kMaxBudget = 10000000;

// Runs one command line (without the program name). Reports go to their
// file or `out`; diagnostics go to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bubbles::cli
