#pragma once

#include "config.hpp"

#include <string>

namespace glv::cli {

enum Status : int { kOk = 0, kInvalid = 1, kNonconvergence = 2, kChecksFailed = 3 };

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  bool quiet = false;
};

/// Executes one command and writes its report files into out_dir.
/// Throws IoError when a file cannot be written.
int run(Command command, const RunConfig& config, const RunOptions& options);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full command line: glvortex <command> --config <path> [--out <dir>] [--threads N].
int main_entry(int argc, char** argv);

}  // namespace glv::cli
