#pragma once

// Command-line front end. A RunConfig names one subcommand and carries its
// parameters as strings; run() validates them, dispatches, and writes the
// artifact to the output path (or the given stream when the path is empty).

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bundlecurv::cli {

enum class Format { Csv, Json };

struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> params;  // keys without leading dashes
  std::string out;                            // empty: write to the stream
  std::optional<Format> format;
};

/// Subcommand names in the order they appear in --help.
const std::vector<std::string>& subcommands();

/// Parameter keys accepted by a subcommand.
const std::vector<std::string>& parameter_keys(const std::string& subcommand);

/// Executes one command. Returns 0 on success, 2 for parameter errors and 1
/// for every other failure; failures print one line `error[code]: message`
/// to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Produces the artifact text without writing it anywhere. Throws
/// bundlecurv::Error.
std::string render(const RunConfig& config);

/// argv front end built on CLI11.
int main(int argc, char** argv);

}  // namespace bundlecurv::cli
