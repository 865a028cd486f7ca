#pragma once

#include "qaw/json_io.hpp"

#include <string>
#include <vector>

namespace qaw {

inline constexpr const char* kVersion = "0.3.0";

struct CliOutcome {
  int exit_code = 0;
  std::string out;  // stdout
  std::string err;  // stderr
};

// Runs one command; args exclude the program name. Never throws.
// Exit codes: 0 all verdicts positive, 1 negative verdict, 2 input error,
// 3 bound exceeded.
CliOutcome run_cli(const std::vector<std::string>& args);

// FNV-1a, 64 bit, as 16 hex digits.
std::string content_hash(std::string_view bytes);

}  // namespace qaw
