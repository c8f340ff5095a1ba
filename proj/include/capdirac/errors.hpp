#pragma once

#include <stdexcept>
#include <string>

namespace capdirac {

// Exit-code contract used by the CLI: 0 success, 2 bad configuration,
// 3 solver failure, 4 failed precondition (e.g. trapping detected where a
// nontrapping window is required).
enum class ExitCode : int { ok = 0, config = 2, solver = 3, precondition = 4 };

struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace capdirac
