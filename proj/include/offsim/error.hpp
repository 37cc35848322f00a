#pragma once

#include <stdexcept>
#include <string>

namespace offsim {

enum class ErrorCode {
  unknown_node,
  unreachable,
  parse_error,
  invariant_violation,
  rule_violation,
  config_error,
  io_error,
};

class SimError : public std::runtime_error {
public:
  SimError(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace offsim
