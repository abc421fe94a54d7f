#pragma once

#include <stdexcept>
#include <string>

namespace fracbubble {

// Config errors map to CLI exit code 3, computation errors to exit code 2.
enum class ErrorKind { Config, Computation };

class Error : public std::runtime_error {
 public:
  Error(std::string code, ErrorKind kind, const std::string& message);

  const std::string& code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string code_;
  ErrorKind kind_;
};

[[noreturn]] void config_error(const std::string& code, const std::string& message);
[[noreturn]] void computation_error(const std::string& code, const std::string& message);

}  // namespace fracbubble
