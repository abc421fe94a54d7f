#include "fracbubble/errors.hpp"

namespace fracbubble {

Error::Error(std::string code, ErrorKind kind, const std::string& message)
    : std::runtime_error(code + ": " + message), code_(std::move(code)), kind_(kind) {}

void config_error(const std::string& code, const std::string& message) {
  throw Error(code, ErrorKind::Config, message);
}

void computation_error(const std::string& code, const std::string& message) {
  throw Error(code, ErrorKind::Computation, message);
}

}  // namespace fracbubble
