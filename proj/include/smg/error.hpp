#pragma once

#include <stdexcept>
#include <string>

namespace smg {

enum class ErrorCode {
  InvalidVertex,
  InvalidPayoff,
  UnsupportedObjective,
  NotAnEndComponent,
  NotASubarena,
  TooLarge,
  ProfileMismatch,
  NotFavourable,
  InvalidSupport,
  DomainError,
  MalformedMachine,
  RosterMismatch,
  UnknownFixture,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smg
