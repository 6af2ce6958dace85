#pragma once

#include <stdexcept>
#include <string>

namespace graphlb {

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kIo = 3,
  kBudgetExceeded = 4,
  kInternal = 5,
};

// Every failure inside the core surfaces as this exception; the C layer maps
// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace graphlb
