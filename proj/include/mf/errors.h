#ifndef MF_ERRORS_H_
#define MF_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mf {

// Every recoverable failure in the engine is reported as an mf::Error carrying
// one of these codes. Programming errors (broken internal invariants) use
// mf::InternalError instead.
enum class ErrorCode {
  kDuplicateId,
  kInvalidThing,
  kUnknownEntity,
  kCycleRejected,
  kMalformedEvent,
  kMissingField,
  kInvariantViolation,
  kOutOfOrder,
  kStaleDictionary,
  kOutOfRange,
  kInvalidStrategy,
  kEmptyFeedback,
  kContextImmutable,
  kIncompleteAssignment,
  kSameContext,
  kIllegalTransition,
  kEmptyQuery,
  kInvalidProfile,
  kInvalidConfig,
  kVersionMismatch,
  kCorruptSnapshot,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // Without the code prefix.
  const std::string &message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mf

#endif  // MF_ERRORS_H_
