#include "mf/errors.h"

#include <array>

namespace mf {

std::string_view ErrorCodeName(ErrorCode code) {
  static constexpr std::array<std::string_view, 22> kNames = {
      "DuplicateId",        "InvalidThing",         "UnknownEntity",
      "CycleRejected",      "MalformedEvent",       "MissingField",
      "InvariantViolation", "OutOfOrder",           "StaleDictionary",
      "OutOfRange",         "InvalidStrategy",      "EmptyFeedback",
      "ContextImmutable",   "IncompleteAssignment", "SameContext",
      "IllegalTransition",  "EmptyQuery",           "InvalidProfile",
      "InvalidConfig",      "VersionMismatch",      "CorruptSnapshot",
      "IoError"};
  return kNames[static_cast<std::size_t>(code)];
}

}  // namespace mf
