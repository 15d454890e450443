#ifndef MF_TESTS_SUPPORT_H_
#define MF_TESTS_SUPPORT_H_

#include <gtest/gtest.h>

#include "gen.h"
#include "mf/errors.h"

namespace mf::testing {

#define EXPECT_MF_ERROR(statement, error_code)                          \
  do {                                                                  \
    try {                                                               \
      statement;                                                        \
      ADD_FAILURE() << "expected " << ::mf::ErrorCodeName(error_code);  \
    } catch (const ::mf::Error &e) {                                    \
      EXPECT_EQ(e.code(), error_code) << e.what();                      \
    }                                                                   \
  } while (0)

}  // namespace mf::testing

#endif  // MF_TESTS_SUPPORT_H_
