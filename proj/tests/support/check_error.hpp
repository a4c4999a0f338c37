#ifndef GSGC_TEST_CHECK_ERROR_HPP
#define GSGC_TEST_CHECK_ERROR_HPP

// include after doctest.h

#include "gsgc/error.hpp"

#define CHECK_FAILS(expr, expected_code)                          \
  do {                                                            \
    try {                                                         \
      (void)(expr);                                               \
      FAIL_CHECK("expected CodecError from " #expr);              \
    } catch (const gsgc::CodecError& e_) {                        \
      CHECK_MESSAGE(e_.code() == (expected_code), e_.what());     \
    }                                                             \
  } while (0)

#endif
