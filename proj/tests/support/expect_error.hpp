#pragma once

#include <gtest/gtest.h>

#include "concordia/error.hpp"

#define EXPECT_ERROR_CODE(stmt, expected_code)                                    \
  do {                                                                            \
    try {                                                                         \
      stmt;                                                                       \
      ADD_FAILURE() << #stmt " did not throw";                                    \
    } catch (const ::concordia::Error& e_) {                                      \
      EXPECT_EQ(e_.code(), (expected_code)) << e_.what();                         \
    }                                                                             \
  } while (0)
