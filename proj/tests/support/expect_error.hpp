#pragma once

#include <gtest/gtest.h>

#include "aiora/error.hpp"

// Asserts that `stmt` throws aiora::Error carrying `expected_code`.
#define EXPECT_AIORA_ERROR(stmt, expected_code)                                        \
  do {                                                                                 \
    try {                                                                              \
      stmt;                                                                            \
      ADD_FAILURE() << "expected " << ::aiora::to_string(expected_code) << " from " #stmt; \
    } catch (const ::aiora::Error& e_) {                                               \
      EXPECT_EQ(e_.code(), expected_code) << e_.what();                                \
    }                                                                                  \
  } while (0)
