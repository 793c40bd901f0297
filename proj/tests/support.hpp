#pragma once

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace l2t {

// Compares against tests/golden/<name>.json. LOG2PLAN_UPDATE_GOLDEN=1 rewrites it instead.
inline void expect_golden(const std::string& name, const nlohmann::json& actual) {
  const fs::path path = test_data("golden/" + name + ".json");
  if (std::getenv("LOG2PLAN_UPDATE_GOLDEN")) {
    std::ofstream(path) << actual.dump(2) << "\n";
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << "missing golden " << path << "; run with LOG2PLAN_UPDATE_GOLDEN=1";
  EXPECT_EQ(read_json(path), actual) << "golden " << name << " differs; actual:\n" << actual.dump(2);
}

}  // namespace l2t
