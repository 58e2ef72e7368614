#include <gtest/gtest.h>

#include "oracles/naive_search.hpp"
#include "fwdlogic/parser.hpp"

using namespace fwdlogic;

// sanity of the brute-force oracle itself on hand-checked contexts
TEST(NaiveOracle, HandCases) {
  auto yes = [](const char* c) { return naive::derivable(parse_context(c).annotated()); };
  EXPECT_TRUE(yes("{ x : ~a, y : a }"));
  EXPECT_FALSE(yes("{ x : a, y : a }"));
  EXPECT_TRUE(yes("{ x : bot[z], y : bot[z], z : 1[x,y] }"));
  EXPECT_FALSE(yes("{ x : bot[z], y : bot[z], z : 1[x] }"));
  EXPECT_FALSE(yes("{ x : bot[y], y : bot[x] }"));
  EXPECT_TRUE(yes("{ x : (~name @ ((~cost * bot[y])[y]))[y], y : (cost @ ((name * 1[x])[x]))[x] }"));
  // y waits for x's message before sending its own, x does the same: still fine, the forwarder buffers
  EXPECT_TRUE(yes("{ x : (~a * (b @ 1[y])[y])[y], y : (a @ (~b * bot[x])[x])[x] }"));
  // both wait to receive first: deadlock
  EXPECT_FALSE(yes("{ x : (~a * (b @ 1[y])[y])[y], y : (~b * (a @ bot[x])[x])[x] }"));
  EXPECT_TRUE(yes("{ x : (bot[y] & bot[y])[y], y : (1[x] + 1[x])[x] }"));
  EXPECT_TRUE(naive::derivable(Context::make({{"x", EndpointState::active(AnnType::one({}))}})));
}
