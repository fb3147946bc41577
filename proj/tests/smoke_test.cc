#include <gtest/gtest.h>

#include "tworo/instance_io.h"

TEST(Smoke, LoadsToy) { EXPECT_EQ(tworo::LoadBundle("t1").kind(), tworo::ProblemKind::kExplicit); }
