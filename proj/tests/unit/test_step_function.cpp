#include <gtest/gtest.h>

#include "optauction/error.hpp"
#include "optauction/step_function.hpp"

using namespace optauction;

TEST(StepFunction, EvaluatesHalfOpenSegments) {
  const StepFunction f({0.0, 1.0, 3.0}, {5.0, 2.0});
  EXPECT_EQ(f(0.0), 5.0);
  EXPECT_EQ(f(0.999), 5.0);
  EXPECT_EQ(f(1.0), 2.0);
  EXPECT_EQ(f(3.0), 2.0);
  EXPECT_THROW(f(3.5), DomainError);
}

TEST(StepFunction, IntegralIsExactOverlapSum) {
  const StepFunction f({8.0, 12.0, 15.0}, {500.0, 0.0});
  EXPECT_EQ(f.integral(8.0, 15.0), 2000.0);
  EXPECT_EQ(f.integral(10.0, 13.0), 1000.0);
  EXPECT_EQ(f.integral(-5.0, 100.0), 2000.0);
  EXPECT_TRUE(f.is_non_increasing());
}

TEST(StepFunction, RejectsMalformedInput) {
  EXPECT_THROW(StepFunction({0.0, 1.0}, {1.0, 2.0}), InvalidInputError);
  EXPECT_THROW(StepFunction({1.0, 0.0}, {1.0}), InvalidInputError);
}

TEST(Trace, RecoversSeveralBreaksInsideOneScanStep) {
  const auto f = [](double t) { return t < 0.101 ? 3.0 : (t < 0.1015 ? 2.0 : (t < 0.7 ? 1.0 : 0.0)); };
  TraceOptions o;
  o.scan_steps = 4;
  const auto s = trace_step_function(f, 0.0, 1.0, o);
  ASSERT_EQ(s.segments(), 4u);
  EXPECT_NEAR(s.breakpoints()[1], 0.101, 1e-9);
  EXPECT_NEAR(s.breakpoints()[2], 0.1015, 1e-9);
  EXPECT_NEAR(s.breakpoints()[3], 0.7, 1e-9);
  EXPECT_NEAR(s.integral(0.0, 1.0), 3 * 0.101 + 2 * 0.0005 + 1 * (0.7 - 0.1015), 1e-8);
}

TEST(Trace, ConstantFunctionIsOneSegment) {
  const auto s = trace_step_function([](double) { return 7.0; }, 2.0, 5.0);
  EXPECT_EQ(s.segments(), 1u);
  EXPECT_EQ(s.integral(2.0, 5.0), 21.0);
}

TEST(Trace, RiseThrowsWithBracket) {
  const auto f = [](double t) { return t < 0.5 ? 0.0 : 1.0; };
  try {
    trace_step_function(f, 0.0, 1.0);
    FAIL() << "expected MonotonicityError";
  } catch (const MonotonicityError& e) {
    EXPECT_LE(e.lower_cost(), 0.5);
    EXPECT_GE(e.upper_cost(), 0.5);
  }
  TraceOptions o;
  o.require_non_increasing = false;
  EXPECT_NEAR(trace_step_function(f, 0.0, 1.0, o).integral(0.0, 1.0), 0.5, 1e-9);
}

TEST(Trace, DegenerateDomain) {
  const auto s = trace_step_function([](double) { return 4.0; }, 1.0, 1.0);
  EXPECT_EQ(s.integral(1.0, 1.0), 0.0);
  EXPECT_EQ(s(1.0), 4.0);
}
