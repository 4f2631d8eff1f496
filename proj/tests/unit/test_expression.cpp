#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "accretia/expression.hpp"
#include "support.hpp"

using namespace accretia;

namespace {

double eval0(std::string_view src) { return Expression(src, {}).evaluate({}); }

std::size_t error_column(std::string_view src, std::vector<std::string> vars = {"t"}) {
  try {
    (void)Expression(src, std::move(vars));
  } catch (const ExpressionError& e) {
    return e.column();
  }
  ADD_FAILURE() << "no error for '" << src << "'";
  return 0;
}

}  // namespace

TEST(Expression, Precedence) {
  EXPECT_EQ(eval0("1 + 2 * 3"), 7.0);
  EXPECT_EQ(eval0("(1 + 2) * 3"), 9.0);
  EXPECT_EQ(eval0("8 / 4 / 2"), 1.0);
  EXPECT_EQ(eval0("10 - 4 - 3"), 3.0);
  EXPECT_EQ(eval0("2 * 3 ^ 2"), 18.0);
}

TEST(Expression, PowerIsRightAssociative) {
  EXPECT_EQ(eval0("2^3^2"), 512.0);
  EXPECT_EQ(eval0("2^-10"), 0x1p-10);
  EXPECT_EQ(eval0("-2^2"), -4.0);
  EXPECT_EQ(eval0("(-2)^2"), 4.0);
  EXPECT_EQ(eval0("--3"), 3.0);
}

TEST(Expression, FunctionsAndConstants) {
  EXPECT_DOUBLE_EQ(eval0("exp(1)"), std::numbers::e);
  EXPECT_DOUBLE_EQ(eval0("log(e)"), 1.0);
  EXPECT_DOUBLE_EQ(eval0("pi"), std::numbers::pi);
  EXPECT_EQ(eval0("ceil(2.1)"), 3.0);
  EXPECT_EQ(eval0("ceil(1/(2/6))"), 3.0);
  EXPECT_EQ(eval0("min(3, 1, 2)"), 1.0);
  EXPECT_EQ(eval0("max(3, 1, 2)"), 3.0);
  EXPECT_EQ(eval0("1.5e2"), 150.0);
}

TEST(Expression, Variables) {
  const Expression theta("K * t^2 / (1 + t)", {"K", "t"});
  EXPECT_EQ(theta.arity(), 2u);
  EXPECT_DOUBLE_EQ(theta(2.0, 1.0), 1.0);
  const Expression h("1/(n+1)^2", {"n"});
  EXPECT_DOUBLE_EQ(h(3.0), 1.0 / 16.0);
  EXPECT_EQ(h.source(), "1/(n+1)^2");
  const auto f = unary_function(Expression("t/1.5", {"t"}));
  EXPECT_DOUBLE_EQ(f(3.0), 2.0);
  EXPECT_THROW((void)theta(1.0), std::invalid_argument);
}

TEST(Expression, MatchesNativeEvaluationOnSamples) {
  gen::Rng rng(601);
  const Expression ex("max(t^1.5, 0.5*t) + exp(-t) * log(1 + t) - ceil(t) / 7", {"t"});
  for (int i = 0; i < 1000; ++i) {
    const double t = gen::uniform(rng, 0.0, 20.0);
    const double native = std::max(std::pow(t, 1.5), 0.5 * t) + std::exp(-t) * std::log(1 + t) -
                          std::ceil(t) / 7;
    ASSERT_NEAR(ex(t), native, 1e-12 * (1.0 + std::abs(native)));
  }
}

TEST(Expression, ErrorsCarryColumns) {
  EXPECT_EQ(error_column("t^2 + sin(t)"), 6u);
  EXPECT_EQ(error_column("t + u"), 4u);
  EXPECT_EQ(error_column("(t + 1"), 6u);
  EXPECT_EQ(error_column("t $ 2"), 2u);
  EXPECT_EQ(error_column("min(t)"), 0u);
  EXPECT_EQ(error_column("exp(t, t)"), 0u);
  EXPECT_EQ(error_column("t 2"), 2u);
  EXPECT_EQ(error_column(""), 0u);
  try {
    (void)Expression("t + ?", {"t"});
  } catch (const ExpressionError& e) {
    EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
  }
}
