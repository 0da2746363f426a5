#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "homog/expression.hpp"

using namespace homog;
using namespace homog::dsl;

TEST(Parse, ShearWallExpression) {
  const auto e = parse("F1^2/(F1 - 2*a*F2)");
  const auto& root = e.root();
  ASSERT_EQ(root.kind, Node::Kind::Binary);
  EXPECT_EQ(root.op, BinOp::Div);
  EXPECT_EQ(root.args[0]->op, BinOp::Pow);
  EXPECT_EQ(root.args[1]->op, BinOp::Sub);
  EXPECT_DOUBLE_EQ(evaluate(e, {{"F1", 10}, {"F2", 2}, {"a", 0.5}}), 12.5);
}

TEST(Parse, SingleVariable) {
  const auto e = parse("x");
  EXPECT_EQ(e.root().kind, Node::Kind::Variable);
  EXPECT_EQ(e.root().name, "x");
  EXPECT_EQ(evaluate(e, {{"x", 7}}), 7.0);
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  try {
    parse("1 + * 2");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 5);
    EXPECT_EQ(e.token(), "*");
    EXPECT_EQ(e.code(), ErrorCode::Syntax);
  }
}

TEST(Parse, SyntaxErrorOnLaterLine) {
  try {
    parse("x +\n  y )");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(Parse, Malformed) {
  for (const char* s : {"", "(", "x +", "2 3", "foo(x)", "sin(x, y)", "min(x)", "1e", "x $ y", "sqrt()"})
    EXPECT_THROW(parse(s), SyntaxError) << s;
}

TEST(Parse, UnknownFunctionIsNamed) {
  try {
    parse("log10(x)");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("log10"), std::string::npos);
  }
}

TEST(Parse, Precedence) {
  const Bindings b{{"x", 3}, {"y", 2}};
  EXPECT_EQ(evaluate(parse("-x^2"), b), -9.0);
  EXPECT_EQ(evaluate(parse("2^3^2"), b), 512.0);
  EXPECT_EQ(evaluate(parse("1 + 2*3 - 4/2"), b), 5.0);
  EXPECT_EQ(evaluate(parse("x - y - 1"), b), 0.0);
  EXPECT_EQ(evaluate(parse("x / y / 3"), b), 0.5);
  EXPECT_EQ(evaluate(parse("(-x)^2"), b), 9.0);
  EXPECT_EQ(evaluate(parse("2^-1"), b), 0.5);
  EXPECT_EQ(evaluate(parse("-2^2"), b), -4.0);
  EXPECT_EQ(evaluate(parse("x*-y"), b), -6.0);
}

TEST(Parse, NumbersAndIdentifiers) {
  EXPECT_EQ(evaluate(parse("1.5e2 + .5 + 2."), {}), 152.5);
  EXPECT_EQ(evaluate(parse("_a1 * B_2"), {{"_a1", 2}, {"B_2", 3}}), 6.0);
  EXPECT_EQ(free_variables(parse("A + a")).size(), 2u);
}

TEST(Evaluate, Functions) {
  const Bindings b{{"x", 0.5}};
  EXPECT_DOUBLE_EQ(evaluate(parse("sin(x)^2 + cos(x)^2"), b), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("tan(x)"), b), std::tan(0.5));
  EXPECT_DOUBLE_EQ(evaluate(parse("cosh(x)^2 - sinh(x)^2"), b), std::pow(std::cosh(0.5), 2) - std::pow(std::sinh(0.5), 2));
  EXPECT_DOUBLE_EQ(evaluate(parse("tanh(x)"), b), std::tanh(0.5));
  EXPECT_DOUBLE_EQ(evaluate(parse("ln(exp(x))"), b), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(parse("sqrt(x*x)"), b), 0.5);
  EXPECT_EQ(evaluate(parse("abs(-x)"), b), 0.5);
  EXPECT_EQ(evaluate(parse("min(3, x, 1)"), b), 0.5);
  EXPECT_EQ(evaluate(parse("max(3, x, 7, 1)"), b), 7.0);
  EXPECT_EQ(evaluate(parse("(-2)^3"), b), -8.0);
}

TEST(Evaluate, DomainErrorsCarrySubexpression) {
  try {
    evaluate(parse("1 + ln(x)"), {{"x", 0}});
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.subexpression(), "ln(x)");
    EXPECT_EQ(e.code(), ErrorCode::Evaluation);
  }
  EXPECT_THROW(evaluate(parse("1/(x-1)"), {{"x", 1}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("sqrt(x)"), {{"x", -1}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("x^0.5"), {{"x", -1}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("x^-1"), {{"x", 0}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("exp(x)"), {{"x", 1000}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("x"), {{"x", std::nan("")}}), EvaluationError);
}

TEST(Evaluate, UnboundVariableIsNamed) {
  try {
    evaluate(parse("x + y"), {{"x", 1}});
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("'y'"), std::string::npos);
  }
}

TEST(FreeVariables, Examples) {
  EXPECT_EQ(free_variables(parse("F1^2/(F1-2*a*F2)")), (std::set<std::string>{"F1", "F2", "a"}));
  EXPECT_TRUE(free_variables(parse("3.0")).empty());
  EXPECT_EQ(free_variables(parse("min(x, y) + x")), (std::set<std::string>{"x", "y"}));
}

TEST(Print, ParsePrintParseFixpoint) {
  const char* sources[] = {"F1^2/(F1 - 2*a*F2)", "-x^2", "(-x)^2", "2^3^2", "(2^3)^2", "a-(b-c)", "a-b-c",
                           "a/(b*c)", "a/b*c", "-(a+b)*c", "min(a, b+1, -c)", "sin(x)^cos(y)", "1e-7*x",
                           "x^-y", "--x", "0.1+0.2", "1.5707963267948966*sqrt(P)", "P/cos(1.5707963267948966*sqrt(P))"};
  for (const char* s : sources) {
    const auto e = parse(s);
    const auto printed = e.to_string();
    const auto again = parse(printed);
    EXPECT_TRUE(structurally_equal(e, again)) << s << " -> " << printed;
    EXPECT_EQ(again.to_string(), printed);
  }
}

TEST(Print, RandomTreesRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> num(0.0, 100.0);
  std::function<NodePtr(int)> gen = [&](int depth) -> NodePtr {
    const int c = depth <= 0 ? pick(rng) % 2 : pick(rng);
    switch (c) {
      case 0: return Node::make_number(num(rng));
      case 1: return Node::make_variable("v" + std::to_string(pick(rng)));
      case 2: return Node::make_negate(gen(depth - 1));
      case 3: return Node::make_call(Func::Sin, {gen(depth - 1)});
      case 4: return Node::make_call(Func::Max, {gen(depth - 1), gen(depth - 1), gen(depth - 1)});
      case 5: return Node::make_binary(BinOp::Add, gen(depth - 1), gen(depth - 1));
      case 6: return Node::make_binary(BinOp::Sub, gen(depth - 1), gen(depth - 1));
      case 7: return Node::make_binary(BinOp::Mul, gen(depth - 1), gen(depth - 1));
      case 8: return Node::make_binary(BinOp::Div, gen(depth - 1), gen(depth - 1));
      default: return Node::make_binary(BinOp::Pow, gen(depth - 1), gen(depth - 1));
    }
  };
  for (int i = 0; i < 500; ++i) {
    const Expr e(gen(5));
    const auto again = parse(e.to_string());
    EXPECT_TRUE(structurally_equal(e, again)) << e.to_string();
  }
}

TEST(Compiled, OrderAndDeterminism) {
  const auto e = parse("a - 2*b");
  const std::vector<std::string> order{"b", "a"};
  CompiledExpr c(e, order);
  const double x[] = {1.0, 5.0};
  EXPECT_EQ(c(x), 3.0);
  EXPECT_EQ(c(x), c(x));
  const std::vector<std::string> missing{"a"};
  EXPECT_THROW(CompiledExpr(e, missing), EvaluationError);
}
