#include <doctest.h>

#include "soskit/constraint.hpp"

using namespace sos;

TEST_CASE("sos constraints normalize to one side in SOS") {
  Polynomial lhs = parse("x^2 + 1");
  Polynomial rhs = parse("2*x");

  Constraint ge = Constraint::sos_ge(lhs, rhs, "ge");
  CHECK(ge.kind() == ConstraintKind::SOS);
  CHECK(ge.rel_op() == RelOp::GE);
  CHECK(ge.one_side() == parse("x^2 - 2*x + 1"));
  CHECK(ge.label() == "ge");

  Constraint le = Constraint::sos_le(rhs, lhs);
  CHECK(le.kind() == ConstraintKind::SOS);
  CHECK(le.rel_op() == RelOp::LE);
  // sos_le keeps rhs - lhs, so both read "nonnegative side in SOS"
  CHECK(le.one_side() == ge.one_side());
  CHECK(le.label().empty());
}

TEST_CASE("equality constraints keep lhs - rhs") {
  Constraint eq = Constraint::eq(parse("d1 + d2"), parse("3"), "sum");
  CHECK(eq.kind() == ConstraintKind::EQ);
  CHECK(eq.rel_op() == RelOp::EQ);
  CHECK(eq.one_side() == parse("d1 + d2 - 3"));
}

TEST_CASE("constraint text") {
  CHECK(Constraint::sos_ge(parse("x^2"), parse("0")).str() == "x^2 >= 0");
  CHECK(Constraint::eq(parse("d"), parse("1")).str() == "d - 1 == 0");
  CHECK(rel_op_str(RelOp::GE) == ">=");
  CHECK(rel_op_str(RelOp::LE) == "<=");
  CHECK(rel_op_str(RelOp::EQ) == "==");
}
