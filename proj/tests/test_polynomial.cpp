#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "soskit/polynomial.hpp"

using namespace sos;

namespace {

Monomial mono(const std::string& text) {
  // build a monomial from an expression like "x1^2*x2"
  Polynomial p = parse(text);
  REQUIRE(p.terms().size() == 1);
  REQUIRE(p.terms().begin()->second == 1.0);
  return p.terms().begin()->first;
}

}  // namespace

TEST_CASE("variable names") {
  CHECK(is_valid_var_name("x1"));
  CHECK(is_valid_var_name("_tmp"));
  CHECK(is_valid_var_name("Ab_9"));
  CHECK(!is_valid_var_name(""));
  CHECK(!is_valid_var_name("1x"));
  CHECK(!is_valid_var_name("a-b"));
  CHECK(!is_valid_var_name("a b"));
}

TEST_CASE("monomial basics") {
  Monomial one;
  CHECK(one.is_one());
  CHECK(one.degree() == 0);
  CHECK(one.exponent("x") == 0);

  Monomial x2 = Monomial::var("x", 2);
  CHECK(x2.degree() == 2);
  CHECK(x2.exponent("x") == 2);
  CHECK(x2.exponent("y") == 0);

  // zero exponents are not stored, so x^0 compares equal to 1
  CHECK(Monomial::var("x", 0) == one);

  Monomial xy = Monomial::var("x") * Monomial::var("y");
  CHECK(xy.degree() == 2);
  CHECK((xy * xy).exponent("x") == 2);
  CHECK(xy.pow(3).degree() == 6);
  CHECK(xy.pow(0) == one);
  CHECK(xy.str() == "x*y");
  CHECK(x2.str() == "x^2");
  CHECK(one.str() == "1");
}

TEST_CASE("monomial degree_in and split") {
  Monomial m = mono("x1^2*x2*d1^3");
  std::set<std::string> xs{"x1", "x2"};
  CHECK(m.degree_in(xs) == 3);
  CHECK(m.degree_in({"d1"}) == 3);
  CHECK(m.degree_in({"z"}) == 0);

  auto [inside, outside] = m.split(xs);
  CHECK(inside == mono("x1^2*x2"));
  CHECK(outside == mono("d1^3"));

  std::set<std::string> vars;
  m.collect_variables(vars);
  CHECK(vars == std::set<std::string>{"d1", "x1", "x2"});
}

TEST_CASE("monomial evaluate") {
  Monomial m = mono("x^2*y");
  std::map<std::string, double> pt{{"x", 3.0}, {"y", -2.0}};
  CHECK(m.evaluate(pt) == -18.0);
}

TEST_CASE("monomial orders") {
  // lex: first differing variable in ascending name order decides
  CHECK(Monomial::lex_less(mono("x1"), mono("x1^2")));
  CHECK(Monomial::lex_less(mono("x2^5"), mono("x1")));
  CHECK(!Monomial::lex_less(mono("x1"), mono("x2^5")));
  CHECK(!Monomial::lex_less(mono("x1"), mono("x1")));

  // grlex: total degree first, then lex
  CHECK(Monomial::grlex_less(mono("x1^2"), mono("x1*x2^2")));
  CHECK(Monomial::grlex_less(mono("x2^2"), mono("x1*x2")));
  CHECK(!Monomial::grlex_less(mono("x1*x2"), mono("x2^2")));
  CHECK(Monomial::grlex_less(Monomial(), mono("x1")));
}

TEST_CASE("polynomial arithmetic keeps a canonical term map") {
  Polynomial p = parse("x^2 + 2*x*y + y^2");
  Polynomial q = parse("(x + y)^2");
  CHECK(p == q);

  // cancellation removes the term entirely
  Polynomial z = parse("x^2 - x^2");
  CHECK(z.is_zero());
  CHECK(z.terms().empty());
  CHECK(z.degree() == 0);
  CHECK((p - p).is_zero());

  Polynomial c = parse("x + 1") * parse("x - 1");
  CHECK(c == parse("x^2 - 1"));
  CHECK(c.coeff(mono("x")) == 0.0);
  CHECK(c.coeff(mono("x^2")) == 1.0);
  CHECK(c.coeff(Monomial()) == -1.0);

  CHECK((-c) == parse("1 - x^2"));
  CHECK(parse("x").pow(0) == Polynomial(1.0));
  CHECK(parse("x + 1").pow(3) == parse("x^3 + 3*x^2 + 3*x + 1"));

  CHECK(2.0 * parse("x") == parse("2*x"));
  CHECK(parse("x") * 0.0 == Polynomial());
}

TEST_CASE("polynomial degree, variables, norms") {
  Polynomial p = parse("3*x1^4*x2 - x2 + 7");
  CHECK(p.degree() == 5);
  CHECK(p.variables() == std::set<std::string>{"x1", "x2"});
  CHECK(p.coeff_inf_norm() == 7.0);
  CHECK(p.coeff_two_norm() == doctest::Approx(std::sqrt(9.0 + 1.0 + 49.0)));
  CHECK(Polynomial().degree() == 0);
  CHECK(Polynomial(4.0).degree() == 0);
}

TEST_CASE("polynomial substitute and evaluate") {
  Polynomial p = parse("x^2 + y");
  std::map<std::string, Polynomial> subs{{"x", parse("y + 1")}};
  CHECK(p.substitute(subs) == parse("y^2 + 3*y + 1"));

  // variables not mentioned stay as themselves
  std::map<std::string, Polynomial> only_y{{"y", Polynomial(2.0)}};
  CHECK(p.substitute(only_y) == parse("x^2 + 2"));

  std::map<std::string, double> pt{{"x", 2.0}, {"y", -1.0}};
  CHECK(p.evaluate(pt) == 3.0);
}

TEST_CASE("parser grammar") {
  CHECK(parse("1 + 2*3") == Polynomial(7.0));
  CHECK(parse("-x + x") == Polynomial());
  CHECK(parse("2^3") == Polynomial(8.0));
  CHECK(parse("(1 + x)*(1 - x)") == parse("1 - x^2"));
  CHECK(parse("x^2*y^3").degree() == 5);
  CHECK(parse(" 0.5 * x ") == 0.5 * parse("x"));
  CHECK(parse("2e3") == Polynomial(2000.0));
  CHECK(parse("-(x + 1)^2") == parse("-x^2 - 2*x - 1"));

  // subtraction binds left to right
  CHECK(parse("1 - x - x") == parse("1 - 2*x"));
}

TEST_CASE("parser errors carry the byte offset") {
  auto pos = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.position;
    }
    return std::size_t(-1);
  };
  CHECK(pos("x + ") == 4);       // unexpected end of input
  CHECK(pos("x ^ y") == 4);      // exponent must be an integer
  CHECK(pos("x^-2") == 2);       // negative exponent rejected
  CHECK(pos("(x + 1") == 6);     // missing ')'
  CHECK(pos("x ? y") == 2);      // stray operator
  CHECK(pos("x y") == 2);        // no implicit multiplication
}

TEST_CASE("str round-trips through parse") {
  for (const char* text :
       {"0", "1", "-1.25", "x", "x^2 - 2*x*y + 0.5", "3*a*b^2 - c + 4",
        "x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1"}) {
    Polynomial p = parse(text);
    CHECK(parse(p.str()) == p);
  }
}

TEST_CASE("format_double uses shortest digits that reparse exactly") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.1) == "0.1");
  for (double v : {1.0 / 3.0, 1e-17, 12345.678901234567, -0.0625}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("monomials enumerates by degree then descending lex") {
  auto ms = monomials({"x1", "x2"}, {0, 1, 2});
  REQUIRE(ms.size() == 6);
  CHECK(ms[0] == Monomial());
  CHECK(ms[1] == mono("x1"));
  CHECK(ms[2] == mono("x2"));
  CHECK(ms[3] == mono("x1^2"));
  CHECK(ms[4] == mono("x1*x2"));
  CHECK(ms[5] == mono("x2^2"));

  CHECK(monomials({"x"}, {3}).size() == 1);
  CHECK(monomials({}, {0}).size() == 1);  // just the constant
  CHECK(monomials({}, {1}).empty());
}

TEST_CASE("gradient") {
  Polynomial p = parse("x^3*y + 2*y - 5");
  auto g = gradient(p, {"x", "y"});
  REQUIRE(g.size() == 2);
  CHECK(g[0] == parse("3*x^2*y"));
  CHECK(g[1] == parse("x^3 + 2"));
}

TEST_CASE("var_matrix") {
  PolyMatrix m = var_matrix("Q", 2, 3);
  CHECK(m.rows == 2);
  CHECK(m.cols == 3);
  CHECK(m.at(0, 0) == parse("Q_1_1"));
  CHECK(m.at(1, 2) == parse("Q_2_3"));

  PolyMatrix s = var_matrix("S", 2, 2, true);
  CHECK(s.at(0, 1) == s.at(1, 0));
  CHECK(s.at(0, 1) == parse("S_1_2"));
}

TEST_CASE("poly_decision_var") {
  auto basis = monomials({"x"}, {0, 1});
  PolyDecVar pd = poly_decision_var("c", basis);
  REQUIRE(pd.names.size() == 2);
  CHECK(pd.poly == parse("c_1 + c_2*x"));
}

TEST_CASE("sos_decision_var doubles the off-diagonal products") {
  auto z = monomials({"x"}, {0, 1});
  SosDecVar sd = sos_decision_var("D", z);
  CHECK(sd.poly == parse("D_1_1 + 2*D_1_2*x + D_2_2*x^2"));
  CHECK(sd.names[0][1] == sd.names[1][0]);
}

TEST_CASE("affine_split") {
  std::set<std::string> xs{"x1", "x2"};
  Polynomial p = parse("x1^2 + (3*x1 - 1)*d2 + 2*d1 - 7");
  AffineDecomposition dec = affine_split(p, xs);
  CHECK(dec.base == parse("x1^2 - 7"));
  REQUIRE(dec.coeffs.size() == 2);
  CHECK(dec.coeffs[0].first == "d1");   // sorted by name
  CHECK(dec.coeffs[0].second == Polynomial(2.0));
  CHECK(dec.coeffs[1].first == "d2");
  CHECK(dec.coeffs[1].second == parse("3*x1 - 1"));

  // no decision variables at all
  CHECK(affine_split(parse("x1^2"), xs).coeffs.empty());

  CHECK_THROWS_AS(affine_split(parse("d1*d2 + x1"), xs), NotAffineError);
  CHECK_THROWS_AS(affine_split(parse("d1^2"), xs), NotAffineError);
}
