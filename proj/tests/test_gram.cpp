#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "soskit/gram.hpp"

using namespace sos;

namespace {

MonomialSet support_of(const Polynomial& p) {
  MonomialSet s;
  for (const auto& [m, c] : p.terms()) s.insert(m);
  return s;
}

Monomial mono(const std::string& text) {
  Polynomial p = parse(text);
  REQUIRE(p.terms().size() == 1);
  return p.terms().begin()->first;
}

}  // namespace

TEST_CASE("candidate basis spans half the support degrees") {
  auto z = candidate_basis(support_of(parse("x1^4 + 1")));
  REQUIRE(z.size() == 3);
  CHECK(z[0] == Monomial());
  CHECK(z[1] == mono("x1"));
  CHECK(z[2] == mono("x1^2"));

  // two variables, degree window [1, 2]
  auto z2 = candidate_basis(support_of(parse("x1^4 + x1^2*x2^2 + x2^2")));
  CHECK(z2.size() == 5);  // x1, x2, x1^2, x1*x2, x2^2

  CHECK(candidate_basis({}).empty());
  CHECK_THROWS_AS(candidate_basis(support_of(parse("x1^3 + 1"))),
                  OddDegreeError);
}

TEST_CASE("simplify_basis removes monomials that cannot appear") {
  // x1 cannot take part in any Gram matrix of x1^4 + 1: its square x1^2 is
  // not in the support and is not a product of other retained members
  MonomialSet sup = support_of(parse("x1^4 + 1"));
  auto z = simplify_basis(candidate_basis(sup), sup);
  REQUIRE(z.size() == 2);
  CHECK(z[0] == Monomial());
  CHECK(z[1] == mono("x1^2"));

  // nothing removable here
  MonomialSet full = support_of(parse("x1^4 + x1^2 + 1"));
  CHECK(simplify_basis(candidate_basis(full), full).size() == 3);
}

TEST_CASE("matching rows cover the support and satisfy a known Gram matrix") {
  auto cons = {Constraint::sos_ge(parse("x1^4 + 1"), parse("0"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, Polynomial(), CompileOptions{});
  REQUIRE(prog.sos.size() == 1);
  const CompiledSos& cs = prog.sos[0];
  REQUIRE(cs.z.size() == 2);  // {1, x1^2}
  CHECK(cs.scale == 1.0);

  // x1^4 + 1 = z'Qz with Q = I: every row must balance.  Off-diagonal pairs
  // appear once with i < j and stand for both symmetric entries.
  Eigen::Matrix2d Q = Eigen::Matrix2d::Identity();
  for (const MatchRow& row : cs.rows) {
    double lhs = 0.0;
    for (auto [i, j] : row.pairs) lhs += (i == j ? 1.0 : 2.0) * Q(i, j);
    CHECK(row.dcoef.empty());
    CHECK(lhs == doctest::Approx(row.rhs));
  }

  // rows: 1, x1^2 (cross product, absent from the input), x1^4
  REQUIRE(cs.rows.size() == 3);
  CHECK(cs.rows[0].beta == Monomial());
  CHECK(cs.rows[0].rhs == 1.0);
  CHECK(cs.rows[1].beta == mono("x1^2"));
  CHECK(cs.rows[1].rhs == 0.0);
  CHECK(cs.rows[2].beta == mono("x1^4"));
  CHECK(cs.rows[2].rhs == 1.0);
}

TEST_CASE("decision variable coefficients enter the matching rows") {
  // one_side = x1^2 - 2 d x1 + (5 - d)
  auto cons = {Constraint::sos_ge(parse("x1^2 - 2*d*x1 + 5"), parse("d"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, parse("-d"), CompileOptions{});
  REQUIRE(prog.d == std::vector<std::string>{"d"});
  CHECK(prog.objective(0) == -1.0);
  const CompiledSos& cs = prog.sos[0];
  REQUIRE(cs.z.size() == 2);  // {1, x1}

  // constant row: Q00 - (-1) d = 5
  CHECK(cs.rows[0].beta == Monomial());
  CHECK(cs.rows[0].rhs == 5.0);
  REQUIRE(cs.rows[0].dcoef.size() == 1);
  CHECK(cs.rows[0].dcoef[0].second == -1.0);

  // x1 row: 2 Q01 - (-2) d = 0
  CHECK(cs.rows[1].beta == mono("x1"));
  REQUIRE(cs.rows[1].dcoef.size() == 1);
  CHECK(cs.rows[1].dcoef[0].second == -2.0);
}

TEST_CASE("structural infeasibility is detected at compile time") {
  // x1^3 is not a product of two basis monomials of x1^4 + x1^3
  auto odd_power = {Constraint::sos_ge(parse("x1^4 + x1^3"), parse("0"))};
  CHECK_THROWS_AS(
      compile_program(odd_power, {"x1"}, Polynomial(), CompileOptions{}),
      StructuralInfeasibleError);

  // an equality with no variables left cannot hold
  auto bad_eq = {Constraint::eq(parse("1"), parse("0"))};
  CHECK_THROWS_AS(
      compile_program(bad_eq, {}, Polynomial(), CompileOptions{}),
      StructuralInfeasibleError);
}

TEST_CASE("objective must not touch the polynomial variables") {
  auto cons = {Constraint::sos_ge(parse("x1^2 + d"), parse("0"))};
  CHECK_THROWS_AS(
      compile_program(cons, {"x1"}, parse("d*x1"), CompileOptions{}),
      ObjectiveDependsOnXError);
}

TEST_CASE("scaling divides one_side before matching") {
  auto cons = {Constraint::sos_ge(parse("100*x1^4 + 400"), parse("0"))};
  CompileOptions opts;
  opts.scaling = true;
  CompiledProgram prog = compile_program(cons, {"x1"}, Polynomial(), opts);
  const CompiledSos& cs = prog.sos[0];
  CHECK(cs.scale > 1.0);
  for (const MatchRow& row : cs.rows)
    CHECK(std::abs(row.rhs) <= 400.0 / cs.scale + 1e-12);
  CHECK(cs.rows[0].rhs * cs.scale == doctest::Approx(400.0));
}

TEST_CASE("fixed bases bypass candidate generation") {
  std::vector<std::vector<Monomial>> bases = {
      {Monomial(), mono("x1"), mono("x1^2")}};
  CompileOptions opts;
  opts.fixed_bases = &bases;
  auto cons = {Constraint::sos_ge(parse("x1^4 + 1"), parse("0"))};
  CompiledProgram prog = compile_program(cons, {"x1"}, Polynomial(), opts);
  CHECK(prog.sos[0].z == bases[0]);  // x1 kept even though removable
}

TEST_CASE("kernel form parameterizes every Gram matrix of the polynomial") {
  // with z = {1, x1, x1^2} the x1^2 coefficient can sit on the diagonal or
  // the (0,2) entry, so the kernel has exactly one basis matrix
  auto cons = {Constraint::sos_ge(parse("x1^4 + x1^2 + 1"), parse("0"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, Polynomial(), CompileOptions{});
  SdpEncoding enc = kernel_form(prog);
  CHECK(enc.form == FormKind::Kernel);
  CHECK(enc.num_d == 0);
  REQUIRE(enc.num_lambda == 1);
  REQUIRE(enc.N.size() == 1);

  const auto& z = prog.sos[0].z;
  // z' N z vanishes identically
  CHECK(gram_polynomial(z, enc.N[0][0]).coeff_inf_norm() <= 1e-14);
  CHECK(enc.N[0][0].norm() > 0.0);

  // Q0 alone reproduces the polynomial, and stays on it along the kernel
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  Polynomial target = parse("x1^4 + x1^2 + 1");
  for (int trial = 0; trial < 5; ++trial) {
    double lam = U(rng);
    Eigen::MatrixXd Q = enc.Q0[0] + lam * enc.N[0][0];
    Polynomial diff = gram_polynomial(z, Q) - target;
    CHECK(diff.coeff_inf_norm() <= 1e-12);
  }
}

TEST_CASE("kernel form tracks decision variables through the basis matrices") {
  auto cons = {Constraint::sos_ge(parse("x1^2 - 2*d*x1 + 5"), parse("d"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, parse("-d"), CompileOptions{});
  SdpEncoding enc = kernel_form(prog);
  CHECK(enc.num_d == 1);
  CHECK(enc.num_lambda == 0);

  // Q(d) = Q0 + d D reproduces one_side at any d
  const auto& z = prog.sos[0].z;
  for (double d : {-1.0, 0.0, 2.5}) {
    Eigen::MatrixXd Q = enc.Q0[0] + d * enc.D[0][0];
    Polynomial expect =
        parse("x1^2 + 5") + d * parse("-2*x1 - 1");
    CHECK((gram_polynomial(z, Q) - expect).coeff_inf_norm() <= 1e-12);
  }
}

TEST_CASE("lambda count equals the matching freedom") {
  // each row with k Gram pairs leaves k - 1 degrees of freedom
  auto cons = {Constraint::sos_ge(
      parse("x1^4 + x1^2*x2^2 + x2^4 + x1^2 + x2^2 + 1"), parse("0"))};
  CompiledProgram prog =
      compile_program(cons, {"x1", "x2"}, Polynomial(), CompileOptions{});
  SdpEncoding enc = kernel_form(prog);
  int freedom = 0;
  for (const MatchRow& row : prog.sos[0].rows)
    freedom += std::max<int>(0, static_cast<int>(row.pairs.size()) - 1);
  CHECK(enc.num_lambda == freedom);
  CHECK(enc.num_lambda > 0);
}

TEST_CASE("image form encodes the matching rows as Ax = b") {
  auto cons = {Constraint::sos_ge(parse("x1^4 + 1"), parse("0"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, Polynomial(), CompileOptions{});
  SdpEncoding enc = image_form(prog);
  CHECK(enc.form == FormKind::Image);
  REQUIRE(enc.block_dim.size() == 1);
  CHECK(enc.block_dim[0] == 2);

  // the known certificate Q = I must satisfy the constraint rows exactly
  Eigen::VectorXd x = Eigen::VectorXd::Zero(enc.problem.num_cols());
  x.segment(enc.block_col0[0], svec_dim(2)) = svec(Eigen::Matrix2d::Identity());
  CHECK((enc.problem.A * x - enc.problem.b).norm() <= 1e-14);
}

TEST_CASE("image and kernel certificates agree entrywise") {
  // unique optimum with a fully determined Gram matrix:
  // Q = [[5 - d, -d], [-d, 1]] loses rank at d = (sqrt(21) - 1) / 2
  auto cons = {Constraint::sos_ge(parse("x1^2 - 2*d*x1 + 5"), parse("d"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, parse("-d"), CompileOptions{});
  double dstar = (std::sqrt(21.0) - 1.0) / 2.0;

  Certificate cert[2];
  for (FormKind form : {FormKind::Image, FormKind::Kernel}) {
    SdpEncoding enc = form == FormKind::Image ? image_form(prog)
                                              : kernel_form(prog);
    ConicSolution sol = solve_conic(enc.problem);
    REQUIRE(sol.status == SolveStatus::Optimal);
    cert[form == FormKind::Kernel] = extract_certificate(prog, enc, sol);
  }
  for (const Certificate& c : cert) {
    REQUIRE(c.d.size() == 1);
    CHECK(c.d[0] == doctest::Approx(dstar).epsilon(1e-7));
  }
  CHECK(std::abs(cert[0].d[0] - cert[1].d[0]) <= 1e-6);
  REQUIRE(cert[0].Q.size() == 1);
  REQUIRE(cert[1].Q.size() == 1);
  CHECK((cert[0].Q[0] - cert[1].Q[0]).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("gram_polynomial and sos_factors") {
  std::vector<Monomial> z = {Monomial(), mono("x1")};
  Eigen::Matrix2d Q;
  Q << 2.0, 1.0, 1.0, 3.0;
  Polynomial p = gram_polynomial(z, Q);
  CHECK(p == parse("2 + 2*x1 + 3*x1^2"));

  auto fs = sos_factors(z, Q);
  REQUIRE(fs.size() == 2);
  Polynomial sum;
  for (const Polynomial& f : fs) sum += f * f;
  CHECK((sum - p).coeff_inf_norm() <= 1e-12);

  // negative eigenvalues are clipped
  Eigen::Matrix2d neg = -Eigen::Matrix2d::Identity();
  CHECK(sos_factors(z, neg).empty());
}

TEST_CASE("x_support unions the affine decomposition") {
  AffineDecomposition dec =
      affine_split(parse("x1^2 + d*x1^4"), {"x1"});
  MonomialSet sup = x_support(dec);
  CHECK(sup.count(mono("x1^2")) == 1);
  CHECK(sup.count(mono("x1^4")) == 1);
  CHECK(sup.size() == 2);
}
