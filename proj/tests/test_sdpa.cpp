#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "soskit/gram.hpp"
#include "soskit/sdpa.hpp"

using namespace sos;

namespace {

// mixed orthant/PSD fixture with hand-checkable entries
ConicProblem golden_problem() {
  ConicProblem p;
  p.add_block(ConeBlock::Kind::Nonneg, 2);
  int ps = p.add_block(ConeBlock::Kind::Psd, 2);
  Eigen::Matrix2d C;
  C << 2.0, 1.0, 1.0, 3.0;
  p.c.setZero(5);
  p.c(0) = 1.5;
  p.c.segment(ps, 3) = svec(C);

  std::vector<Eigen::Triplet<double>> tr = {
      {0, 0, 1.0}, {0, ps, 1.0}, {0, ps + 2, 1.0},
      {1, 1, 4.0}, {1, ps + 1, 3.0 * std::sqrt(2.0)}};
  p.A.resize(2, 5);
  p.A.setFromTriplets(tr.begin(), tr.end());
  p.b = Eigen::Vector2d(1.0, -2.5);
  return p;
}

bool same_problem_bits(const ConicProblem& a, const ConicProblem& b) {
  if (a.cones.size() != b.cones.size()) return false;
  for (std::size_t i = 0; i < a.cones.size(); ++i) {
    if (a.cones[i].kind != b.cones[i].kind) return false;
    if (a.cones[i].dim != b.cones[i].dim) return false;
    if (a.cones[i].offset != b.cones[i].offset) return false;
  }
  if (a.b.size() != b.b.size() || a.c.size() != b.c.size()) return false;
  for (int i = 0; i < a.b.size(); ++i)
    if (a.b(i) != b.b(i)) return false;
  for (int i = 0; i < a.c.size(); ++i)
    if (a.c(i) != b.c(i)) return false;
  Eigen::MatrixXd Ad(a.A), Bd(b.A);
  if (Ad.rows() != Bd.rows() || Ad.cols() != Bd.cols()) return false;
  for (int i = 0; i < Ad.rows(); ++i)
    for (int j = 0; j < Ad.cols(); ++j)
      if (Ad(i, j) != Bd(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("export matches the documented layout line by line") {
  // header: m, #blocks, sizes (negative = diagonal), b; then "k blk i j v"
  // with matrix 0 holding -c and off-diagonal PSD entries divided by sqrt(2)
  std::string expected =
      "2\n"
      "2\n"
      "-2 2\n"
      "1 -2.5\n"
      "0 1 1 1 -1.5\n"
      "0 2 1 1 -2\n"
      "0 2 1 2 -1\n"
      "0 2 2 2 -3\n"
      "1 1 1 1 1\n"
      "1 2 1 1 1\n"
      "1 2 2 2 1\n"
      "2 1 2 2 4\n"
      "2 2 1 2 3\n";
  CHECK(to_sdpa_sparse(golden_problem()) == expected);
}

TEST_CASE("re-export of a parsed file is byte identical") {
  std::string first = to_sdpa_sparse(golden_problem());
  ConicProblem back = parse_sdpa_sparse(first);
  CHECK(to_sdpa_sparse(back) == first);
  CHECK(same_problem_bits(back, golden_problem()));
}

TEST_CASE("round trip is exact for svec-produced coordinates") {
  std::mt19937 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  auto rand_sym = [&](int n) {
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) S(i, j) = S(j, i) = N(rng);
    return S;
  };

  ConicProblem p;
  p.add_block(ConeBlock::Kind::Nonneg, 3);
  int ps = p.add_block(ConeBlock::Kind::Psd, 3);
  int cols = p.total_vlen();
  p.c.setZero(cols);
  for (int i = 0; i < 3; ++i) p.c(i) = N(rng);
  p.c.segment(ps, svec_dim(3)) = svec(rand_sym(3));

  const int m = 4;
  Eigen::MatrixXd Ad = Eigen::MatrixXd::Zero(m, cols);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < 3; ++i) Ad(k, i) = N(rng);
    Ad.row(k).segment(ps, svec_dim(3)) = svec(rand_sym(3)).transpose();
  }
  p.A = Ad.sparseView();
  p.b.resize(m);
  for (int i = 0; i < m; ++i) p.b(i) = N(rng);

  ConicProblem back = parse_sdpa_sparse(to_sdpa_sparse(p));
  CHECK(same_problem_bits(back, p));
}

TEST_CASE("compiled SOS encodings survive the round trip") {
  auto cons = {Constraint::sos_ge(parse("x1^2 - 2*d*x1 + 5"), parse("d"))};
  CompiledProgram prog =
      compile_program(cons, {"x1"}, parse("-d"), CompileOptions{});
  for (const SdpEncoding& enc : {image_form(prog), kernel_form(prog)}) {
    std::string text = to_sdpa_sparse(enc.problem);
    ConicProblem back = parse_sdpa_sparse(text);
    CHECK(same_problem_bits(back, enc.problem));
    CHECK(to_sdpa_sparse(back) == text);
  }
}

TEST_CASE("leading comment lines are accepted") {
  std::string text = "* produced by hand\n\" second comment\n" +
                     to_sdpa_sparse(golden_problem());
  CHECK(same_problem_bits(parse_sdpa_sparse(text), golden_problem()));
}

TEST_CASE("zero entries are omitted from the output") {
  ConicProblem p;
  p.add_block(ConeBlock::Kind::Nonneg, 2);
  p.c = Eigen::Vector2d(0.0, 1.0);
  p.A.resize(1, 2);
  std::vector<Eigen::Triplet<double>> tr = {{0, 1, 2.0}};
  p.A.setFromTriplets(tr.begin(), tr.end());
  p.b = Eigen::VectorXd::Constant(1, 3.0);
  CHECK(to_sdpa_sparse(p) ==
        "1\n1\n-2\n3\n"
        "0 1 2 2 -1\n"
        "1 1 2 2 2\n");
}

TEST_CASE("malformed input is rejected with a reason") {
  CHECK_THROWS_WITH_AS(parse_sdpa_sparse(""),
                       "sdpa parse: unexpected end of input",
                       std::runtime_error);
  CHECK_THROWS_AS(parse_sdpa_sparse("1\n1\n0\n1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_sdpa_sparse("x\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_sdpa_sparse("1 junk\n1\n-2\n1\n"), std::runtime_error);
  // entry indices out of range
  CHECK_THROWS_AS(parse_sdpa_sparse("1\n1\n-2\n1\n1 2 1 1 1\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_sdpa_sparse("1\n1\n-2\n1\n1 1 1 3 1\n"),
                  std::runtime_error);
  // off-diagonal entry inside a diagonal block
  CHECK_THROWS_AS(parse_sdpa_sparse("1\n1\n-2\n1\n1 1 1 2 1\n"),
                  std::runtime_error);
  // entry line with missing fields
  CHECK_THROWS_AS(parse_sdpa_sparse("1\n1\n-2\n1\n1 1 1\n"),
                  std::runtime_error);
}
