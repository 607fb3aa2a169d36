#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "soskit/conic.hpp"
#include "soskit/constraint.hpp"
#include "soskit/polynomial.hpp"

namespace sos {

struct StructuralInfeasibleError : std::runtime_error {
  explicit StructuralInfeasibleError(const std::string& msg)
      : std::runtime_error(msg) {}
};

struct ObjectiveDependsOnXError : std::invalid_argument {
  explicit ObjectiveDependsOnXError(const std::string& msg)
      : std::invalid_argument(msg) {}
};

using MonomialSet = std::set<Monomial, MonomialGrlexLess>;

// Union of the x-monomials of one_side across its affine decomposition in
// the decision variables (the base part and every coefficient polynomial).
MonomialSet x_support(const AffineDecomposition& dec);

// Monomials in the variables of the support with total degree between
// ceil(dmin/2) and floor(dmax/2). Throws OddDegreeError when the maximum
// support degree is odd; returns {} for empty support (vacuous constraint).
std::vector<Monomial> candidate_basis(const MonomialSet& support);

// Iteratively remove basis monomials that cannot take part in any Gram
// representation of a polynomial with the given support: z_i is retained iff
// its square is consistent (2a_i in the support or reachable as a_j + a_k
// over retained j != k) and some product z_i z_j with retained j (or its own
// square) lands in the support. Greatest fixpoint; order independent.
std::vector<Monomial> simplify_basis(const std::vector<Monomial>& z,
                                     const MonomialSet& support);

// One coefficient-matching row: sum over Gram pairs of z_i z_j terms minus
// the decision-variable part equals the base coefficient at beta.
struct MatchRow {
  Monomial beta;
  std::vector<std::pair<int, int>> pairs;      // i <= j into z, sorted
  double rhs = 0.0;                            // base coefficient at beta
  std::vector<std::pair<int, double>> dcoef;   // (d index, coeff of p_i at beta)
};

struct CompiledSos {
  int constraint_index = -1;
  std::vector<Monomial> z;
  double scale = 1.0;   // one_side was divided by this before matching
  std::vector<MatchRow> rows;  // beta ascending; covers support and products
};

struct CompiledEq {
  int constraint_index = -1;
  double scale = 1.0;
  std::vector<MatchRow> rows;  // pairs always empty
};

struct CompiledProgram {
  std::vector<std::string> x;  // independent variables, sorted
  std::vector<std::string> d;  // decision variables, sorted
  std::vector<CompiledSos> sos;
  std::vector<CompiledEq> eqs;
  Eigen::VectorXd objective;   // over d
  double objective_constant = 0.0;
};

struct CompileOptions {
  bool simplify = true;
  bool scaling = false;
  // when set, one basis per SOS constraint (program order); candidate
  // generation and simplification are skipped. Used to hold the basis fixed
  // across bisection probes.
  const std::vector<std::vector<Monomial>>* fixed_bases = nullptr;
};

// Match coefficients of every constraint. Throws OddDegreeError,
// NotAffineError, StructuralInfeasibleError, or std::invalid_argument (bad
// variable sets, objective touching independent variables).
CompiledProgram compile_program(const std::vector<Constraint>& constraints,
                                const std::vector<std::string>& x_vars,
                                const Polynomial& objective,
                                const CompileOptions& opts,
                                const std::vector<std::string>& decvars = {});

enum class FormKind { Image, Kernel };

// Conic encoding of a compiled program plus the bookkeeping to pull
// certificates back out of a conic solution.
//
// Image form: the Gram entries are the conic variable x (svec of each Q
// plus orthant splits d = d+ - d-) and the matching rows are Ax = b.
//
// Kernel form: Q_k(d, lam) = Q0 + sum_i d_i D_i + sum_l lam_l N_l satisfies
// the matching rows identically, so the problem collapses to the LMI
// "Q_k(d, lam) PSD" over (d, lam). That LMI is posed on the dual side of
// the solver: y = (d, lam) is the free multiplier, svec(Q_k) is the dual
// slack of a PSD block, and matching rows with no Gram pair become affine
// equalities on d (a two-sided nonneg slack pair each).
struct SdpEncoding {
  FormKind form = FormKind::Image;
  ConicProblem problem;
  int num_d = 0;
  int dplus0 = -1, dminus0 = -1;   // image form: orthant columns for d
  std::vector<int> block_col0;     // svec column offset per SOS constraint
  std::vector<int> block_dim;
  // kernel form data; lambda l of block k is y[num_d + lam_offset[k] + l]
  int num_lambda = 0;
  std::vector<Eigen::MatrixXd> Q0;
  std::vector<std::vector<Eigen::MatrixXd>> D;  // per sos, per d index
  std::vector<std::vector<Eigen::MatrixXd>> N;  // per sos, per lambda
  std::vector<int> lam_offset;                  // per sos, into lambda vector
};

SdpEncoding image_form(const CompiledProgram& prog);
SdpEncoding kernel_form(const CompiledProgram& prog);

struct Certificate {
  std::vector<double> d;                 // aligned with prog.d
  std::vector<Eigen::MatrixXd> Q;        // per SOS constraint, unscaled
};

Certificate extract_certificate(const CompiledProgram& prog,
                                const SdpEncoding& enc,
                                const ConicSolution& sol);

// zQz' as a polynomial (for verification and factor extraction)
Polynomial gram_polynomial(const std::vector<Monomial>& z,
                           const Eigen::MatrixXd& Q);

// SOS factors via eigendecomposition of Q (negative eigenvalues clipped),
// ordered by decreasing eigenvalue.
std::vector<Polynomial> sos_factors(const std::vector<Monomial>& z,
                                    const Eigen::MatrixXd& Q);

}  // namespace sos
