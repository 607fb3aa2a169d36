#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <limits>
#include <string>
#include <vector>

namespace sos {

// Standard-form conic program over a product of nonnegative-orthant and PSD
// blocks:
//   minimize    c'x
//   subject to  A x = b,  x in K
// PSD blocks are stored in svec coordinates (upper triangle scanned row by
// row, off-diagonal entries scaled by sqrt(2)), so the Euclidean inner
// product of two svec vectors equals the Frobenius product of the matrices.

struct ConeBlock {
  enum class Kind { Nonneg, Psd };
  Kind kind;
  int dim;     // orthant length, or PSD matrix side
  int offset;  // first coordinate in x
  int vlen;    // coordinates occupied: dim, or dim*(dim+1)/2
};

int svec_dim(int n);
Eigen::VectorXd svec(const Eigen::MatrixXd& S);
Eigen::MatrixXd smat(const Eigen::VectorXd& v);

struct ConicProblem {
  std::vector<ConeBlock> cones;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  int num_rows() const { return static_cast<int>(A.rows()); }
  int num_cols() const { return static_cast<int>(A.cols()); }

  // append a block and return its offset; finalize layout before building A
  int add_block(ConeBlock::Kind kind, int dim);
  int total_vlen() const;
};

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  IterationLimit,
  Stalled,
};

std::string status_str(SolveStatus s);

struct Residuals {
  double primal = 0.0;  // ||Ax - b|| / (1 + ||b||)
  double dual = 0.0;    // ||A'y + s - c|| / (1 + ||c||)
  double gap = 0.0;     // |c'x - b'y| / (1 + |c'x| + |b'y|)
  double mu = 0.0;      // <x, s> / cone order
};

// objective values and unscaled residual norms at one iterate
struct IterateStat {
  double cx = 0.0;       // c'x
  double by = 0.0;       // b'y
  double xs = 0.0;       // <x, s>
  double rp_norm = 0.0;  // ||Ax - b||
  double rd_norm = 0.0;  // ||c - A'y - s||
  double x_norm = 0.0;
  double y_norm = 0.0;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::Stalled;
  Eigen::VectorXd x, y, s;
  Residuals residuals;
  int iterations = 0;
  // for infeasible statuses: the scaled Farkas certificate quality
  double certificate_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<IterateStat> trace;  // one entry per iterate, in order
};

struct IpmOptions {
  double tol = 1e-8;        // primal/dual residual and relative gap target
  double mu_tol = 1e-8;     // x's / (1 + |c'x| + |b'y|) target
  // a stalled point is still reported optimal when every residual and the
  // gap satisfy this weaker bound (reduced-accuracy acceptance)
  double reduced_tol = 2e-5;
  double cert_tol = 1e-8;   // Farkas certificate acceptance
  double step_floor = 1e-10;
  int max_iter = 100;
  bool verbose = false;
};

ConicSolution solve_conic(const ConicProblem& prob, const IpmOptions& opts = {});

Residuals compute_residuals(const ConicProblem& prob, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, const Eigen::VectorXd& s);

// Euclidean distance from v to the cone (per-block projection), used to
// verify Farkas certificates and returned solutions.
double cone_distance(const ConicProblem& prob, const Eigen::VectorXd& v);

}  // namespace sos
