#include "soskit/conic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace sos {

int svec_dim(int n) { return n * (n + 1) / 2; }

Eigen::VectorXd svec(const Eigen::MatrixXd& S) {
  const int n = static_cast<int>(S.rows());
  Eigen::VectorXd v(svec_dim(n));
  const double r2 = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      v[k++] = (i == j) ? S(i, i) : r2 * 0.5 * (S(i, j) + S(j, i));
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v) {
  // invert n*(n+1)/2 = len
  const int len = static_cast<int>(v.size());
  const int n = static_cast<int>(std::round((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0));
  if (svec_dim(n) != len) throw std::invalid_argument("smat: bad svec length");
  Eigen::MatrixXd S(n, n);
  const double ir2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double val = (i == j) ? v[k] : ir2 * v[k];
      S(i, j) = val;
      S(j, i) = val;
      ++k;
    }
  return S;
}

int ConicProblem::add_block(ConeBlock::Kind kind, int dim) {
  int off = total_vlen();
  int vlen = kind == ConeBlock::Kind::Psd ? svec_dim(dim) : dim;
  cones.push_back(ConeBlock{kind, dim, off, vlen});
  return off;
}

int ConicProblem::total_vlen() const {
  int n = 0;
  for (const auto& blk : cones) n += blk.vlen;
  return n;
}

std::string status_str(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::PrimalInfeasible: return "PRIMAL_INFEASIBLE";
    case SolveStatus::DualInfeasible: return "DUAL_INFEASIBLE";
    case SolveStatus::IterationLimit: return "ITERATION_LIMIT";
    case SolveStatus::Stalled: return "STALLED";
  }
  return "UNKNOWN";
}

Residuals compute_residuals(const ConicProblem& prob, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y, const Eigen::VectorXd& s) {
  Residuals r;
  r.primal = (prob.A * x - prob.b).norm() / (1.0 + prob.b.norm());
  r.dual = (prob.A.transpose() * y + s - prob.c).norm() / (1.0 + prob.c.norm());
  double pobj = prob.c.dot(x), dobj = prob.b.dot(y);
  r.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  int order = 0;
  for (const auto& blk : prob.cones) order += blk.dim;
  r.mu = order > 0 ? x.dot(s) / order : 0.0;
  return r;
}

double cone_distance(const ConicProblem& prob, const Eigen::VectorXd& v) {
  double d2 = 0.0;
  for (const auto& blk : prob.cones) {
    auto seg = v.segment(blk.offset, blk.vlen);
    if (blk.kind == ConeBlock::Kind::Nonneg) {
      d2 += seg.cwiseMin(0.0).squaredNorm();
    } else {
      Eigen::MatrixXd S = smat(seg);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
      d2 += eig.eigenvalues().cwiseMin(0.0).squaredNorm();
    }
  }
  return std::sqrt(d2);
}

}  // namespace sos
