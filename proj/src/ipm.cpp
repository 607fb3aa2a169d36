#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <cstdio>
#include <vector>

#include "soskit/conic.hpp"

namespace sos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNeighborhood = 1e-3;  // min pair of x o s stays >= this * mu

// The Schur complement A W-bar A' inherits the squared conditioning of the
// scaling, which on degenerate problems exceeds what double-precision
// factorization can carry; assembling and factoring it in long double keeps
// the solver usable a few orders of magnitude closer to the optimum.
using LongMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Nesterov-Todd scaling data for one cone block.
struct Scaling {
  // nonneg orthant
  Eigen::VectorXd w;        // sqrt(x / s)
  Eigen::VectorXd lam;      // sqrt(x .* s)
  // psd
  Eigen::MatrixXd W, R, Rinv;
  Eigen::MatrixXd lamM;
  Eigen::VectorXd lam_eigs;
  Eigen::MatrixXd lam_vecs;
  bool ok = true;
};

Eigen::MatrixXd sym(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

// W = X^{1/2} (X^{1/2} S X^{1/2})^{-1/2} X^{1/2}, the unique PD matrix with
// W S W = X. lam = R^{-1} X R^{-1} = R S R for R = W^{1/2}.
Scaling nt_scaling_psd(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S) {
  Scaling sc;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(X);
  if (ex.eigenvalues().minCoeff() <= 0.0) {
    sc.ok = false;
    return sc;
  }
  Eigen::MatrixXd Xh = ex.eigenvectors() *
                       ex.eigenvalues().cwiseSqrt().asDiagonal() *
                       ex.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(sym(Xh * S * Xh));
  if (em.eigenvalues().minCoeff() <= 0.0) {
    sc.ok = false;
    return sc;
  }
  Eigen::MatrixXd Mmh = em.eigenvectors() *
                        em.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        em.eigenvectors().transpose();
  sc.W = sym(Xh * Mmh * Xh);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(sc.W);
  if (ew.eigenvalues().minCoeff() <= 0.0) {
    sc.ok = false;
    return sc;
  }
  sc.R = ew.eigenvectors() * ew.eigenvalues().cwiseSqrt().asDiagonal() *
         ew.eigenvectors().transpose();
  sc.Rinv = ew.eigenvectors() *
            ew.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
            ew.eigenvectors().transpose();
  sc.lamM = sym(0.5 * (sc.R * S * sc.R + sc.Rinv * X * sc.Rinv));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> el(sc.lamM);
  sc.lam_eigs = el.eigenvalues();
  sc.lam_vecs = el.eigenvectors();
  if (sc.lam_eigs.minCoeff() <= 0.0) sc.ok = false;
  return sc;
}

// largest alpha with x + alpha*dx staying in the cone (per block minimum)
double max_step_nonneg(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double a = kInf;
  for (int i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

// Largest alpha with X + alpha*dX staying PSD, i.e. -1 / lambda_min of
// X^{-1/2} dX X^{-1/2}. The eigendecomposition route stays usable when X is
// positive but near singular, where a Cholesky factorization already fails.
double max_step_psd(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(X);
  double lmax = ex.eigenvalues().maxCoeff();
  if (!(lmax > 0.0)) return 0.0;
  double floor = 1e-18 * lmax;
  if (ex.eigenvalues().minCoeff() <= floor) return 0.0;
  Eigen::VectorXd rsq = ex.eigenvalues().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd T = rsq.asDiagonal() * ex.eigenvectors().transpose() * dX *
                      ex.eigenvectors() * rsq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym(T));
  double lmin = eig.eigenvalues().minCoeff();
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

class Ipm {
 public:
  Ipm(const ConicProblem& prob, const IpmOptions& opts)
      : p_(prob), o_(opts), m_(prob.num_rows()), n_(prob.num_cols()) {
    Ad_ = Eigen::MatrixXd(p_.A);
    order_ = 0;
    for (const auto& blk : p_.cones) order_ += blk.dim;
  }

  ConicSolution run() {
    ConicSolution sol;
    init_point();
    scalings_.resize(p_.cones.size());

    for (int it = 0; it <= o_.max_iter; ++it) {
      it_ = it;
      Eigen::VectorXd rp = p_.b - p_.A * x_;
      Eigen::VectorXd rd = p_.c - p_.A.transpose() * y_ - s_;
      Residuals res = compute_residuals(p_, x_, y_, s_);
      trace_.push_back({p_.c.dot(x_), p_.b.dot(y_), x_.dot(s_), rp.norm(),
                        rd.norm(), x_.norm(), y_.norm()});

      if (o_.verbose)
        std::printf(
            "it %3d  mu %9.2e  pres %9.2e  dres %9.2e  gap %9.2e  "
            "xmin %9.2e  smin %9.2e  xmax %9.2e  smax %9.2e  pr %9.2e\n",
            it, res.mu, res.primal, res.dual, res.gap, min_block_eig(x_),
            min_block_eig(s_), x_.cwiseAbs().maxCoeff(),
            s_.cwiseAbs().maxCoeff(), pair_ratio(x_, s_));

      if (!std::isfinite(res.mu) || !std::isfinite(res.primal) ||
          !std::isfinite(res.dual))
        return finish(sol, SolveStatus::Stalled, res);

      double relcomp = x_.dot(s_) / (1.0 + std::abs(p_.c.dot(x_)) +
                                     std::abs(p_.b.dot(y_)));
      if (res.primal <= o_.tol && res.dual <= o_.tol && res.gap <= o_.tol &&
          relcomp <= o_.mu_tol)
        return finish(sol, SolveStatus::Optimal, res);

      // iterates can wander once the terminal numerics degrade, so remember
      // the cleanest point seen and fall back to it on exit
      double score = std::max({res.primal, res.dual, res.gap, relcomp});
      if (score < best_score_) {
        best_score_ = score;
        best_x_ = x_;
        best_y_ = y_;
        best_s_ = s_;
      }
      // an interior iterate with a tight dual residual is a near-feasible
      // dual point, so the sharpest dual bound seen is kept as well: late
      // steps often keep improving it while x drifts.  b'y is discounted by
      // the weak-duality correction |rd' x| <= ||rd|| ||x||, otherwise the
      // selection favors iterates that overshoot b'y on feasibility slack.
      double dual_bound = p_.b.dot(y_) - rd.norm() * (1.0 + x_.norm());
      if (res.dual <= 1e-8 && dual_bound > best_dual_by_) {
        best_dual_by_ = dual_bound;
        best_dual_y_ = y_;
        best_dual_s_ = s_;
      }

      // Farkas certificates, tested on unit-normalized candidates so a
      // diverging iterate cannot pass on norm growth alone: unit y with
      // A'y <=_K 0 and b'y > 0 proves primal infeasibility, unit x in K
      // with Ax ~ 0 and c'x < 0 proves dual infeasibility.
      double by = p_.b.dot(y_);
      double yn = y_.norm();
      if (yn > 0.0 && by > o_.cert_tol * yn * std::max(1.0, p_.b.norm())) {
        Eigen::VectorXd v = -(p_.A.transpose() * y_) / yn;
        double cert = cone_distance(p_, v);
        if (cert <= o_.cert_tol) {
          sol.x = x_;
          sol.y = y_ / by;
          sol.s = s_;
          sol.certificate_residual = cert;
          sol.iterations = it;
          sol.residuals = res;
          sol.trace = trace_;
          sol.status = SolveStatus::PrimalInfeasible;
          return sol;
        }
      }
      double cx = p_.c.dot(x_);
      double xn = x_.norm();
      if (xn > 0.0 && -cx > o_.cert_tol * xn * std::max(1.0, p_.c.norm())) {
        double cert = (p_.A * x_).norm() / xn;
        if (cert <= o_.cert_tol) {
          sol.x = x_ / (-cx);
          sol.y = y_;
          sol.s = s_;
          sol.certificate_residual = cert;
          sol.iterations = it;
          sol.residuals = res;
          sol.trace = trace_;
          sol.status = SolveStatus::DualInfeasible;
          return sol;
        }
      }

      if (it == o_.max_iter)
        return finish(sol, SolveStatus::IterationLimit, res);

      if (!compute_scalings()) {
        if (o_.verbose) std::printf("it %3d  scaling failed\n", it);
        return finish(sol, SolveStatus::Stalled, res);
      }
      if (!factor_schur()) {
        if (o_.verbose) std::printf("it %3d  schur factorization failed\n", it);
        return finish(sol, SolveStatus::Stalled, res);
      }

      double mu = res.mu;

      // predictor: target complementarity 0, third-equation rhs is -x
      Eigen::VectorXd dxa(n_), dya(m_), dsa(n_);
      solve_kkt(rp, rd, -x_, dxa, dya, dsa);
      double aa = std::min({1.0, max_step(x_, dxa), max_step(s_, dsa)});
      double mu_aff =
          (x_ + aa * dxa).dot(s_ + aa * dsa) / std::max(order_, 1);
      double sigma = mu > 0.0 ? std::pow(std::max(mu_aff, 0.0) / mu, 3.0) : 0.0;
      sigma = std::min(1.0, std::max(sigma, 0.0));

      // corrector with Mehrotra second-order term in the scaled space; the
      // central-path neighborhood guard keeps the smallest eigenvalue pair
      // of x o s above a fraction of mu (otherwise the NT scaling spread
      // wrecks the next Schur factorization), and when that guard leaves no
      // usable step the corrector is retried with more centering
      Eigen::VectorXd rc, dx(n_), dy(m_), ds(n_);
      double a = 0.0, kkt = 0.0;
      const double ratio_now = pair_ratio(x_, s_);
      for (int attempt = 0; attempt < 3; ++attempt) {
        rc = corrector_rhs(sigma * mu, dxa, dsa);
        solve_kkt(rp, rd, rc, dx, dy, ds);

        // directions are meaningless once the Schur factorization degrades
        // past what iterative refinement can recover; each equation is
        // checked on its own scale so a large iterate norm in one cannot
        // mask garbage in another
        double r1 = (rp - p_.A * dx).norm();
        double r2 = (rd - p_.A.transpose() * dy - ds).norm();
        double r3 = (rc - dx - apply_Wbar(ds)).norm();
        kkt = r1 + r2 + r3;
        // the primal equations tolerate a loose direction: steps whose error
        // lands in dx merely drift x while the dual pair keeps converging,
        // and the best-iterate bookkeeping discards the drift at exit; the
        // dual equation stays strict because that is the progress harvested
        if (!(r1 <= 1e3 * (1.0 + rp.norm())) ||
            !(r2 <= 0.5 * (1.0 + rd.norm())) ||
            !(r3 <= 1e3 * (1.0 + rc.norm()))) {
          if (o_.verbose)
            std::printf("it %3d  direction bailout r1 %.2e r2 %.2e r3 %.2e\n",
                        it, r1, r2, r3);
          return finish(sol, SolveStatus::Stalled, res);
        }

        // a single step length for both sides keeps the complementarity
        // decrease of the corrector valid even while still infeasible
        a = std::min(1.0,
                     0.99 * std::min(max_step(x_, dx), max_step(s_, ds)));
        // inside the neighborhood, stay there; once below it, only steps
        // that recover centrality are allowed (centering retries provide
        // them), which blocks the exponential drift to the cone boundary
        double floor_ratio = ratio_now >= kNeighborhood
                                 ? kNeighborhood
                                 : std::min(kNeighborhood, 1.05 * ratio_now);
        while (a > o_.step_floor &&
               pair_ratio(x_ + a * dx, s_ + a * ds) < floor_ratio)
          a *= 0.7;
        if (a >= 0.05 || attempt == 2) break;
        sigma += 0.5 * (1.0 - sigma);
      }

      if (o_.verbose)
        std::printf("        aa %9.2e  sigma %9.2e  a %9.2e  kkt %9.2e\n", aa,
                    sigma, a, kkt);
      if (a < o_.step_floor) {
        if (o_.verbose) std::printf("it %3d  step length collapsed\n", it);
        return finish(sol, SolveStatus::Stalled, res);
      }

      x_ += a * dx;
      y_ += a * dy;
      s_ += a * ds;
    }
    // not reached
    ConicSolution fallback;
    return fallback;
  }

 private:
  const ConicProblem& p_;
  IpmOptions o_;
  int m_, n_, order_;
  int it_ = 0;
  Eigen::MatrixXd aatM_;  // A A', kept for the final polish
  Eigen::LDLT<Eigen::MatrixXd> aat_;
  bool aat_ok_ = false;
  Eigen::MatrixXd Ad_;
  Eigen::VectorXd x_, y_, s_;
  std::vector<IterateStat> trace_;
  std::vector<Scaling> scalings_;
  Eigen::MatrixXd WAt_;  // n x m, columns W-bar applied to A' unit rows
  LongMat M_;            // Schur complement A W-bar A', extended precision
  Eigen::LDLT<LongMat> schur_;
  double best_score_ = kInf;  // cleanest iterate seen so far
  Eigen::VectorXd best_x_, best_y_, best_s_;
  double best_dual_by_ = -kInf;  // sharpest dual bound seen so far
  Eigen::VectorXd best_dual_y_, best_dual_s_;

  double iterate_score() const {
    Residuals r = compute_residuals(p_, x_, y_, s_);
    double relcomp = x_.dot(s_) / (1.0 + std::abs(p_.c.dot(x_)) +
                                   std::abs(p_.b.dot(y_)));
    return std::max({r.primal, r.dual, r.gap, relcomp});
  }

  // least-squares correction onto Ax = b; the small cone violation it can
  // introduce is within what downstream certificate checks tolerate
  void polish() {
    if (!aat_ok_) return;
    Eigen::VectorXd rp = p_.b - p_.A * x_;
    double before = rp.norm();
    if (!(before > 0.0) || !std::isfinite(before)) return;
    Eigen::VectorXd u = aat_.solve(rp);
    u += aat_.solve(rp - aatM_ * u);
    Eigen::VectorXd x2 = x_ + Ad_.transpose() * u;
    if ((p_.b - p_.A * x2).norm() < before) x_ = x2;
  }

  // Final exit. Polishing usually restores the digits the last steps lost to
  // the ill-conditioned Schur solves. A point the iteration cannot improve
  // further still counts as optimal at reduced accuracy when its residuals
  // and gap are tight enough for any downstream certificate use.
  ConicSolution finish(ConicSolution& sol, SolveStatus st, Residuals res) {
    if (st == SolveStatus::Optimal || st == SolveStatus::Stalled ||
        st == SolveStatus::IterationLimit) {
      if (best_score_ < iterate_score()) {
        x_ = best_x_;
        y_ = best_y_;
        s_ = best_s_;
      }
      polish();
      // the returned primal and dual points need not come from the same
      // iterate; weak duality holds for any feasible pair, so the sharper
      // dual bound is kept when one was recorded
      double cur_bound =
          p_.b.dot(y_) - (p_.c - p_.A.transpose() * y_ - s_).norm() *
                             (1.0 + x_.norm());
      if (best_dual_by_ > cur_bound) {
        y_ = best_dual_y_;
        s_ = best_dual_s_;
      }
      res = compute_residuals(p_, x_, y_, s_);
      // complementarity is not meaningful across a mixed pair, but primal
      // and dual feasibility plus a small gap certify near-optimality of
      // both sides through weak duality
      bool loose = res.primal <= o_.reduced_tol && res.dual <= o_.reduced_tol &&
                   res.gap <= o_.reduced_tol;
      if (st == SolveStatus::Optimal || loose) st = SolveStatus::Optimal;
    }
    sol.status = st;
    sol.x = x_;
    sol.y = y_;
    sol.s = s_;
    sol.residuals = res;
    sol.iterations = it_;
    sol.trace = trace_;
    return sol;
  }

  // concatenated cone identity: all-ones on orthant blocks, svec(I) on PSD
  Eigen::VectorXd cone_identity() const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    for (const auto& blk : p_.cones) {
      if (blk.kind == ConeBlock::Kind::Nonneg)
        e.segment(blk.offset, blk.vlen).setOnes();
      else
        e.segment(blk.offset, blk.vlen) =
            svec(Eigen::MatrixXd::Identity(blk.dim, blk.dim));
    }
    return e;
  }

  double min_block_eig(const Eigen::VectorXd& v) const {
    double mn = kInf;
    for (const auto& blk : p_.cones) {
      auto seg = v.segment(blk.offset, blk.vlen);
      if (blk.kind == ConeBlock::Kind::Nonneg) {
        mn = std::min(mn, seg.minCoeff());
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(smat(seg));
        mn = std::min(mn, eig.eigenvalues().minCoeff());
      }
    }
    return std::isfinite(mn) ? mn : 0.0;
  }

  // Mehrotra starting point: least-squares estimates shifted into the cone
  // interior, so the initial iterate carries the scale of the data
  void init_point() {
    aatM_ = sym(Ad_ * Ad_.transpose());
    aat_.compute(aatM_);
    aat_ok_ = m_ > 0 && aat_.info() == Eigen::Success;
    Eigen::VectorXd xh, sh;
    if (aat_ok_) {
      xh = Ad_.transpose() * aat_.solve(p_.b);
      y_ = aat_.solve(Ad_ * p_.c);
      sh = p_.c - Ad_.transpose() * y_;
    } else {
      xh = Eigen::VectorXd::Zero(n_);
      y_ = Eigen::VectorXd::Zero(m_);
      sh = p_.c;
    }
    Eigen::VectorXd e = cone_identity();
    Eigen::VectorXd x1 = xh + std::max(0.0, -1.5 * min_block_eig(xh)) * e;
    Eigen::VectorXd s1 = sh + std::max(0.0, -1.5 * min_block_eig(sh)) * e;
    double g = x1.dot(s1);
    double dp = g > 0.0 && e.dot(s1) > 0.0 ? 0.5 * g / e.dot(s1) : 0.0;
    double dd = g > 0.0 && e.dot(x1) > 0.0 ? 0.5 * g / e.dot(x1) : 0.0;
    x_ = x1 + std::max(dp, 1.0) * e;
    s_ = s1 + std::max(dd, 1.0) * e;
  }

  bool compute_scalings() {
    for (std::size_t k = 0; k < p_.cones.size(); ++k) {
      const auto& blk = p_.cones[k];
      auto xb = x_.segment(blk.offset, blk.vlen);
      auto sb = s_.segment(blk.offset, blk.vlen);
      if (blk.kind == ConeBlock::Kind::Nonneg) {
        if (xb.minCoeff() <= 0.0 || sb.minCoeff() <= 0.0) return false;
        scalings_[k].w = (xb.array() / sb.array()).sqrt().matrix();
        scalings_[k].lam = (xb.array() * sb.array()).sqrt().matrix();
        scalings_[k].ok = true;
      } else {
        scalings_[k] = nt_scaling_psd(smat(xb), smat(sb));
        if (!scalings_[k].ok) return false;
      }
    }
    return true;
  }

  // v -> W-bar v, the quadratic representation x = W-bar s mapping: w^2
  // elementwise on the orthant, svec(W smat(v) W) on PSD blocks
  Eigen::VectorXd apply_Wbar(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(n_);
    for (std::size_t k = 0; k < p_.cones.size(); ++k) {
      const auto& blk = p_.cones[k];
      auto seg = v.segment(blk.offset, blk.vlen);
      if (blk.kind == ConeBlock::Kind::Nonneg) {
        out.segment(blk.offset, blk.vlen) =
            scalings_[k].w.array().square().matrix().cwiseProduct(seg);
      } else {
        const auto& W = scalings_[k].W;
        out.segment(blk.offset, blk.vlen) = svec(sym(W * smat(seg) * W));
      }
    }
    return out;
  }

  bool factor_schur() {
    WAt_.resize(n_, m_);
    for (int r = 0; r < m_; ++r)
      WAt_.col(r) = apply_Wbar(Ad_.row(r).transpose());
    LongMat half = Ad_.cast<long double>() * WAt_.cast<long double>();
    M_ = 0.5L * (half + half.transpose());
    schur_.compute(M_);
    if (schur_.info() != Eigen::Success) {
      // tiny ridge keeps degenerate problems moving
      long double ridge =
          1e-18L * (1.0L + M_.diagonal().cwiseAbs().maxCoeff());
      M_.diagonal().array() += ridge;
      schur_.compute(M_);
      if (schur_.info() != Eigen::Success) return false;
    }
    return true;
  }

  void solve_kkt_once(const Eigen::VectorXd& rp, const Eigen::VectorXd& rd,
                      const Eigen::VectorXd& rc, Eigen::VectorXd& dx,
                      Eigen::VectorXd& dy, Eigen::VectorXd& ds) const {
    //   A dx            = rp
    //   A'dy + ds       = rd
    //   dx + W-bar ds   = rc
    LongVec rhs =
        (rp - Ad_ * rc + WAt_.transpose() * rd).cast<long double>();
    LongVec dyl = schur_.solve(rhs);
    LongVec r = rhs - M_ * dyl;
    if (r.norm() > 1e-18L * (1.0L + rhs.norm())) dyl += schur_.solve(r);
    dy = dyl.cast<double>();
    ds = rd - p_.A.transpose() * dy;
    dx = rc - apply_Wbar(ds);
  }

  // The Schur complement turns badly conditioned near the optimum and the
  // factorization alone loses digits, so refine against the full system;
  // the refinement operator is exactly the one factored, which makes each
  // round contract the true residual.
  void solve_kkt(const Eigen::VectorXd& rp, const Eigen::VectorXd& rd,
                 const Eigen::VectorXd& rc, Eigen::VectorXd& dx,
                 Eigen::VectorXd& dy, Eigen::VectorXd& ds) const {
    solve_kkt_once(rp, rd, rc, dx, dy, ds);
    Eigen::VectorXd ex(n_), ey(m_), es(n_);
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd r1 = rp - p_.A * dx;
      Eigen::VectorXd r2 = rd - p_.A.transpose() * dy - ds;
      Eigen::VectorXd r3 = rc - dx - apply_Wbar(ds);
      double scale = 1.0 + rp.norm() + rd.norm() + rc.norm();
      if (r1.norm() + r2.norm() + r3.norm() <= 1e-13 * scale) break;
      solve_kkt_once(r1, r2, r3, ex, ey, es);
      dx += ex;
      dy += ey;
      ds += es;
    }
  }

  // smallest eigenvalue of x o s relative to its mean (negative or zero when
  // a block leaves the cone); the similarity L' S L shares the spectrum of XS
  double pair_ratio(const Eigen::VectorXd& x, const Eigen::VectorXd& s) const {
    double mu = x.dot(s) / std::max(order_, 1);
    if (!(mu > 0.0)) return -1.0;
    double mn = kInf;
    for (const auto& blk : p_.cones) {
      auto xb = x.segment(blk.offset, blk.vlen);
      auto sb = s.segment(blk.offset, blk.vlen);
      if (blk.kind == ConeBlock::Kind::Nonneg) {
        mn = std::min(mn, xb.cwiseProduct(sb).minCoeff());
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(smat(xb));
        if (!(ex.eigenvalues().minCoeff() > 0.0)) return -1.0;
        Eigen::VectorXd sq = ex.eigenvalues().cwiseSqrt();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            sym(sq.asDiagonal() * ex.eigenvectors().transpose() * smat(sb) *
                ex.eigenvectors() * sq.asDiagonal()));
        mn = std::min(mn, eig.eigenvalues().minCoeff());
      }
    }
    return mn / mu;
  }

  double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) const {
    double a = kInf;
    for (const auto& blk : p_.cones) {
      auto vb = v.segment(blk.offset, blk.vlen);
      auto db = dv.segment(blk.offset, blk.vlen);
      if (blk.kind == ConeBlock::Kind::Nonneg)
        a = std::min(a, max_step_nonneg(vb, db));
      else
        a = std::min(a, max_step_psd(smat(vb), smat(db)));
    }
    return a;
  }

  // third-equation rhs for the corrector: unscale the Jordan solve of
  //   lam o u = sigma*mu*e - lam o lam - dxa_hat o dsa_hat
  Eigen::VectorXd corrector_rhs(double target, const Eigen::VectorXd& dxa,
                                const Eigen::VectorXd& dsa) const {
    Eigen::VectorXd rc(n_);
    for (std::size_t k = 0; k < p_.cones.size(); ++k) {
      const auto& blk = p_.cones[k];
      const auto& sc = scalings_[k];
      if (blk.kind == ConeBlock::Kind::Nonneg) {
        auto xa = dxa.segment(blk.offset, blk.vlen).array();
        auto sa = dsa.segment(blk.offset, blk.vlen).array();
        auto lam = sc.lam.array();
        Eigen::ArrayXd eta = target - lam.square() - xa * sa;
        rc.segment(blk.offset, blk.vlen) =
            (sc.w.array() * eta / lam).matrix();
      } else {
        Eigen::MatrixXd Dx = sym(sc.Rinv * smat(dxa.segment(blk.offset, blk.vlen)) * sc.Rinv);
        Eigen::MatrixXd Ds = sym(sc.R * smat(dsa.segment(blk.offset, blk.vlen)) * sc.R);
        Eigen::MatrixXd eta =
            target * Eigen::MatrixXd::Identity(blk.dim, blk.dim) -
            sc.lamM * sc.lamM - 0.5 * (Dx * Ds + Ds * Dx);
        eta = sym(eta);
        // Jordan solve in lam's eigenbasis
        Eigen::MatrixXd et = sc.lam_vecs.transpose() * eta * sc.lam_vecs;
        for (int i = 0; i < blk.dim; ++i)
          for (int j = 0; j < blk.dim; ++j)
            et(i, j) = 2.0 * et(i, j) / (sc.lam_eigs[i] + sc.lam_eigs[j]);
        Eigen::MatrixXd u = sc.lam_vecs * et * sc.lam_vecs.transpose();
        rc.segment(blk.offset, blk.vlen) = svec(sym(sc.R * u * sc.R));
      }
    }
    return rc;
  }
};

// Drop linearly dependent rows, keeping the earliest independent ones, and
// detect rows whose right-hand side contradicts the rows they depend on.
struct Presolve {
  bool infeasible = false;
  Eigen::VectorXd farkas_y;  // when infeasible
  std::vector<int> kept;     // row indices kept, ascending
  ConicProblem reduced;
};

Presolve presolve_rows(const ConicProblem& prob) {
  Presolve out;
  const int m = prob.num_rows();
  const int n = prob.num_cols();
  if (m == 0) {
    out.reduced = prob;
    return out;
  }
  Eigen::MatrixXd Ad(prob.A);

  // modified Gram-Schmidt over rows; projection coefficients computed from
  // the A part are applied to b too, so a dependent row's b residual is
  // exactly b_i - gamma' b_kept for its dependence combination gamma
  Eigen::MatrixXd Q(m, n);
  Eigen::VectorXd beta(m);
  int r = 0;
  bool inconsistent = false;
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd v = Ad.row(i).transpose();
    double rb = prob.b[i];
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < r; ++j) {
        double coef = Q.row(j).dot(v);
        v -= coef * Q.row(j).transpose();
        rb -= coef * beta[j];
      }
    double anorm = Ad.row(i).norm();
    if (v.norm() > 1e-10 * (1.0 + anorm)) {
      Q.row(r) = v / v.norm();
      beta[r] = rb / v.norm();
      out.kept.push_back(i);
      ++r;
    } else if (std::abs(rb) > 1e-8 * (1.0 + std::abs(prob.b[i]))) {
      inconsistent = true;
    }
  }

  if (inconsistent) {
    // certificate y in the left null space with b'y = 1
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Ad.transpose());
    Eigen::MatrixXd K = lu.kernel();  // m x k
    Eigen::VectorXd g = K.transpose() * prob.b;
    if (g.norm() > 0.0) {
      out.farkas_y = K * (g / g.squaredNorm());
      out.infeasible = true;
      return out;
    }
    // the kernel missed the dependency: keep every row and let the
    // interior-point iteration find the certificate itself
    out.kept.clear();
    for (int i = 0; i < m; ++i) out.kept.push_back(i);
    out.reduced = prob;
    return out;
  }

  if (r == m) {
    out.reduced = prob;
    return out;
  }
  out.reduced.cones = prob.cones;
  out.reduced.c = prob.c;
  Eigen::MatrixXd Ar(r, n);
  Eigen::VectorXd br(r);
  for (int i = 0; i < r; ++i) {
    Ar.row(i) = Ad.row(out.kept[i]);
    br[i] = prob.b[out.kept[i]];
  }
  out.reduced.A = Ar.sparseView();
  out.reduced.b = br;
  return out;
}

}  // namespace

ConicSolution solve_conic(const ConicProblem& prob, const IpmOptions& opts) {
  // Row equilibration: dividing row i of [A | b] by its norm leaves x and s
  // untouched and maps y to y_i / d_i, so it is invisible to the caller but
  // keeps the Schur complement well conditioned for badly scaled inputs.
  const int m = prob.num_rows();
  if (m == 0) {
    // no rows: x = 0 is optimal iff c lies in the cone, otherwise any cone
    // direction with negative cost is an improving ray
    ConicSolution sol;
    sol.y.resize(0);
    sol.x.setZero(prob.num_cols());
    sol.s = prob.c;
    double scale =
        1.0 + (prob.c.size() > 0 ? prob.c.cwiseAbs().maxCoeff() : 0.0);
    if (cone_distance(prob, prob.c) <= 1e-12 * scale) {
      sol.status = SolveStatus::Optimal;
    } else {
      sol.status = SolveStatus::DualInfeasible;
      for (const auto& blk : prob.cones) {
        auto seg = prob.c.segment(blk.offset, blk.vlen);
        if (blk.kind == ConeBlock::Kind::Nonneg) {
          sol.x.segment(blk.offset, blk.vlen) =
              (seg.array() < 0.0).cast<double>();
        } else {
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(smat(seg));
          Eigen::MatrixXd X = Eigen::MatrixXd::Zero(blk.dim, blk.dim);
          for (int i = 0; i < blk.dim; ++i)
            if (eig.eigenvalues()[i] < 0.0)
              X += eig.eigenvectors().col(i) *
                   eig.eigenvectors().col(i).transpose();
          sol.x.segment(blk.offset, blk.vlen) = svec(X);
        }
      }
      sol.certificate_residual = 0.0;  // Ax = 0 holds exactly with no rows
    }
    sol.residuals = compute_residuals(prob, sol.x, sol.y, sol.s);
    return sol;
  }
  ConicProblem eq = prob;
  Eigen::VectorXd rnorm = Eigen::VectorXd::Ones(m);
  if (m > 0) {
    Eigen::MatrixXd Ad(prob.A);
    for (int i = 0; i < m; ++i) {
      double nrm = Ad.row(i).norm();
      if (nrm > 0.0) {
        rnorm[i] = nrm;
        Ad.row(i) /= nrm;
      }
    }
    eq.A = Ad.sparseView();
    eq.b = prob.b.cwiseQuotient(rnorm);
  }

  Presolve pre = presolve_rows(eq);
  if (pre.infeasible) {
    ConicSolution sol;
    sol.status = SolveStatus::PrimalInfeasible;
    sol.x.setZero(prob.num_cols());
    sol.s.setZero(prob.num_cols());
    sol.y = pre.farkas_y.cwiseQuotient(rnorm);
    Eigen::VectorXd v = -(prob.A.transpose() * sol.y);
    sol.certificate_residual = cone_distance(prob, v) / (1.0 + v.norm());
    sol.residuals = compute_residuals(prob, sol.x, sol.y, sol.s);
    return sol;
  }

  if (pre.reduced.num_cols() == 0) {
    // no variables: feasible iff b == 0 (presolve already caught nonzero b
    // against an empty row space when rows exist)
    ConicSolution sol;
    sol.status = pre.reduced.b.norm() == 0.0 ? SolveStatus::Optimal
                                             : SolveStatus::PrimalInfeasible;
    sol.x.resize(0);
    sol.s.resize(0);
    sol.y.setZero(m);
    return sol;
  }

  Ipm ipm(pre.reduced, opts);
  ConicSolution sol = ipm.run();

  Eigen::VectorXd y_full = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < pre.kept.size(); ++i)
    y_full[pre.kept[i]] = sol.y[i];
  sol.y = y_full.cwiseQuotient(rnorm);
  sol.residuals = compute_residuals(prob, sol.x, sol.y, sol.s);
  return sol;
}

}  // namespace sos
