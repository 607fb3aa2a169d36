#pragma once

#include <optional>
#include <utility>

#include "soskit/gram.hpp"

namespace sos {

struct Options {
  FormKind form = FormKind::Image;
  bool simplify = true;
  bool scaling = false;
  enum class CheckFeas { Off, Fast, Full, Both };
  CheckFeas checkfeas = CheckFeas::Fast;
  double feastol = 1e-6;
  IpmOptions solver;
};

std::string checkfeas_str(Options::CheckFeas mode);

struct GOptions : Options {
  double minobj = -1e3;
  double maxobj = 1e3;
  double absbistol = 1e-3;
  double relbistol = 1e-3;
  bool display = false;
};

struct CheckItem {
  int constraint_index = -1;
  bool pass = true;
  double min_eig = 0.0;
  double eig_floor = 0.0;        // pass needs min_eig >= -eig_floor
  double match_residual = 0.0;   // ||coeff(p - zQz')||_inf, or eq residual
  double match_floor = 0.0;
  std::string note;
};

struct CheckReport {
  bool performed = false;
  bool pass = true;       // overall verdict of the configured mode
  std::string mode;
  bool fast_pass = true;  // solver status mapped to pass/fail
  std::vector<CheckItem> items;  // populated by the full check
};

// one entry per constraint, in program order; equality constraints and
// vacuous SOS constraints carry empty z and a 0x0 Q
struct ConstraintCertificate {
  int constraint_index = -1;
  Polynomial p;  // one_side evaluated at dopt
  std::vector<Monomial> z;
  Eigen::MatrixXd Q;
};

struct Diagnostics {
  SolveStatus status = SolveStatus::Stalled;
  Residuals residuals;
  int iterations = 0;
  int sdp_rows = 0;
  int sdp_cols = 0;
  std::vector<int> psd_dims;
  double certificate_residual = std::numeric_limits<double>::quiet_NaN();
  double solve_seconds = 0.0;
  int bisection_probes = 0;
  std::string message;
  CheckReport check;
};

struct SolveResult {
  bool feas = false;
  double obj = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::string, double>> dopt;
  std::vector<ConstraintCertificate> sossol;
  std::optional<std::pair<double, double>> tbnds;
  Diagnostics diagnostics;
};

// minimize objective (affine in the decision variables, empty for a pure
// feasibility problem) subject to the constraints; decvars may be given
// explicitly and must then cover every non-x variable
SolveResult sosopt(const std::vector<Constraint>& constraints,
                   const std::vector<std::string>& x,
                   const Polynomial& objective = Polynomial(),
                   const Options& opts = Options(),
                   const std::vector<std::string>& decvars = {});

struct IssosResult {
  bool feas = false;
  std::vector<Monomial> z;
  Eigen::MatrixXd Q;
  std::vector<Polynomial> f;
  Diagnostics diagnostics;
};

// is p a sum of squares? all variables of p are treated as polynomial
// variables; odd degree or structural infeasibility yield feas = 0
IssosResult issos(const Polynomial& p, const Options& opts = Options());

// minimize t by bisection; constraints may be bilinear in t and the other
// decision variables
SolveResult gsosopt(const std::vector<Constraint>& constraints,
                    const std::vector<std::string>& x, const std::string& t,
                    const GOptions& opts = GOptions(),
                    const std::vector<std::string>& decvars = {});

struct PcontainResult {
  bool feas = false;
  std::pair<double, double> beta_bounds{0.0, 0.0};  // (certified, outer)
  Polynomial multiplier;                            // s at the optimum
  SolveResult details;
};

// largest beta with {g(x) <= beta} contained in {p(x) <= 0}, certified by a
// multiplier s built on z_s
PcontainResult pcontain(const Polynomial& p, const Polynomial& g,
                        const std::vector<Monomial>& z_s,
                        const GOptions& opts = GOptions());

CheckReport check_feasibility(const std::vector<Constraint>& constraints,
                              const std::vector<std::string>& x,
                              const SolveResult& result,
                              Options::CheckFeas mode, double feastol);

// Certificate quality per stored record (no recomputation from the original
// constraints, so it also fits bisection results where t was substituted):
// Gram min eigenvalue and the coefficient residual of p - z'Qz; records with
// an empty basis report the residual of p itself.
std::vector<CheckItem> certificate_summary(const SolveResult& result,
                                           double feastol);

}  // namespace sos
