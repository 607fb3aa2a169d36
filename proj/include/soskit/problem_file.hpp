#pragma once

#include <optional>

#include "soskit/solve.hpp"

namespace sos {

// Validation or parse failure inside a problem file. `where` is a
// JSON-pointer-style path ("/constraints/2/rel"); expression errors append
// the byte offset inside the expression text.
struct ProblemFileError : std::runtime_error {
  ProblemFileError(const std::string& where_, const std::string& msg)
      : std::runtime_error(where_ + ": " + msg), where(where_) {}
  std::string where;
};

struct ConstraintSpec {
  Polynomial lhs;
  RelOp rel = RelOp::GE;
  Polynomial rhs;
  std::string label;
};

// Option fields present in the file; unset fields fall through to defaults
// (or to command-line flags, which rank above the file).
struct OptionOverrides {
  std::optional<FormKind> form;
  std::optional<bool> simplify, scaling, display;
  std::optional<Options::CheckFeas> checkfeas;
  std::optional<double> feastol, minobj, maxobj, absbistol, relbistol;
};

struct ProblemFile {
  std::vector<std::string> vars;
  std::vector<std::string> decvars;  // empty = infer
  std::vector<ConstraintSpec> constraints;
  std::optional<Polynomial> objective;
  std::optional<std::string> gsos_t;
  OptionOverrides options;

  std::vector<Constraint> build_constraints() const;
};

// `where_prefix` labels error locations (usually the file name).
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

// Canonical JSON rendering; re-parsing it yields an identical program.
std::string render_problem_file(const ProblemFile& pf);

GOptions apply_overrides(GOptions base, const OptionOverrides& o);

// Flat result document so the human-readable and machine-readable renderings
// are produced from the same values.
struct ReportConstraintRow {
  int index = 0;  // 1-based in renderings
  std::string kind;  // "sos" or "eq"
  std::string label;
  int basis_size = 0;
  double min_eig = 0.0;
  double residual = 0.0;
};

struct ReportDocument {
  bool feas = false;
  std::string status;
  double obj = std::numeric_limits<double>::infinity();
  std::optional<std::pair<double, double>> tbnds;
  std::vector<std::pair<std::string, double>> dopt;
  std::vector<ReportConstraintRow> constraints;
  std::string check_mode;
  bool check_performed = false;
  bool check_pass = false;
  int iterations = 0;
  int bisection_probes = 0;
  double solve_seconds = 0.0;
  // issos extras
  bool is_issos = false;
  std::vector<std::string> factors;
};

ReportDocument make_report(const std::vector<Constraint>& constraints,
                           const SolveResult& result, double feastol);
ReportDocument make_issos_report(const Polynomial& p, const IssosResult& result,
                                 double feastol);

std::string render_report_text(const ReportDocument& doc);
std::string render_report_json(const ReportDocument& doc);

}  // namespace sos
