#include "soskit/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace sos {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Polynomial parse_expr(const json& v, const std::string& where) {
  if (!v.is_string())
    throw ProblemFileError(where, "expected an expression string");
  try {
    return parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ProblemFileError(where, e.what());
  }
}

std::string name_entry(const json& v, const std::string& where) {
  if (!v.is_string()) throw ProblemFileError(where, "expected a name string");
  std::string name = v.get<std::string>();
  if (!is_valid_var_name(name))
    throw ProblemFileError(where, "invalid variable name: '" + name + "'");
  return name;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) throw ProblemFileError(where + "/" + key, "unknown field");
  }
}

}  // namespace

std::vector<Constraint> ProblemFile::build_constraints() const {
  std::vector<Constraint> out;
  out.reserve(constraints.size());
  for (const auto& c : constraints) {
    switch (c.rel) {
      case RelOp::GE: out.push_back(Constraint::sos_ge(c.lhs, c.rhs, c.label)); break;
      case RelOp::LE: out.push_back(Constraint::sos_le(c.lhs, c.rhs, c.label)); break;
      case RelOp::EQ: out.push_back(Constraint::eq(c.lhs, c.rhs, c.label)); break;
    }
  }
  return out;
}

ProblemFile parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProblemFileError("/", e.what());
  }
  if (!j.is_object()) throw ProblemFileError("/", "expected a JSON object");
  check_keys(j, "", {"vars", "decvars", "constraints", "objective", "gsos",
                     "options"});

  ProblemFile pf;

  if (!j.contains("vars") || !j["vars"].is_array())
    throw ProblemFileError("/vars", "required field: array of variable names");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j["vars"].size(); ++i) {
    std::string where = "/vars/" + std::to_string(i);
    std::string name = name_entry(j["vars"][i], where);
    if (!seen.insert(name).second)
      throw ProblemFileError(where, "duplicate variable '" + name + "'");
    pf.vars.push_back(name);
  }

  if (j.contains("decvars")) {
    if (!j["decvars"].is_array())
      throw ProblemFileError("/decvars", "expected an array of names");
    std::set<std::string> dseen;
    for (std::size_t i = 0; i < j["decvars"].size(); ++i) {
      std::string where = "/decvars/" + std::to_string(i);
      std::string name = name_entry(j["decvars"][i], where);
      if (seen.count(name))
        throw ProblemFileError(where, "'" + name + "' is also listed in vars");
      if (!dseen.insert(name).second)
        throw ProblemFileError(where, "duplicate decision variable '" + name + "'");
      pf.decvars.push_back(name);
    }
  }

  if (!j.contains("constraints") || !j["constraints"].is_array())
    throw ProblemFileError("/constraints", "required field: array of constraints");
  for (std::size_t i = 0; i < j["constraints"].size(); ++i) {
    std::string where = "/constraints/" + std::to_string(i);
    const json& c = j["constraints"][i];
    if (!c.is_object()) throw ProblemFileError(where, "expected an object");
    check_keys(c, where, {"lhs", "rel", "rhs", "label"});
    if (!c.contains("lhs")) throw ProblemFileError(where + "/lhs", "required field");
    if (!c.contains("rel")) throw ProblemFileError(where + "/rel", "required field");
    if (!c.contains("rhs")) throw ProblemFileError(where + "/rhs", "required field");
    ConstraintSpec spec;
    spec.lhs = parse_expr(c["lhs"], where + "/lhs");
    spec.rhs = parse_expr(c["rhs"], where + "/rhs");
    if (!c["rel"].is_string())
      throw ProblemFileError(where + "/rel", "expected \">=\", \"<=\" or \"==\"");
    std::string rel = c["rel"].get<std::string>();
    if (rel == ">=") spec.rel = RelOp::GE;
    else if (rel == "<=") spec.rel = RelOp::LE;
    else if (rel == "==") spec.rel = RelOp::EQ;
    else
      throw ProblemFileError(where + "/rel",
                             "expected \">=\", \"<=\" or \"==\", got \"" + rel + "\"");
    if (c.contains("label")) {
      if (!c["label"].is_string())
        throw ProblemFileError(where + "/label", "expected a string");
      spec.label = c["label"].get<std::string>();
    }
    pf.constraints.push_back(std::move(spec));
  }

  if (j.contains("objective"))
    pf.objective = parse_expr(j["objective"], "/objective");

  if (j.contains("gsos")) {
    if (!j["gsos"].is_object())
      throw ProblemFileError("/gsos", "expected an object with field t");
    check_keys(j["gsos"], "/gsos", {"t"});
    if (!j["gsos"].contains("t"))
      throw ProblemFileError("/gsos/t", "required field");
    pf.gsos_t = name_entry(j["gsos"]["t"], "/gsos/t");
  }

  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) throw ProblemFileError("/options", "expected an object");
    check_keys(o, "/options",
               {"form", "simplify", "scaling", "checkfeas", "feastol", "minobj",
                "maxobj", "absbistol", "relbistol", "display"});
    auto bool_at = [&](const char* key) {
      if (!o[key].is_boolean())
        throw ProblemFileError(std::string("/options/") + key, "expected a boolean");
      return o[key].get<bool>();
    };
    auto num_at = [&](const char* key) {
      if (!o[key].is_number())
        throw ProblemFileError(std::string("/options/") + key, "expected a number");
      return o[key].get<double>();
    };
    if (o.contains("form")) {
      std::string f = o["form"].is_string() ? o["form"].get<std::string>() : "";
      if (f == "image") pf.options.form = FormKind::Image;
      else if (f == "kernel") pf.options.form = FormKind::Kernel;
      else throw ProblemFileError("/options/form", "expected \"image\" or \"kernel\"");
    }
    if (o.contains("checkfeas")) {
      std::string f =
          o["checkfeas"].is_string() ? o["checkfeas"].get<std::string>() : "";
      if (f == "off") pf.options.checkfeas = Options::CheckFeas::Off;
      else if (f == "fast") pf.options.checkfeas = Options::CheckFeas::Fast;
      else if (f == "full") pf.options.checkfeas = Options::CheckFeas::Full;
      else if (f == "both") pf.options.checkfeas = Options::CheckFeas::Both;
      else
        throw ProblemFileError("/options/checkfeas",
                               "expected \"off\", \"fast\", \"full\" or \"both\"");
    }
    if (o.contains("simplify")) pf.options.simplify = bool_at("simplify");
    if (o.contains("scaling")) pf.options.scaling = bool_at("scaling");
    if (o.contains("display")) pf.options.display = bool_at("display");
    if (o.contains("feastol")) pf.options.feastol = num_at("feastol");
    if (o.contains("minobj")) pf.options.minobj = num_at("minobj");
    if (o.contains("maxobj")) pf.options.maxobj = num_at("maxobj");
    if (o.contains("absbistol")) pf.options.absbistol = num_at("absbistol");
    if (o.contains("relbistol")) pf.options.relbistol = num_at("relbistol");
  }

  return pf;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemFileError("/", "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

std::string render_problem_file(const ProblemFile& pf) {
  ordered_json j;
  j["vars"] = pf.vars;
  if (!pf.decvars.empty()) j["decvars"] = pf.decvars;
  j["constraints"] = ordered_json::array();
  for (const auto& c : pf.constraints) {
    ordered_json jc;
    jc["lhs"] = c.lhs.str();
    jc["rel"] = rel_op_str(c.rel);
    jc["rhs"] = c.rhs.str();
    if (!c.label.empty()) jc["label"] = c.label;
    j["constraints"].push_back(std::move(jc));
  }
  if (pf.objective) j["objective"] = pf.objective->str();
  if (pf.gsos_t) j["gsos"] = ordered_json{{"t", *pf.gsos_t}};
  ordered_json o;
  if (pf.options.form)
    o["form"] = *pf.options.form == FormKind::Image ? "image" : "kernel";
  if (pf.options.simplify) o["simplify"] = *pf.options.simplify;
  if (pf.options.scaling) o["scaling"] = *pf.options.scaling;
  if (pf.options.checkfeas) o["checkfeas"] = checkfeas_str(*pf.options.checkfeas);
  if (pf.options.feastol) o["feastol"] = *pf.options.feastol;
  if (pf.options.minobj) o["minobj"] = *pf.options.minobj;
  if (pf.options.maxobj) o["maxobj"] = *pf.options.maxobj;
  if (pf.options.absbistol) o["absbistol"] = *pf.options.absbistol;
  if (pf.options.relbistol) o["relbistol"] = *pf.options.relbistol;
  if (pf.options.display) o["display"] = *pf.options.display;
  if (!o.empty()) j["options"] = std::move(o);
  return j.dump(2) + "\n";
}

GOptions apply_overrides(GOptions base, const OptionOverrides& o) {
  if (o.form) base.form = *o.form;
  if (o.simplify) base.simplify = *o.simplify;
  if (o.scaling) base.scaling = *o.scaling;
  if (o.checkfeas) base.checkfeas = *o.checkfeas;
  if (o.feastol) base.feastol = *o.feastol;
  if (o.minobj) base.minobj = *o.minobj;
  if (o.maxobj) base.maxobj = *o.maxobj;
  if (o.absbistol) base.absbistol = *o.absbistol;
  if (o.relbistol) base.relbistol = *o.relbistol;
  if (o.display) base.display = *o.display;
  return base;
}

ReportDocument make_report(const std::vector<Constraint>& constraints,
                           const SolveResult& result, double feastol) {
  ReportDocument doc;
  doc.feas = result.feas;
  doc.status = status_str(result.diagnostics.status);
  doc.obj = result.obj;
  doc.tbnds = result.tbnds;
  doc.dopt = result.dopt;
  std::vector<CheckItem> items = certificate_summary(result, feastol);
  for (std::size_t i = 0; i < result.sossol.size(); ++i) {
    const auto& cc = result.sossol[i];
    ReportConstraintRow row;
    row.index = cc.constraint_index + 1;
    const Constraint& con = constraints.at(cc.constraint_index);
    row.kind = con.kind() == ConstraintKind::EQ ? "eq" : "sos";
    row.label = con.label();
    row.basis_size = static_cast<int>(cc.z.size());
    row.min_eig = items[i].min_eig;
    row.residual = items[i].match_residual;
    doc.constraints.push_back(std::move(row));
  }
  doc.check_mode = result.diagnostics.check.mode;
  doc.check_performed = result.diagnostics.check.performed;
  doc.check_pass = result.diagnostics.check.pass;
  doc.iterations = result.diagnostics.iterations;
  doc.bisection_probes = result.diagnostics.bisection_probes;
  doc.solve_seconds = result.diagnostics.solve_seconds;
  return doc;
}

ReportDocument make_issos_report(const Polynomial& p, const IssosResult& result,
                                 double feastol) {
  ReportDocument doc;
  doc.is_issos = true;
  doc.feas = result.feas;
  doc.status = status_str(result.diagnostics.status);
  if (result.feas) {
    ReportConstraintRow row;
    row.index = 1;
    row.kind = "sos";
    row.basis_size = static_cast<int>(result.z.size());
    if (result.Q.rows() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(result.Q,
                                                         Eigen::EigenvaluesOnly);
      row.min_eig = eig.eigenvalues().minCoeff();
    }
    row.residual = (p - gram_polynomial(result.z, result.Q)).coeff_inf_norm();
    doc.constraints.push_back(std::move(row));
    for (const auto& f : result.f) doc.factors.push_back(f.str());
  }
  doc.check_mode = result.diagnostics.check.mode;
  doc.check_performed = result.diagnostics.check.performed;
  doc.check_pass = result.diagnostics.check.pass;
  doc.iterations = result.diagnostics.iterations;
  doc.solve_seconds = result.diagnostics.solve_seconds;
  (void)feastol;
  return doc;
}

std::string render_report_text(const ReportDocument& doc) {
  std::ostringstream out;
  out << "feasible: " << (doc.feas ? "yes" : "no") << "\n";
  out << "status: " << doc.status << " (" << doc.iterations << " iterations, "
      << format_double(doc.solve_seconds) << " s)\n";
  if (!doc.is_issos) {
    out << "objective: "
        << (std::isfinite(doc.obj) ? format_double(doc.obj) : "inf") << "\n";
  }
  if (doc.tbnds)
    out << "t bounds: [" << format_double(doc.tbnds->first) << ", "
        << format_double(doc.tbnds->second) << "]\n";
  if (doc.bisection_probes > 0)
    out << "bisection probes: " << doc.bisection_probes << "\n";
  if (!doc.dopt.empty()) {
    out << "decision variables:\n";
    for (const auto& [name, value] : doc.dopt)
      out << "  " << name << " = " << format_double(value) << "\n";
  }
  if (!doc.constraints.empty()) {
    out << "constraints:\n";
    for (const auto& row : doc.constraints) {
      out << "  " << row.index << " " << row.kind
          << "  basis " << row.basis_size
          << "  min eig " << format_double(row.min_eig)
          << "  residual " << format_double(row.residual);
      if (!row.label.empty()) out << "  " << row.label;
      out << "\n";
    }
  }
  if (!doc.factors.empty()) {
    out << "sos factors:\n";
    for (const auto& f : doc.factors) out << "  " << f << "\n";
  }
  if (doc.check_performed)
    out << "check (" << doc.check_mode << "): "
        << (doc.check_pass ? "passed" : "FAILED") << "\n";
  return out.str();
}

std::string render_report_json(const ReportDocument& doc) {
  ordered_json j;
  j["feasible"] = doc.feas;
  j["status"] = doc.status;
  if (!doc.is_issos) {
    if (std::isfinite(doc.obj)) j["objective"] = doc.obj;
    else j["objective"] = nullptr;
  }
  if (doc.tbnds) j["tbnds"] = {doc.tbnds->first, doc.tbnds->second};
  if (doc.bisection_probes > 0) j["bisection_probes"] = doc.bisection_probes;
  j["dopt"] = ordered_json::array();
  for (const auto& [name, value] : doc.dopt)
    j["dopt"].push_back(ordered_json{{"name", name}, {"value", value}});
  j["constraints"] = ordered_json::array();
  for (const auto& row : doc.constraints) {
    ordered_json jr;
    jr["index"] = row.index;
    jr["kind"] = row.kind;
    if (!row.label.empty()) jr["label"] = row.label;
    jr["basis_size"] = row.basis_size;
    jr["min_eig"] = row.min_eig;
    jr["residual"] = row.residual;
    j["constraints"].push_back(std::move(jr));
  }
  if (doc.is_issos) j["factors"] = doc.factors;
  j["check"] = ordered_json{{"mode", doc.check_mode},
                            {"performed", doc.check_performed},
                            {"pass", doc.check_pass}};
  j["iterations"] = doc.iterations;
  j["solve_seconds"] = doc.solve_seconds;
  return j.dump(2) + "\n";
}

}  // namespace sos
