#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "soskit/demos.hpp"
#include "soskit/problem_file.hpp"
#include "soskit/sdpa.hpp"

namespace {

// Values bound to the command-line flags. Only flags the user actually
// passed become overrides, so file options keep their rank between the
// defaults and the command line.
struct CommonFlags {
  std::string form;
  bool no_simplify = false;
  bool scaling = false;
  std::string checkfeas;
  double feastol = 0.0;
  double minobj = 0.0, maxobj = 0.0;
  double absbistol = 0.0, relbistol = 0.0;
  bool display = false;
  std::string out;
};

void add_compile_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--form", f.form, "Gram parameterization: image or kernel")
      ->check(CLI::IsMember({"image", "kernel"}));
  cmd->add_flag("--no-simplify", f.no_simplify,
                "keep the full candidate monomial basis");
  cmd->add_flag("--scaling", f.scaling,
                "rescale each constraint by its largest coefficient");
}

void add_solve_flags(CLI::App* cmd, CommonFlags& f) {
  add_compile_flags(cmd, f);
  cmd->add_option("--checkfeas", f.checkfeas,
                  "certificate check mode: off, fast, full, or both")
      ->check(CLI::IsMember({"off", "fast", "full", "both"}));
  cmd->add_option("--feastol", f.feastol, "certificate check tolerance");
  cmd->add_option("--minobj", f.minobj, "bisection lower bracket for t");
  cmd->add_option("--maxobj", f.maxobj, "bisection upper bracket for t");
  cmd->add_option("--absbistol", f.absbistol, "bisection stopping width");
  cmd->add_option("--relbistol", f.relbistol,
                  "bisection relative stopping width");
  cmd->add_flag("--display", f.display, "print one line per bisection probe");
}

sos::Options::CheckFeas parse_checkfeas(const std::string& v) {
  if (v == "off") return sos::Options::CheckFeas::Off;
  if (v == "fast") return sos::Options::CheckFeas::Fast;
  if (v == "full") return sos::Options::CheckFeas::Full;
  return sos::Options::CheckFeas::Both;
}

sos::OptionOverrides flag_overrides(const CLI::App* cmd,
                                    const CommonFlags& f) {
  sos::OptionOverrides o;
  if (cmd->count("--form"))
    o.form = f.form == "kernel" ? sos::FormKind::Kernel : sos::FormKind::Image;
  if (cmd->count("--no-simplify")) o.simplify = false;
  if (cmd->count("--scaling")) o.scaling = true;
  if (cmd->count("--checkfeas")) o.checkfeas = parse_checkfeas(f.checkfeas);
  if (cmd->count("--feastol")) o.feastol = f.feastol;
  if (cmd->count("--minobj")) o.minobj = f.minobj;
  if (cmd->count("--maxobj")) o.maxobj = f.maxobj;
  if (cmd->count("--absbistol")) o.absbistol = f.absbistol;
  if (cmd->count("--relbistol")) o.relbistol = f.relbistol;
  if (cmd->count("--display")) o.display = true;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << text;
}

// Solve a parsed problem (issos, gsosopt, or sosopt as its fields dictate),
// print the report, and map feasibility to the exit code.
int run_problem(const sos::ProblemFile& pf, const sos::OptionOverrides& flags,
                bool want_issos, const std::string& out_path,
                const sos::Demo* demo) {
  sos::GOptions gopts =
      sos::apply_overrides(sos::apply_overrides(sos::GOptions(), pf.options),
                           flags);
  std::vector<sos::Constraint> cons = pf.build_constraints();
  sos::ReportDocument doc;
  if (want_issos) {
    if (pf.gsos_t)
      throw std::invalid_argument("--issos does not apply to gsos problems");
    if (pf.objective)
      throw std::invalid_argument(
          "--issos does not apply to problems with an objective");
    if (!pf.decvars.empty())
      throw std::invalid_argument(
          "--issos requires a problem without decision variables");
    if (cons.size() != 1 || cons[0].kind() != sos::ConstraintKind::SOS)
      throw std::invalid_argument(
          "--issos requires exactly one SOS constraint");
    sos::Polynomial p = cons[0].one_side();
    sos::IssosResult res = sos::issos(p, gopts);
    doc = sos::make_issos_report(p, res, gopts.feastol);
  } else {
    sos::SolveResult res =
        pf.gsos_t ? sos::gsosopt(cons, pf.vars, *pf.gsos_t, gopts, pf.decvars)
                  : sos::sosopt(cons, pf.vars,
                                pf.objective.value_or(sos::Polynomial()),
                                gopts, pf.decvars);
    doc = sos::make_report(cons, res, gopts.feastol);
  }
  if (demo) {
    std::cout << "demo " << demo->name << ": " << demo->brief << "\n";
    std::cout << sos::demo_headline(*demo, doc) << "\n\n";
  }
  std::cout << sos::render_report_text(doc);
  if (!out_path.empty()) write_file(out_path, sos::render_report_json(doc));
  return doc.feas ? 0 : 1;
}

int run_export(const sos::ProblemFile& pf, const sos::OptionOverrides& flags,
               const std::string& out_path) {
  if (pf.gsos_t)
    throw std::invalid_argument(
        "gsos problems have no single SDP to export; fix t first");
  sos::GOptions gopts =
      sos::apply_overrides(sos::apply_overrides(sos::GOptions(), pf.options),
                           flags);
  sos::CompileOptions copts;
  copts.simplify = gopts.simplify;
  copts.scaling = gopts.scaling;
  sos::CompiledProgram prog = sos::compile_program(
      pf.build_constraints(), pf.vars,
      pf.objective.value_or(sos::Polynomial()), copts, pf.decvars);
  sos::SdpEncoding enc = gopts.form == sos::FormKind::Kernel
                             ? sos::kernel_form(prog)
                             : sos::image_form(prog);
  std::string text = sos::to_sdpa_sparse(enc.problem);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

void list_demos() {
  std::cout << "available demos:\n";
  for (const sos::Demo& d : sos::demo_catalog())
    std::printf("  %-17s %s\n", d.name.c_str(), d.brief.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soskit: sum-of-squares polynomial optimization"};
  app.require_subcommand(1);

  std::string solve_path;
  CommonFlags solve_flags;
  bool solve_issos = false;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve a problem file and print the report");
  solve->add_option("file", solve_path, "problem file")->required();
  add_solve_flags(solve, solve_flags);
  solve->add_flag("--issos", solve_issos,
                  "treat the single SOS constraint as an issos query");
  solve->add_option("--out,-o", solve_flags.out,
                    "also write the report as JSON to this file");

  std::string demo_name;
  CommonFlags demo_flags;
  CLI::App* demo = app.add_subcommand(
      "demo", "run a bundled demo (no name lists them)");
  demo->add_option("name", demo_name, "demo name");
  add_solve_flags(demo, demo_flags);
  demo->add_option("--out,-o", demo_flags.out,
                   "also write the report as JSON to this file");

  std::string export_path;
  CommonFlags export_flags;
  CLI::App* exp = app.add_subcommand(
      "export-sdpa", "compile a problem file to SDPA sparse format");
  exp->add_option("file", export_path, "problem file")->required();
  add_compile_flags(exp, export_flags);
  exp->add_option("--out,-o", export_flags.out,
                  "write the SDPA text here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string context;
  try {
    if (solve->parsed()) {
      context = solve_path;
      sos::ProblemFile pf = sos::load_problem_file(solve_path);
      return run_problem(pf, flag_overrides(solve, solve_flags), solve_issos,
                         solve_flags.out, nullptr);
    }
    if (demo->parsed()) {
      if (demo_name.empty()) {
        list_demos();
        return 0;
      }
      context = "demo '" + demo_name + "'";
      const sos::Demo* d = sos::find_demo(demo_name);
      if (!d) {
        std::cerr << "error: unknown demo '" << demo_name << "'\n";
        list_demos();
        return 2;
      }
      sos::ProblemFile pf = sos::parse_problem_text(d->text);
      return run_problem(pf, flag_overrides(demo, demo_flags), d->issos,
                         demo_flags.out, d);
    }
    context = export_path;
    sos::ProblemFile pf = sos::load_problem_file(export_path);
    return run_export(pf, flag_overrides(exp, export_flags),
                      export_flags.out);
  } catch (const sos::ProblemFileError& e) {
    std::cerr << "error: " << context << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << context << ": " << e.what() << "\n";
    return 2;
  }
}
