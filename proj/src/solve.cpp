#include "soskit/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

namespace sos {

namespace {

std::map<std::string, Polynomial> dopt_substitution(
    const std::vector<std::pair<std::string, double>>& dopt) {
  std::map<std::string, Polynomial> subs;
  for (const auto& [name, value] : dopt) subs[name] = Polynomial(value);
  return subs;
}

void fill_diagnostics(Diagnostics& diag, const SdpEncoding& enc,
                      const ConicSolution& csol, double seconds) {
  diag.status = csol.status;
  diag.residuals = csol.residuals;
  diag.iterations = csol.iterations;
  diag.sdp_rows = enc.problem.num_rows();
  diag.sdp_cols = enc.problem.num_cols();
  diag.psd_dims.clear();
  for (const auto& blk : enc.problem.cones)
    if (blk.kind == ConeBlock::Kind::Psd) diag.psd_dims.push_back(blk.dim);
  diag.certificate_residual = csol.certificate_residual;
  diag.solve_seconds = seconds;
  if (csol.status != SolveStatus::Optimal)
    diag.message = "solver stopped with status " + status_str(csol.status);
}

SolveResult infeasible_result(Diagnostics diag) {
  SolveResult res;
  res.feas = false;
  res.obj = std::numeric_limits<double>::infinity();
  res.diagnostics = std::move(diag);
  return res;
}

// encode, solve, extract, and verify one compiled program
SolveResult solve_with_program(const CompiledProgram& prog,
                               const std::vector<Constraint>& constraints,
                               const std::vector<std::string>& x,
                               const Options& opts) {
  SolveResult res;
  SdpEncoding enc =
      opts.form == FormKind::Image ? image_form(prog) : kernel_form(prog);

  auto t0 = std::chrono::steady_clock::now();
  ConicSolution csol = solve_conic(enc.problem, opts.solver);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  fill_diagnostics(res.diagnostics, enc, csol, seconds);

  if (csol.status == SolveStatus::Optimal) {
    Certificate cert = extract_certificate(prog, enc, csol);
    res.obj = prog.objective_constant;
    for (std::size_t i = 0; i < prog.d.size(); ++i) {
      res.obj += prog.objective[static_cast<int>(i)] * cert.d[i];
      res.dopt.emplace_back(prog.d[i], cert.d[i]);
    }
    std::map<int, int> sos_of_constraint;
    for (std::size_t k = 0; k < prog.sos.size(); ++k)
      sos_of_constraint[prog.sos[k].constraint_index] = static_cast<int>(k);
    auto subs = dopt_substitution(res.dopt);
    for (int ci = 0; ci < static_cast<int>(constraints.size()); ++ci) {
      ConstraintCertificate cc;
      cc.constraint_index = ci;
      cc.p = constraints[ci].one_side().substitute(subs);
      auto it = sos_of_constraint.find(ci);
      if (it != sos_of_constraint.end()) {
        cc.z = prog.sos[it->second].z;
        cc.Q = cert.Q[it->second];
      } else {
        cc.Q = Eigen::MatrixXd(0, 0);
      }
      res.sossol.push_back(std::move(cc));
    }
  }

  res.diagnostics.check =
      check_feasibility(constraints, x, res, opts.checkfeas, opts.feastol);
  res.feas =
      csol.status == SolveStatus::Optimal && res.diagnostics.check.pass;
  if (!res.feas) {
    res.obj = std::numeric_limits<double>::infinity();
    res.dopt.clear();
    res.sossol.clear();
    if (csol.status == SolveStatus::Optimal)
      res.diagnostics.message = "solution rejected by the feasibility check";
  }
  return res;
}

SolveResult sosopt_impl(const std::vector<Constraint>& constraints,
                        const std::vector<std::string>& x,
                        const Polynomial& objective, const Options& opts,
                        const std::vector<std::string>& decvars,
                        const std::vector<std::vector<Monomial>>* fixed_bases) {
  CompileOptions copts;
  copts.simplify = opts.simplify;
  copts.scaling = opts.scaling;
  copts.fixed_bases = fixed_bases;
  try {
    CompiledProgram prog =
        compile_program(constraints, x, objective, copts, decvars);
    return solve_with_program(prog, constraints, x, opts);
  } catch (const OddDegreeError& e) {
    Diagnostics diag;
    diag.status = SolveStatus::PrimalInfeasible;
    diag.message = e.what();
    return infeasible_result(std::move(diag));
  } catch (const StructuralInfeasibleError& e) {
    Diagnostics diag;
    diag.status = SolveStatus::PrimalInfeasible;
    diag.message = e.what();
    return infeasible_result(std::move(diag));
  }
}

}  // namespace

std::string checkfeas_str(Options::CheckFeas mode) {
  switch (mode) {
    case Options::CheckFeas::Off: return "off";
    case Options::CheckFeas::Fast: return "fast";
    case Options::CheckFeas::Full: return "full";
    case Options::CheckFeas::Both: return "both";
  }
  return "unknown";
}

SolveResult sosopt(const std::vector<Constraint>& constraints,
                   const std::vector<std::string>& x,
                   const Polynomial& objective, const Options& opts,
                   const std::vector<std::string>& decvars) {
  return sosopt_impl(constraints, x, objective, opts, decvars, nullptr);
}

IssosResult issos(const Polynomial& p, const Options& opts) {
  std::set<std::string> vars = p.variables();
  std::vector<std::string> x(vars.begin(), vars.end());
  std::vector<Constraint> cons = {Constraint::sos_ge(p, Polynomial())};
  SolveResult r = sosopt(cons, x, Polynomial(), opts);
  IssosResult out;
  out.feas = r.feas;
  out.diagnostics = r.diagnostics;
  if (r.feas && !r.sossol.empty()) {
    out.z = r.sossol[0].z;
    out.Q = r.sossol[0].Q;
    out.f = sos_factors(out.z, out.Q);
  }
  return out;
}

SolveResult gsosopt(const std::vector<Constraint>& constraints,
                    const std::vector<std::string>& x, const std::string& t,
                    const GOptions& opts,
                    const std::vector<std::string>& decvars) {
  if (!is_valid_var_name(t))
    throw std::invalid_argument("invalid bisection variable name: '" + t + "'");
  if (std::find(x.begin(), x.end(), t) != x.end())
    throw std::invalid_argument(
        "'" + t + "' cannot be both the bisection variable and independent");
  if (opts.maxobj < opts.minobj)
    throw std::invalid_argument("maxobj must be >= minobj");
  if (opts.absbistol <= 0.0 || opts.relbistol <= 0.0)
    throw std::invalid_argument("bisection tolerances must be positive");

  std::set<std::string> xt(x.begin(), x.end());
  xt.insert(t);
  std::set<std::string> tonly = {t};

  // validate bilinearity and collect the union bases so every probe matches
  // coefficients against the same monomial sets
  std::set<std::string> dset;
  std::vector<std::vector<Monomial>> bases;
  try {
    for (const auto& con : constraints) {
      AffineDecomposition dec = affine_split(con.one_side(), xt);
      MonomialSet support;
      auto take = [&](const Polynomial& p) {
        for (const auto& [mono, coefv] : p.terms()) {
          (void)coefv;
          auto [tpart, xpart] = mono.split(tonly);
          if (tpart.degree() > 1)
            throw NotAffineError(
                "generalized constraints must be bilinear in '" + t +
                "' and the decision variables");
          support.insert(xpart);
        }
      };
      take(dec.base);
      for (const auto& [name, poly] : dec.coeffs) {
        dset.insert(name);
        take(poly);
      }
      if (con.kind() == ConstraintKind::SOS) {
        std::vector<Monomial> z = candidate_basis(support);
        if (opts.simplify) z = simplify_basis(z, support);
        bases.push_back(std::move(z));
      }
    }
  } catch (const OddDegreeError& e) {
    Diagnostics diag;
    diag.status = SolveStatus::PrimalInfeasible;
    diag.message = e.what();
    return infeasible_result(std::move(diag));
  }

  std::vector<std::string> dvec;
  if (decvars.empty()) {
    dvec.assign(dset.begin(), dset.end());
  } else {
    for (const auto& name : decvars)
      if (name != t) dvec.push_back(name);
    for (const auto& name : dset)
      if (std::find(dvec.begin(), dvec.end(), name) == dvec.end())
        throw std::invalid_argument(
            "variable '" + name +
            "' appears in the program but is not in the declared decision "
            "variable list");
  }

  const Options base_opts(opts);
  double total_seconds = 0.0;
  int probes = 0;
  double lo = opts.minobj, hi = opts.maxobj;

  auto probe = [&](double tau, SolveResult& out) {
    std::map<std::string, Polynomial> sub = {{t, Polynomial(tau)}};
    std::vector<Constraint> pc;
    pc.reserve(constraints.size());
    for (const auto& con : constraints) {
      Polynomial ps = con.one_side().substitute(sub);
      pc.push_back(con.kind() == ConstraintKind::EQ
                       ? Constraint::eq(ps, Polynomial(), con.label())
                       : Constraint::sos_ge(ps, Polynomial(), con.label()));
    }
    out = sosopt_impl(pc, x, Polynomial(), base_opts, dvec, &bases);
    ++probes;
    total_seconds += out.diagnostics.solve_seconds;
    return out.feas;
  };
  auto log = [&](double tau, bool ok) {
    if (opts.display)
      std::printf("gsosopt %3d: t = %-22.16g %-10s bracket [%.16g, %.16g]\n",
                  probes, tau, ok ? "feasible" : "infeasible", lo, hi);
  };

  auto finalize = [&](SolveResult res, double tlb, double tub) {
    res.feas = true;
    res.obj = tub;
    res.tbnds = std::make_pair(tlb, tub);
    res.diagnostics.bisection_probes = probes;
    res.diagnostics.solve_seconds = total_seconds;
    return res;
  };

  SolveResult r_hi;
  bool ok_hi = probe(opts.maxobj, r_hi);
  log(opts.maxobj, ok_hi);
  if (!ok_hi) {
    SolveResult res = infeasible_result(r_hi.diagnostics);
    res.diagnostics.bisection_probes = probes;
    res.diagnostics.solve_seconds = total_seconds;
    if (res.diagnostics.message.empty())
      res.diagnostics.message = "infeasible at maxobj";
    return res;
  }
  if (opts.minobj == opts.maxobj) return finalize(std::move(r_hi), lo, hi);

  SolveResult r_lo;
  bool ok_lo = probe(opts.minobj, r_lo);
  log(opts.minobj, ok_lo);
  if (ok_lo) return finalize(std::move(r_lo), opts.minobj, opts.minobj);

  SolveResult best = std::move(r_hi);
  while (hi - lo > opts.absbistol) {
    double mid = lo + (hi - lo) / 2.0;
    SolveResult r;
    bool ok = probe(mid, r);
    if (ok) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
    log(mid, ok);
  }
  return finalize(std::move(best), lo, hi);
}

PcontainResult pcontain(const Polynomial& p, const Polynomial& g,
                        const std::vector<Monomial>& z_s,
                        const GOptions& opts) {
  std::set<std::string> xset = p.variables();
  for (const auto& v : g.variables()) xset.insert(v);
  for (const auto& m : z_s) m.collect_variables(xset);

  std::string tname = "t";
  while (xset.count(tname)) tname += "_";
  std::string sprefix = "s";
  auto taken = [&](const std::string& prefix) {
    for (const auto& v : xset)
      if (v.rfind(prefix + "_", 0) == 0) return true;
    return false;
  };
  while (taken(sprefix)) sprefix += "_";

  SosDecVar s = sos_decision_var(sprefix, z_s);
  Polynomial tv = Polynomial::var(tname);
  std::vector<Constraint> cons = {
      Constraint::sos_ge(s.poly, Polynomial(), "multiplier"),
      Constraint::sos_ge(tv * s.poly + g * s.poly - p, Polynomial(),
                         "containment"),
  };
  std::vector<std::string> xv(xset.begin(), xset.end());

  PcontainResult out;
  out.details = gsosopt(cons, xv, tname, opts);
  out.feas = out.details.feas;
  if (out.feas && out.details.tbnds) {
    out.beta_bounds = {-out.details.tbnds->second, -out.details.tbnds->first};
    auto subs = dopt_substitution(out.details.dopt);
    out.multiplier = s.poly.substitute(subs);
  } else {
    out.beta_bounds = {-std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
  }
  return out;
}

std::vector<CheckItem> certificate_summary(const SolveResult& result,
                                           double feastol) {
  std::vector<CheckItem> items;
  for (const auto& cc : result.sossol) {
    CheckItem item;
    item.constraint_index = cc.constraint_index;
    Polynomial diff = cc.p - gram_polynomial(cc.z, cc.Q);
    item.match_residual = diff.coeff_inf_norm();
    item.match_floor = feastol * std::max(1.0, cc.p.coeff_inf_norm());
    double qnorm = 0.0, mineig = 0.0;
    if (cc.Q.rows() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cc.Q,
                                                         Eigen::EigenvaluesOnly);
      mineig = eig.eigenvalues().minCoeff();
      qnorm = eig.eigenvalues().cwiseAbs().maxCoeff();
    }
    item.min_eig = mineig;
    item.eig_floor = feastol * (1.0 + qnorm);
    item.pass =
        mineig >= -item.eig_floor && item.match_residual <= item.match_floor;
    items.push_back(std::move(item));
  }
  return items;
}

CheckReport check_feasibility(const std::vector<Constraint>& constraints,
                              const std::vector<std::string>& x,
                              const SolveResult& result,
                              Options::CheckFeas mode, double feastol) {
  (void)x;
  CheckReport rep;
  rep.mode = checkfeas_str(mode);
  if (mode == Options::CheckFeas::Off) {
    rep.performed = false;
    rep.pass = true;
    return rep;
  }
  rep.performed = true;
  rep.fast_pass = result.diagnostics.status == SolveStatus::Optimal;

  bool full_pass = true;
  if (mode == Options::CheckFeas::Full || mode == Options::CheckFeas::Both) {
    auto subs = dopt_substitution(result.dopt);
    for (const auto& cc : result.sossol) {
      const Constraint& con = constraints.at(cc.constraint_index);
      CheckItem item;
      item.constraint_index = cc.constraint_index;
      Polynomial p = con.one_side().substitute(subs);
      if (con.kind() == ConstraintKind::EQ) {
        item.match_residual = p.coeff_inf_norm();
        item.match_floor = feastol;
        item.pass = item.match_residual <= item.match_floor;
        item.note = "equality residual";
      } else {
        Polynomial diff = p - gram_polynomial(cc.z, cc.Q);
        item.match_residual = diff.coeff_inf_norm();
        item.match_floor = feastol * std::max(1.0, p.coeff_inf_norm());
        double qnorm = 0.0, mineig = 0.0;
        if (cc.Q.rows() > 0) {
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
              cc.Q, Eigen::EigenvaluesOnly);
          mineig = eig.eigenvalues().minCoeff();
          qnorm = eig.eigenvalues().cwiseAbs().maxCoeff();
        }
        item.min_eig = mineig;
        item.eig_floor = feastol * (1.0 + qnorm);
        item.pass = mineig >= -item.eig_floor &&
                    item.match_residual <= item.match_floor;
        item.note = "Gram decomposition";
      }
      if (!item.pass) full_pass = false;
      rep.items.push_back(std::move(item));
    }
  }

  switch (mode) {
    case Options::CheckFeas::Fast: rep.pass = rep.fast_pass; break;
    case Options::CheckFeas::Full: rep.pass = full_pass; break;
    default: rep.pass = rep.fast_pass && full_pass; break;
  }
  return rep;
}

}  // namespace sos
