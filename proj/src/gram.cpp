#include "soskit/gram.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>

namespace sos {

namespace {

int svec_index(int i, int j, int n) {
  return i * n - i * (i - 1) / 2 + (j - i);
}

void place_sym(Eigen::MatrixXd& M, int i, int j, double contribution) {
  // adds `contribution` to the coefficient of z_i z_j produced by z'Mz
  if (i == j)
    M(i, i) += contribution;
  else {
    M(i, j) += 0.5 * contribution;
    M(j, i) += 0.5 * contribution;
  }
}

}  // namespace

MonomialSet x_support(const AffineDecomposition& dec) {
  MonomialSet support;
  for (const auto& [m, c] : dec.base.terms()) support.insert(m);
  for (const auto& [name, poly] : dec.coeffs)
    for (const auto& [m, c] : poly.terms()) support.insert(m);
  return support;
}

std::vector<Monomial> candidate_basis(const MonomialSet& support) {
  if (support.empty()) return {};
  int dmin = support.begin()->degree();
  int dmax = support.rbegin()->degree();
  if (dmax % 2 != 0)
    throw OddDegreeError("maximum support degree " + std::to_string(dmax) +
                         " is odd; no sum of squares exists");
  std::set<std::string> var_set;
  for (const auto& m : support) m.collect_variables(var_set);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::set<int> degrees;
  for (int d = (dmin + 1) / 2; d <= dmax / 2; ++d) degrees.insert(d);
  return monomials(vars, degrees);
}

std::vector<Monomial> simplify_basis(const std::vector<Monomial>& z,
                                     const MonomialSet& support) {
  const int n = static_cast<int>(z.size());
  std::vector<char> retained(n, 1);
  std::vector<std::vector<Monomial>> prod(n, std::vector<Monomial>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) prod[i][j] = z[i] * z[j];
  auto product = [&](int i, int j) -> const Monomial& {
    return i <= j ? prod[i][j] : prod[j][i];
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = n - 1; i >= 0; --i) {  // descending graded order
      if (!retained[i]) continue;
      const Monomial& sq = prod[i][i];
      bool in_support = support.count(sq) != 0;
      // the diagonal entry Q_ii surfaces only at 2a_i; if no retained pair
      // can also produce 2a_i, a missing support monomial forces Q_ii = 0
      bool diag_ok = in_support;
      if (!diag_ok) {
        for (int j = 0; j < n && !diag_ok; ++j) {
          if (!retained[j] || j == i) continue;
          for (int k = j + 1; k < n; ++k) {
            if (!retained[k] || k == i) continue;
            if (prod[j][k] == sq) {
              diag_ok = true;
              break;
            }
          }
        }
      }
      // z_i must help produce some support monomial through a retained partner
      bool covers = in_support;
      if (!covers) {
        for (int j = 0; j < n; ++j) {
          if (!retained[j] || j == i) continue;
          if (support.count(product(i, j))) {
            covers = true;
            break;
          }
        }
      }
      if (!(diag_ok && covers)) {
        retained[i] = 0;
        changed = true;
      }
    }
  }

  std::vector<Monomial> out;
  for (int i = 0; i < n; ++i)
    if (retained[i]) out.push_back(z[i]);
  return out;
}

namespace {

// shared row construction for one constraint's affine decomposition
std::vector<MatchRow> build_rows(
    const AffineDecomposition& dec, const std::vector<Monomial>& z,
    double scale, const std::map<std::string, int>& d_index,
    int constraint_index) {
  std::map<Monomial, std::vector<std::pair<int, int>>, MonomialGrlexLess> pairs;
  for (int i = 0; i < static_cast<int>(z.size()); ++i)
    for (int j = i; j < static_cast<int>(z.size()); ++j)
      pairs[z[i] * z[j]].emplace_back(i, j);

  MonomialSet betas = x_support(dec);
  for (const auto& [beta, pr] : pairs) betas.insert(beta);

  std::vector<MatchRow> rows;
  for (const Monomial& beta : betas) {
    MatchRow row;
    row.beta = beta;
    auto it = pairs.find(beta);
    if (it != pairs.end()) row.pairs = it->second;
    row.rhs = dec.base.coeff(beta) / scale;
    for (const auto& [name, poly] : dec.coeffs) {
      double c = poly.coeff(beta);
      if (c != 0.0) row.dcoef.emplace_back(d_index.at(name), c / scale);
    }
    if (row.pairs.empty() && row.dcoef.empty()) {
      if (row.rhs != 0.0)
        throw StructuralInfeasibleError(
            "constraint " + std::to_string(constraint_index + 1) +
            ": monomial " + beta.str() +
            " has coefficient " + format_double(row.rhs * scale) +
            " but no Gram pair or decision variable can produce it");
      continue;  // trivial 0 == 0
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

CompiledProgram compile_program(const std::vector<Constraint>& constraints,
                                const std::vector<std::string>& x_vars,
                                const Polynomial& objective,
                                const CompileOptions& opts,
                                const std::vector<std::string>& decvars) {
  for (const auto& v : x_vars)
    if (!is_valid_var_name(v))
      throw std::invalid_argument("invalid independent variable name: '" + v + "'");
  std::set<std::string> x(x_vars.begin(), x_vars.end());
  if (x.size() != x_vars.size())
    throw std::invalid_argument("duplicate independent variable");

  std::set<std::string> inferred;
  auto collect_d = [&](const Polynomial& p) {
    for (const auto& name : p.variables())
      if (!x.count(name)) inferred.insert(name);
  };
  for (const auto& con : constraints) collect_d(con.one_side());
  collect_d(objective);

  CompiledProgram prog;
  prog.x.assign(x.begin(), x.end());
  if (decvars.empty()) {
    prog.d.assign(inferred.begin(), inferred.end());
  } else {
    std::set<std::string> dset;
    for (const auto& name : decvars) {
      if (!is_valid_var_name(name))
        throw std::invalid_argument("invalid decision variable name: '" + name + "'");
      if (x.count(name))
        throw std::invalid_argument("'" + name +
                                    "' is listed as both independent and decision variable");
      if (!dset.insert(name).second)
        throw std::invalid_argument("duplicate decision variable '" + name + "'");
    }
    for (const auto& name : inferred)
      if (!dset.count(name))
        throw std::invalid_argument("variable '" + name +
                                    "' appears in the program but is not in the "
                                    "declared decision variable list");
    prog.d.assign(dset.begin(), dset.end());
  }

  std::map<std::string, int> d_index;
  for (int i = 0; i < static_cast<int>(prog.d.size()); ++i)
    d_index[prog.d[i]] = i;

  // objective: affine in d with constant coefficients
  AffineDecomposition obj = affine_split(objective, x);
  if (obj.base.degree() > 0)
    throw ObjectiveDependsOnXError(
        "objective must not involve the independent variables");
  prog.objective = Eigen::VectorXd::Zero(static_cast<int>(prog.d.size()));
  prog.objective_constant = obj.base.coeff(Monomial{});
  for (const auto& [name, poly] : obj.coeffs) {
    if (poly.degree() > 0)
      throw ObjectiveDependsOnXError(
          "objective must not involve the independent variables");
    prog.objective[d_index.at(name)] = poly.coeff(Monomial{});
  }

  for (int ci = 0; ci < static_cast<int>(constraints.size()); ++ci) {
    const Constraint& con = constraints[ci];
    AffineDecomposition dec = affine_split(con.one_side(), x);
    double scale = 1.0;
    if (opts.scaling) {
      double nrm = con.one_side().coeff_two_norm();
      if (nrm > 0.0) scale = nrm;
    }
    if (con.kind() == ConstraintKind::EQ) {
      CompiledEq eq;
      eq.constraint_index = ci;
      eq.scale = scale;
      eq.rows = build_rows(dec, {}, scale, d_index, ci);
      prog.eqs.push_back(std::move(eq));
    } else {
      CompiledSos cs;
      cs.constraint_index = ci;
      cs.scale = scale;
      if (opts.fixed_bases) {
        std::size_t k = prog.sos.size();
        if (k >= opts.fixed_bases->size())
          throw std::invalid_argument("fixed_bases is shorter than the number "
                                      "of SOS constraints");
        cs.z = (*opts.fixed_bases)[k];
      } else {
        MonomialSet support = x_support(dec);
        cs.z = candidate_basis(support);
        if (opts.simplify) cs.z = simplify_basis(cs.z, support);
      }
      cs.rows = build_rows(dec, cs.z, scale, d_index, ci);
      prog.sos.push_back(std::move(cs));
    }
  }
  return prog;
}

// ------------------------------------------------------------ image form

SdpEncoding image_form(const CompiledProgram& prog) {
  SdpEncoding enc;
  enc.form = FormKind::Image;
  enc.num_d = static_cast<int>(prog.d.size());

  ConicProblem& cp = enc.problem;
  if (enc.num_d > 0) {
    enc.dplus0 = cp.add_block(ConeBlock::Kind::Nonneg, 2 * enc.num_d);
    enc.dminus0 = enc.dplus0 + enc.num_d;
  }
  for (const auto& cs : prog.sos) {
    int dim = static_cast<int>(cs.z.size());
    enc.block_dim.push_back(dim);
    enc.block_col0.push_back(dim > 0 ? cp.add_block(ConeBlock::Kind::Psd, dim)
                                     : -1);
  }

  const int n = cp.total_vlen();
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> rhs;
  const double r2 = std::sqrt(2.0);

  auto add_d_terms = [&](int row, const MatchRow& mr) {
    for (const auto& [di, c] : mr.dcoef) {
      trips.emplace_back(row, enc.dplus0 + di, -c);
      trips.emplace_back(row, enc.dminus0 + di, c);
    }
  };

  for (std::size_t k = 0; k < prog.sos.size(); ++k) {
    const auto& cs = prog.sos[k];
    const int dim = enc.block_dim[k];
    for (const auto& mr : cs.rows) {
      int row = static_cast<int>(rhs.size());
      for (const auto& [i, j] : mr.pairs) {
        int col = enc.block_col0[k] + svec_index(i, j, dim);
        trips.emplace_back(row, col, i == j ? 1.0 : r2);
      }
      add_d_terms(row, mr);
      rhs.push_back(mr.rhs);
    }
  }
  for (const auto& eq : prog.eqs)
    for (const auto& mr : eq.rows) {
      int row = static_cast<int>(rhs.size());
      add_d_terms(row, mr);
      rhs.push_back(mr.rhs);
    }

  const int m = static_cast<int>(rhs.size());
  cp.A.resize(m, n);
  cp.A.setFromTriplets(trips.begin(), trips.end());
  cp.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), m);
  cp.c = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < enc.num_d; ++i) {
    cp.c[enc.dplus0 + i] = prog.objective[i];
    cp.c[enc.dminus0 + i] = -prog.objective[i];
  }
  return enc;
}

// ----------------------------------------------------------- kernel form

SdpEncoding kernel_form(const CompiledProgram& prog) {
  SdpEncoding enc;
  enc.form = FormKind::Kernel;
  enc.num_d = static_cast<int>(prog.d.size());

  // build Q0, D_i, N_l per constraint from the matching rows
  enc.Q0.resize(prog.sos.size());
  enc.D.resize(prog.sos.size());
  enc.N.resize(prog.sos.size());
  enc.lam_offset.resize(prog.sos.size(), 0);
  int num_lambda = 0;
  for (std::size_t k = 0; k < prog.sos.size(); ++k) {
    const auto& cs = prog.sos[k];
    const int dim = static_cast<int>(cs.z.size());
    enc.block_dim.push_back(dim);
    enc.Q0[k] = Eigen::MatrixXd::Zero(dim, dim);
    enc.D[k].assign(enc.num_d, Eigen::MatrixXd::Zero(dim, dim));
    enc.lam_offset[k] = num_lambda;
    for (const auto& mr : cs.rows) {
      if (mr.pairs.empty()) continue;  // handled as an equality row below
      auto [ci, cj] = mr.pairs.front();  // canonical: lowest (i, j) row-major
      place_sym(enc.Q0[k], ci, cj, mr.rhs);
      for (const auto& [di, c] : mr.dcoef) place_sym(enc.D[k][di], ci, cj, c);
      for (std::size_t pi = 1; pi < mr.pairs.size(); ++pi) {
        Eigen::MatrixXd Nl = Eigen::MatrixXd::Zero(dim, dim);
        place_sym(Nl, mr.pairs[pi].first, mr.pairs[pi].second, 1.0);
        place_sym(Nl, ci, cj, -1.0);
        enc.N[k].push_back(std::move(Nl));
        ++num_lambda;
      }
    }
  }
  enc.num_lambda = num_lambda;

  // (d, lam) is the free dual multiplier y: rows 0..num_d are d, then the
  // lambdas block by block. The LMI lives in the dual slack s = c - A'y,
  // so c carries svec(Q0) and row i of A carries -svec(D_i) resp. -svec(N_l)
  // on the PSD columns of its block.
  std::vector<const MatchRow*> affine;  // rows with no Gram pair: a'd = -rhs
  for (const auto& cs : prog.sos)
    for (const auto& mr : cs.rows)
      if (mr.pairs.empty()) affine.push_back(&mr);
  for (const auto& eq : prog.eqs)
    for (const auto& mr : eq.rows) affine.push_back(&mr);

  ConicProblem& cp = enc.problem;
  const int eq0 =
      affine.empty()
          ? -1
          : cp.add_block(ConeBlock::Kind::Nonneg,
                         2 * static_cast<int>(affine.size()));
  for (std::size_t k = 0; k < prog.sos.size(); ++k)
    enc.block_col0.push_back(
        enc.block_dim[k] > 0
            ? cp.add_block(ConeBlock::Kind::Psd, enc.block_dim[k])
            : -1);

  const int n = cp.total_vlen();
  const int m = enc.num_d + num_lambda;
  std::vector<Eigen::Triplet<double>> trips;
  cp.c = Eigen::VectorXd::Zero(n);

  // each affine row becomes the slack pair s+ = t - a'd, s- = a'd - t
  for (std::size_t r = 0; r < affine.size(); ++r) {
    const MatchRow& mr = *affine[r];
    const double t = -mr.rhs;
    const int col = eq0 + 2 * static_cast<int>(r);
    cp.c[col] = t;
    cp.c[col + 1] = -t;
    for (const auto& [di, c] : mr.dcoef) {
      trips.emplace_back(di, col, c);
      trips.emplace_back(di, col + 1, -c);
    }
  }

  for (std::size_t k = 0; k < prog.sos.size(); ++k) {
    const int dim = enc.block_dim[k];
    if (dim == 0) continue;
    const int col0 = enc.block_col0[k];
    cp.c.segment(col0, svec_dim(dim)) = svec(enc.Q0[k]);
    for (int i = 0; i < enc.num_d; ++i) {
      Eigen::VectorXd sv = svec(enc.D[k][i]);
      for (int idx = 0; idx < sv.size(); ++idx)
        if (sv[idx] != 0.0) trips.emplace_back(i, col0 + idx, -sv[idx]);
    }
    for (std::size_t l = 0; l < enc.N[k].size(); ++l) {
      Eigen::VectorXd sv = svec(enc.N[k][l]);
      const int row = enc.num_d + enc.lam_offset[k] + static_cast<int>(l);
      for (int idx = 0; idx < sv.size(); ++idx)
        if (sv[idx] != 0.0) trips.emplace_back(row, col0 + idx, -sv[idx]);
    }
  }

  cp.A.resize(m, n);
  cp.A.setFromTriplets(trips.begin(), trips.end());
  cp.b = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < enc.num_d; ++i) cp.b[i] = -prog.objective[i];
  return enc;
}

Certificate extract_certificate(const CompiledProgram& prog,
                                const SdpEncoding& enc,
                                const ConicSolution& sol) {
  Certificate cert;
  cert.d.resize(enc.num_d);
  for (int i = 0; i < enc.num_d; ++i)
    cert.d[i] = enc.form == FormKind::Image
                    ? sol.x[enc.dplus0 + i] - sol.x[enc.dminus0 + i]
                    : sol.y[i];

  cert.Q.resize(prog.sos.size());
  for (std::size_t k = 0; k < prog.sos.size(); ++k) {
    const int dim = enc.block_dim[k];
    const double scale = prog.sos[k].scale;
    if (dim == 0) {
      cert.Q[k] = Eigen::MatrixXd(0, 0);
      continue;
    }
    if (enc.form == FormKind::Image) {
      cert.Q[k] =
          scale * smat(sol.x.segment(enc.block_col0[k], svec_dim(dim)));
    } else {
      Eigen::MatrixXd Q = enc.Q0[k];
      for (int i = 0; i < enc.num_d; ++i) Q += cert.d[i] * enc.D[k][i];
      for (std::size_t l = 0; l < enc.N[k].size(); ++l)
        Q += sol.y[enc.num_d + enc.lam_offset[k] + static_cast<int>(l)] *
             enc.N[k][l];
      cert.Q[k] = scale * Q;
    }
  }
  return cert;
}

Polynomial gram_polynomial(const std::vector<Monomial>& z,
                           const Eigen::MatrixXd& Q) {
  Polynomial p;
  const int n = static_cast<int>(z.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double c = (i == j) ? Q(i, i) : Q(i, j) + Q(j, i);
      if (c != 0.0) p.add_term(z[i] * z[j], c);
    }
  return p;
}

std::vector<Polynomial> sos_factors(const std::vector<Monomial>& z,
                                    const Eigen::MatrixXd& Q) {
  std::vector<Polynomial> out;
  if (Q.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  const auto& vals = eig.eigenvalues();
  double drop = 1e-14 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  for (int i = static_cast<int>(vals.size()) - 1; i >= 0; --i) {
    if (vals[i] <= drop) break;  // ascending order: remaining are smaller
    double s = std::sqrt(vals[i]);
    Polynomial f;
    for (int j = 0; j < static_cast<int>(z.size()); ++j) {
      double c = s * eig.eigenvectors()(j, i);
      if (c != 0.0) f.add_term(z[j], c);
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace sos
