#include "soskit/sdpa.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

namespace sos {

namespace {

const double kSqrt2 = std::sqrt(2.0);

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// printed off-diagonal entry e with e * sqrt(2) == coord exactly; coord was
// itself produced by a multiplication with sqrt(2), so a match exists within
// a few ulps of coord / sqrt(2)
double offdiag_entry(double coord) {
  double e = coord / kSqrt2;
  if (e * kSqrt2 == coord) return e;
  double up = e, dn = e;
  for (int k = 0; k < 4; ++k) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    dn = std::nextafter(dn, -std::numeric_limits<double>::infinity());
    if (up * kSqrt2 == coord) return up;
    if (dn * kSqrt2 == coord) return dn;
  }
  return e;
}

// emit all entries of matrix k for the coordinate vector v (one row of A or
// the negated cost), skipping zeros
void emit_matrix(std::string& out, int k, const ConicProblem& prob,
                 const Eigen::VectorXd& v) {
  for (std::size_t bi = 0; bi < prob.cones.size(); ++bi) {
    const ConeBlock& blk = prob.cones[bi];
    if (blk.kind == ConeBlock::Kind::Nonneg) {
      for (int i = 0; i < blk.dim; ++i) {
        double a = v[blk.offset + i];
        if (a == 0.0) continue;
        out += std::to_string(k) + " " + std::to_string(bi + 1) + " " +
               std::to_string(i + 1) + " " + std::to_string(i + 1) + " " +
               num(a) + "\n";
      }
    } else {
      int idx = blk.offset;
      for (int i = 0; i < blk.dim; ++i)
        for (int j = i; j < blk.dim; ++j, ++idx) {
          double a = v[idx];
          if (a == 0.0) continue;
          double e = i == j ? a : offdiag_entry(a);
          out += std::to_string(k) + " " + std::to_string(bi + 1) + " " +
                 std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
                 num(e) + "\n";
        }
    }
  }
}

}  // namespace

std::string to_sdpa_sparse(const ConicProblem& prob) {
  const int m = prob.num_rows();
  std::string out;
  out += std::to_string(m) + "\n";
  out += std::to_string(prob.cones.size()) + "\n";
  for (std::size_t bi = 0; bi < prob.cones.size(); ++bi) {
    if (bi) out += " ";
    const ConeBlock& blk = prob.cones[bi];
    out += std::to_string(blk.kind == ConeBlock::Kind::Nonneg ? -blk.dim
                                                              : blk.dim);
  }
  out += "\n";
  for (int i = 0; i < m; ++i) {
    if (i) out += " ";
    out += num(prob.b[i]);
  }
  out += "\n";

  emit_matrix(out, 0, prob, -prob.c);
  Eigen::MatrixXd Ad(prob.A);
  for (int k = 0; k < m; ++k)
    emit_matrix(out, k + 1, prob, Ad.row(k).transpose());
  return out;
}

ConicProblem parse_sdpa_sparse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](bool allow_comment) -> std::string {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (allow_comment && (line[0] == '*' || line[0] == '"')) continue;
      return line;
    }
    throw std::runtime_error("sdpa parse: unexpected end of input");
  };

  auto parse_int = [](const std::string& s, const char* what) {
    std::istringstream ss(s);
    long long v = 0;
    if (!(ss >> v)) throw std::runtime_error(std::string("sdpa parse: bad ") + what);
    std::string rest;
    if (ss >> rest) throw std::runtime_error(std::string("sdpa parse: trailing data after ") + what);
    return v;
  };

  const long long m = parse_int(next_line(true), "constraint count");
  const long long nblocks = parse_int(next_line(false), "block count");
  if (m < 0 || nblocks < 0) throw std::runtime_error("sdpa parse: negative count");

  ConicProblem prob;
  {
    std::istringstream ss(nblocks > 0 ? next_line(false) : std::string());
    for (long long i = 0; i < nblocks; ++i) {
      long long sz = 0;
      if (!(ss >> sz) || sz == 0)
        throw std::runtime_error("sdpa parse: bad block size list");
      if (sz < 0)
        prob.add_block(ConeBlock::Kind::Nonneg, static_cast<int>(-sz));
      else
        prob.add_block(ConeBlock::Kind::Psd, static_cast<int>(sz));
    }
  }

  prob.b.setZero(m);
  if (m > 0) {
    std::istringstream ss(next_line(false));
    for (long long i = 0; i < m; ++i)
      if (!(ss >> prob.b[i]))
        throw std::runtime_error("sdpa parse: bad objective vector");
  }

  const int n = prob.total_vlen();
  prob.c.setZero(n);
  std::vector<Eigen::Triplet<double>> trips;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    long long k, blk, i, j;
    double v;
    if (!(ss >> k >> blk >> i >> j >> v))
      throw std::runtime_error("sdpa parse: bad entry line: " + line);
    if (k < 0 || k > m || blk < 1 || blk > static_cast<long long>(prob.cones.size()))
      throw std::runtime_error("sdpa parse: entry index out of range: " + line);
    const ConeBlock& cb = prob.cones[blk - 1];
    if (i < 1 || j < i || j > cb.dim)
      throw std::runtime_error("sdpa parse: entry position out of range: " + line);
    int col;
    double coord;
    if (cb.kind == ConeBlock::Kind::Nonneg) {
      if (i != j)
        throw std::runtime_error("sdpa parse: off-diagonal entry in a diagonal block: " + line);
      col = cb.offset + static_cast<int>(i) - 1;
      coord = v;
    } else {
      int ii = static_cast<int>(i) - 1, jj = static_cast<int>(j) - 1;
      col = cb.offset + ii * cb.dim - ii * (ii - 1) / 2 + (jj - ii);
      coord = i == j ? v : v * kSqrt2;
    }
    if (k == 0)
      prob.c[col] = -coord;
    else
      trips.emplace_back(static_cast<int>(k) - 1, col, coord);
  }
  prob.A.resize(m, n);
  prob.A.setFromTriplets(trips.begin(), trips.end());
  return prob;
}

}  // namespace sos
