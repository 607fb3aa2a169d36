#include "soskit/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace sos {

bool is_valid_var_name(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
      position(pos) {}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(const std::string& name, int exp) {
  if (!is_valid_var_name(name))
    throw std::invalid_argument("invalid variable name: '" + name + "'");
  if (exp < 0) throw std::invalid_argument("negative exponent");
  Monomial m;
  if (exp > 0) m.exps_[name] = exp;
  return m;
}

int Monomial::degree() const {
  long long d = 0;
  for (const auto& [name, e] : exps_) d += e;
  if (d > std::numeric_limits<int>::max())
    throw std::overflow_error("monomial degree overflow");
  return static_cast<int>(d);
}

int Monomial::degree_in(const std::set<std::string>& vars) const {
  long long d = 0;
  for (const auto& [name, e] : exps_)
    if (vars.count(name)) d += e;
  return static_cast<int>(d);
}

int Monomial::exponent(const std::string& name) const {
  auto it = exps_.find(name);
  return it == exps_.end() ? 0 : it->second;
}

Monomial Monomial::operator*(const Monomial& rhs) const {
  Monomial out = *this;
  for (const auto& [name, e] : rhs.exps_) {
    long long sum = static_cast<long long>(out.exps_[name]) + e;
    if (sum > std::numeric_limits<int>::max())
      throw std::overflow_error("monomial exponent overflow");
    out.exps_[name] = static_cast<int>(sum);
  }
  return out;
}

Monomial Monomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative monomial power");
  Monomial out;
  for (const auto& [name, e] : exps_) {
    long long p = static_cast<long long>(e) * k;
    if (p > std::numeric_limits<int>::max())
      throw std::overflow_error("monomial exponent overflow");
    if (p > 0) out.exps_[name] = static_cast<int>(p);
  }
  return out;
}

std::pair<Monomial, Monomial> Monomial::split(
    const std::set<std::string>& vars) const {
  Monomial in, out;
  for (const auto& [name, e] : exps_)
    (vars.count(name) ? in : out).exps_[name] = e;
  return {in, out};
}

void Monomial::collect_variables(std::set<std::string>& out) const {
  for (const auto& [name, e] : exps_) out.insert(name);
}

double Monomial::evaluate(const std::map<std::string, double>& point) const {
  double v = 1.0;
  for (const auto& [name, e] : exps_) {
    auto it = point.find(name);
    if (it == point.end())
      throw std::invalid_argument("evaluate: unbound variable '" + name + "'");
    v *= std::pow(it->second, e);
  }
  return v;
}

std::string Monomial::str() const {
  if (exps_.empty()) return "1";
  std::string out;
  for (const auto& [name, e] : exps_) {
    if (!out.empty()) out += '*';
    out += name;
    if (e != 1) out += '^' + std::to_string(e);
  }
  return out;
}

bool Monomial::lex_less(const Monomial& a, const Monomial& b) {
  auto ia = a.exps_.begin(), ib = b.exps_.begin();
  while (ia != a.exps_.end() || ib != b.exps_.end()) {
    // exponent maps are name-sorted; a missing name means exponent 0, and the
    // earliest name where the exponents differ decides
    if (ib == b.exps_.end()) return false;
    if (ia == a.exps_.end()) return true;
    if (ia->first < ib->first) return false;
    if (ib->first < ia->first) return true;
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return false;
}

bool Monomial::grlex_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return lex_less(a, b);
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(double constant) {
  if (constant != 0.0) terms_[Monomial{}] = constant;
}

Polynomial Polynomial::var(const std::string& name) {
  return term(Monomial::var(name), 1.0);
}

Polynomial Polynomial::term(const Monomial& m, double coeff) {
  Polynomial p;
  p.add_term(m, coeff);
  return p;
}

void Polynomial::add_term(const Monomial& m, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->first.degree();  // grlex order: last term is maximal
}

double Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_) m.collect_variables(out);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  Polynomial out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : rhs.terms_) out.add_term(ma * mb, ca * cb);
  terms_ = std::move(out.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative polynomial power");
  Polynomial out(1.0);
  for (int i = 0; i < k; ++i) out *= *this;
  return out;
}

Polynomial Polynomial::substitute(
    const std::map<std::string, Polynomial>& subs) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Polynomial prod(c);
    for (const auto& [name, e] : m.exponents()) {
      auto it = subs.find(name);
      if (it != subs.end())
        prod *= it->second.pow(e);
      else
        prod *= Polynomial::term(Monomial::var(name, e), 1.0);
    }
    out += prod;
  }
  return out;
}

double Polynomial::evaluate(const std::map<std::string, double>& point) const {
  double v = 0.0;
  for (const auto& [m, c] : terms_) v += c * m.evaluate(point);
  return v;
}

double Polynomial::coeff_inf_norm() const {
  double v = 0.0;
  for (const auto& [m, c] : terms_) v = std::max(v, std::abs(c));
  return v;
}

double Polynomial::coeff_two_norm() const {
  double v = 0.0;
  for (const auto& [m, c] : terms_) v += c * c;
  return std::sqrt(v);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  // reverse grlex iteration prints degree-descending, lex-descending
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    double a = std::abs(c);
    if (m.is_one())
      out += format_double(a);
    else if (a == 1.0)
      out += m.str();
    else
      out += format_double(a) + "*" + m.str();
  }
  return out;
}

Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
Polynomial operator*(Polynomial lhs, const Polynomial& rhs) { return lhs *= rhs; }
Polynomial operator*(double c, Polynomial p) { return p *= c; }
Polynomial operator*(Polynomial p, double c) { return p *= c; }

// ------------------------------------------------------- basis generators

namespace {

void enumerate_exponents(const std::vector<std::string>& names, std::size_t i,
                         int remaining, Monomial acc,
                         std::vector<Monomial>& out) {
  if (i + 1 == names.size()) {
    out.push_back(acc * Monomial::var(names[i], remaining));
    return;
  }
  // allot the earliest name first, highest exponent first: lex descending
  for (int e = remaining; e >= 0; --e)
    enumerate_exponents(names, i + 1, remaining - e,
                        acc * Monomial::var(names[i], e), out);
}

}  // namespace

std::vector<Monomial> monomials(const std::vector<std::string>& vars,
                                const std::set<int>& degrees) {
  std::vector<std::string> names = vars;
  for (const auto& n : names)
    if (!is_valid_var_name(n))
      throw std::invalid_argument("invalid variable name: '" + n + "'");
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw std::invalid_argument("duplicate variable in monomial basis");
  for (int d : degrees)
    if (d < 0) throw std::invalid_argument("negative degree in monomial basis");

  std::vector<Monomial> out;
  for (int d : degrees) {  // std::set iterates ascending
    if (names.empty()) {
      if (d == 0) out.push_back(Monomial{});
      continue;
    }
    if (d == 0) {
      out.push_back(Monomial{});
      continue;
    }
    enumerate_exponents(names, 0, d, Monomial{}, out);
  }
  return out;
}

std::vector<Polynomial> gradient(const Polynomial& p,
                                 const std::vector<std::string>& vars) {
  std::vector<Polynomial> out;
  out.reserve(vars.size());
  for (const auto& name : vars) {
    Polynomial dp;
    for (const auto& [m, c] : p.terms()) {
      int e = m.exponent(name);
      if (e == 0) continue;
      Monomial dm;
      for (const auto& [n2, e2] : m.exponents()) {
        int ne = (n2 == name) ? e2 - 1 : e2;
        if (ne > 0) dm = dm * Monomial::var(n2, ne);
      }
      dp.add_term(dm, c * e);
    }
    out.push_back(std::move(dp));
  }
  return out;
}

// -------------------------------------------------- decision variable sugar

namespace {

std::string checked_prefix(const std::string& prefix) {
  if (!is_valid_var_name(prefix))
    throw std::invalid_argument("invalid decision variable prefix: '" +
                                prefix + "'");
  return prefix;
}

}  // namespace

PolyMatrix var_matrix(const std::string& prefix, int rows, int cols,
                      bool symmetric) {
  checked_prefix(prefix);
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("var_matrix dimensions must be positive");
  if (symmetric && rows != cols)
    throw std::invalid_argument("symmetric var_matrix must be square");
  PolyMatrix out;
  out.rows = rows;
  out.cols = cols;
  out.data.resize(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      int a = i, b = j;
      if (symmetric && a > b) std::swap(a, b);
      out.at(i, j) = Polynomial::var(prefix + "_" + std::to_string(a + 1) +
                                     "_" + std::to_string(b + 1));
    }
  return out;
}

PolyDecVar poly_decision_var(const std::string& prefix,
                             const std::vector<Monomial>& basis) {
  checked_prefix(prefix);
  if (basis.empty())
    throw std::invalid_argument("poly_decision_var: empty basis");
  PolyDecVar out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::string name = prefix + "_" + std::to_string(i + 1);
    out.names.push_back(name);
    out.poly.add_term(Monomial::var(name) * basis[i], 1.0);
  }
  return out;
}

SosDecVar sos_decision_var(const std::string& prefix,
                           const std::vector<Monomial>& z) {
  checked_prefix(prefix);
  if (z.empty()) throw std::invalid_argument("sos_decision_var: empty basis");
  const int m = static_cast<int>(z.size());
  SosDecVar out;
  out.names.assign(m, std::vector<std::string>(m));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      std::string name = prefix + "_" + std::to_string(i + 1) + "_" +
                         std::to_string(j + 1);
      out.names[i][j] = out.names[j][i] = name;
      double c = (i == j) ? 1.0 : 2.0;
      out.poly.add_term(Monomial::var(name) * z[i] * z[j], c);
    }
  return out;
}

AffineDecomposition affine_split(const Polynomial& p,
                                 const std::set<std::string>& x_vars) {
  std::map<std::string, Polynomial> by_var;
  AffineDecomposition out;
  for (const auto& [m, c] : p.terms()) {
    auto [xpart, dpart] = m.split(x_vars);
    int ddeg = dpart.degree();
    if (ddeg == 0) {
      out.base.add_term(xpart, c);
    } else if (ddeg == 1) {
      by_var[dpart.exponents().begin()->first].add_term(xpart, c);
    } else {
      throw NotAffineError("term " + Polynomial::term(m, c).str() +
                           " is not affine in the decision variables");
    }
  }
  for (auto& [name, poly] : by_var)
    out.coeffs.emplace_back(name, std::move(poly));
  return out;
}

}  // namespace sos
