#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sos {

// Variable names: [A-Za-z_][A-Za-z0-9_]*, compared by exact string equality.
bool is_valid_var_name(const std::string& name);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos);
  std::size_t position;  // byte offset into the input text
};

struct NotAffineError : std::runtime_error {
  explicit NotAffineError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OddDegreeError : std::runtime_error {
  explicit OddDegreeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Power product of named variables, e.g. x1^2*x2. Stores only nonzero
// exponents, so equal products always compare equal.
class Monomial {
 public:
  Monomial() = default;
  static Monomial var(const std::string& name, int exp = 1);

  int degree() const;
  int degree_in(const std::set<std::string>& vars) const;
  int exponent(const std::string& name) const;
  bool is_one() const { return exps_.empty(); }
  const std::map<std::string, int>& exponents() const { return exps_; }

  Monomial operator*(const Monomial& rhs) const;
  Monomial pow(int k) const;
  // Factor into (variables inside `vars`, everything else).
  std::pair<Monomial, Monomial> split(const std::set<std::string>& vars) const;
  void collect_variables(std::set<std::string>& out) const;
  double evaluate(const std::map<std::string, double>& point) const;

  std::string str() const;

  bool operator==(const Monomial& rhs) const = default;

  // Lexicographic order with variables taken in ascending name order; the
  // first name where exponents differ decides, larger exponent wins.
  static bool lex_less(const Monomial& a, const Monomial& b);
  // Graded order: total degree first, ties broken lexicographically.
  static bool grlex_less(const Monomial& a, const Monomial& b);

 private:
  std::map<std::string, int> exps_;
};

struct MonomialGrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return Monomial::grlex_less(a, b);
  }
};

// Sparse multivariate polynomial with double coefficients. Terms whose
// coefficient becomes exactly 0.0 are dropped, so the zero polynomial has an
// empty term map and representations are canonical.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, MonomialGrlexLess>;

  Polynomial() = default;
  Polynomial(double constant);  // implicit: lets 2.0 * p, p + 1 read naturally
  static Polynomial var(const std::string& name);
  static Polynomial term(const Monomial& m, double coeff);

  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // 0 for the zero polynomial
  double coeff(const Monomial& m) const;
  const TermMap& terms() const { return terms_; }
  std::set<std::string> variables() const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(double c);
  Polynomial operator-() const;
  Polynomial pow(int k) const;

  // Simultaneous substitution; variables not mentioned stay as themselves.
  Polynomial substitute(const std::map<std::string, Polynomial>& subs) const;
  double evaluate(const std::map<std::string, double>& point) const;

  double coeff_inf_norm() const;
  double coeff_two_norm() const;

  std::string str() const;

  bool operator==(const Polynomial& rhs) const = default;

  void add_term(const Monomial& m, double coeff);

 private:
  TermMap terms_;
};

Polynomial operator+(Polynomial lhs, const Polynomial& rhs);
Polynomial operator-(Polynomial lhs, const Polynomial& rhs);
Polynomial operator*(Polynomial lhs, const Polynomial& rhs);
Polynomial operator*(double c, Polynomial p);
Polynomial operator*(Polynomial p, double c);

// Format a coefficient with the shortest decimal digits that reparse to the
// same double.
std::string format_double(double v);

// Parse the expression grammar (+, -, *, ^ with nonnegative integer
// exponents, parentheses, decimal literals). Throws ParseError with the
// offending byte offset.
Polynomial parse(const std::string& text);

// All monomials in `vars` whose total degree lies in `degrees`, ordered by
// total degree ascending, ties lexicographically descending.
std::vector<Monomial> monomials(const std::vector<std::string>& vars,
                                const std::set<int>& degrees);

std::vector<Polynomial> gradient(const Polynomial& p,
                                 const std::vector<std::string>& vars);

// Matrix of fresh scalar decision variables named prefix_i_j (1-based). For
// symmetric matrices only the upper triangle gets distinct names and (j,i)
// aliases (i,j).
struct PolyMatrix {
  int rows = 0, cols = 0;
  std::vector<Polynomial> data;  // row-major
  const Polynomial& at(int i, int j) const { return data[i * cols + j]; }
  Polynomial& at(int i, int j) { return data[i * cols + j]; }
};
PolyMatrix var_matrix(const std::string& prefix, int rows, int cols,
                      bool symmetric = false);

// p = sum_i prefix_i * basis_i, one fresh decision variable per basis element.
struct PolyDecVar {
  Polynomial poly;
  std::vector<std::string> names;
};
PolyDecVar poly_decision_var(const std::string& prefix,
                             const std::vector<Monomial>& basis);

// s = z' D z for a fresh symmetric matrix D named prefix_i_j; off-diagonal
// products appear with coefficient 2.
struct SosDecVar {
  Polynomial poly;
  std::vector<std::vector<std::string>> names;  // m x m, names[i][j] == names[j][i]
};
SosDecVar sos_decision_var(const std::string& prefix,
                           const std::vector<Monomial>& z);

// Write p = base(x) + sum_i coeffs_i(x) * d_i where the d_i are every
// variable of p outside `x_vars`. Throws NotAffineError if any term has
// total degree >= 2 in the d variables.
struct AffineDecomposition {
  Polynomial base;
  std::vector<std::pair<std::string, Polynomial>> coeffs;  // sorted by name
};
AffineDecomposition affine_split(const Polynomial& p,
                                 const std::set<std::string>& x_vars);

}  // namespace sos
