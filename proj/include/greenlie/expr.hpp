#pragma once

#include "greenlie/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace greenlie {

class Expr;

/// Coordinates of R^3 plus the formal argument `s` of unary solution families.
enum class Var : std::uint8_t { X, Y, Z, S };

/// Recip(u) stands for 1/u with u a sum of at least two terms.
enum class Func : std::uint8_t { Tanh, Exp, Sin, Cos, Recip };

/// A leaf or opaque factor of a monomial.
///
/// Kinds are ordered Parameter < Variable < EPartial < Function; that order,
/// then the payload, is the fixed total order every canonical form sorts by.
class Atom {
 public:
  enum class Kind : std::uint8_t { Parameter, Variable, EPartial, Function };

  static Atom variable(Var v);
  static Atom parameter(std::string name);
  /// dx, dy are the orders of differentiation of E in x and y; (0,0) is E.
  static Atom e_partial(int dx, int dy);
  /// Raw constructor; prefer apply() which simplifies.
  static Atom function(Func f, Expr arg);

  Kind kind() const { return kind_; }
  Var var() const { return var_; }
  const std::string& name() const { return name_; }
  int dx() const { return dx_; }
  int dy() const { return dy_; }
  Func func() const { return func_; }
  const Expr& arg() const { return *arg_; }

  friend int compare(const Atom& a, const Atom& b);
  friend bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
  friend bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }

 private:
  Atom() = default;

  Kind kind_ = Kind::Parameter;
  Var var_ = Var::X;
  std::string name_;
  int dx_ = 0;
  int dy_ = 0;
  Func func_ = Func::Tanh;
  std::shared_ptr<const Expr> arg_;
};

/// Product of atom powers; factors sorted by atom order, exponents nonzero.
class Monomial {
 public:
  using Factor = std::pair<Atom, int>;

  Monomial() = default;
  Monomial(const Atom& a, int power);
  /// Sorts and merges; drops zero exponents.
  static Monomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  int exponent(const Atom& a) const;
  Monomial inverse() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Lexicographic on exponent vectors indexed by increasing atom order.
  /// This is a group order on Laurent monomials: a < b implies a*c < b*c.
  friend int compare(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b)
  {
    return compare(a, b) == 0;
  }

 private:
  std::vector<Factor> factors_;
};

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

/// Canonical expanded sum of terms with exact rational coefficients.
///
/// Every constructor and operator returns canonical form: no zero
/// coefficients, no repeated monomials, terms ordered by MonomialLess.
/// Equality of canonical forms is expression equality.
class Expr {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialLess>;

  Expr() = default;
  Expr(const Rational& c);
  Expr(long c) : Expr(Rational(c)) {}
  Expr(int c) : Expr(Rational(c)) {}

  static Expr atom(const Atom& a, int power = 1);
  static Expr term(const Monomial& m, const Rational& c);

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero_exact() const { return terms_.empty(); }
  bool is_single_term() const { return terms_.size() == 1; }
  /// Value when the expression is a rational constant (including 0).
  std::optional<Rational> constant_value() const;
  const std::pair<const Monomial, Rational>& leading_term() const { return *terms_.rbegin(); }

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);
  /// Division by a nonzero expression; multi-term divisors become Recip atoms.
  friend Expr operator/(const Expr& a, const Expr& b) { return a * b.reciprocal(); }

  Expr pow(int n) const;
  /// Throws std::domain_error on zero.
  Expr reciprocal() const;

  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

 private:
  void add_term(const Monomial& m, const Rational& c);

  TermMap terms_;
};

// Builders.
Expr var(Var v);
inline Expr x() { return var(Var::X); }
inline Expr y() { return var(Var::Y); }
inline Expr z() { return var(Var::Z); }
Expr param(const std::string& name);
Expr e_partial(int dx, int dy);
inline Expr formal_e() { return e_partial(0, 0); }
/// Function application with light simplification (odd/even symmetry, value at 0).
Expr apply(Func f, const Expr& arg);
inline Expr tanh(const Expr& u) { return apply(Func::Tanh, u); }
inline Expr exp(const Expr& u) { return apply(Func::Exp, u); }
inline Expr sin(const Expr& u) { return apply(Func::Sin, u); }
inline Expr cos(const Expr& u) { return apply(Func::Cos, u); }

/// Rebuilds canonical form from raw (possibly unsorted, repeated, zero) terms.
Expr normalize(const std::vector<std::pair<Monomial, Rational>>& raw_terms);
inline Expr normalize(const Expr& e) { return e; }

Expr differentiate(const Expr& e, Var v);
/// Applies differentiate dx times in x then dy times in y.
Expr differentiate(const Expr& e, int dx, int dy);

using Bindings = std::map<Atom, Expr>;

class ContradictorySubstitution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replaces bound atoms, recursing into function arguments. A binding for E
/// (e-partial (0,0)) also binds every partial of E to the matching derivative
/// of its closed form; an explicit partial binding that disagrees throws
/// ContradictorySubstitution.
Expr substitute(const Expr& e, const Bindings& bindings);

using Assignment = std::map<Atom, double>;

class MissingAssignment : public std::runtime_error {
 public:
  MissingAssignment(const Atom& a);
  const Atom& atom() const { return atom_; }

 private:
  Atom atom_;
};

double eval_numeric(const Expr& e, const Assignment& assignment);

struct TermwiseValue {
  double value = 0.0;
  double max_abs_term = 0.0;
};
TermwiseValue eval_termwise(const Expr& e, const Assignment& assignment);

/// Variables, parameters and e-partials reachable from e, including inside
/// function arguments.
std::set<Atom> leaf_atoms(const Expr& e);
bool has_function_atoms(const Expr& e);
bool contains_atom(const Expr& e, const Atom& a);
/// Largest dx+dy among e-partials in e, or -1 when E does not occur.
int max_e_order(const Expr& e);

inline constexpr int kZeroTestPoints = 8;
inline constexpr double kZeroTestTolerance = 1e-9;

/// Exact for the Laurent-polynomial fragment (no function atoms). Otherwise
/// evaluates at kZeroTestPoints seeded random points with every leaf drawn
/// from [-2,2] and requires |value| <= 1e-9 * (1 + max |term|) at each.
bool is_zero(const Expr& e, std::uint64_t seed = 0);

std::string to_string(const Atom& a);
/// Prints in the grammar accepted by parse_expr.
std::string to_string(const Expr& e);

}  // namespace greenlie
