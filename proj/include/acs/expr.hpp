#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acs/rational.hpp"

namespace acs {

using Cpx = std::complex<double>;

/// Complex coordinates plus their conjugates as first-class variables.
/// Variable ids come in pairs: id 2k is the k-th coordinate, id 2k+1 its
/// conjugate; conjugation is id XOR 1. The textual name of a conjugate is the
/// base name with a trailing underscore ("w_").
class VarTable {
public:
  VarTable() = default;
  explicit VarTable(std::vector<std::string> coordNames);

  int coordCount() const { return static_cast<int>(m_names.size()); }
  int varCount() const { return 2 * coordCount(); }
  int baseId(int coord) const { return 2 * coord; }
  static int conjId(int var) { return var ^ 1; }
  static bool isConjVar(int var) { return (var & 1) != 0; }
  static int coordOf(int var) { return var / 2; }

  int idOf(const std::string& name) const;           ///< throws on unknown name
  std::optional<int> tryIdOf(const std::string& name) const;
  std::string nameOf(int var) const;
  const std::vector<std::string>& coordNames() const { return m_names; }

private:
  std::vector<std::string> m_names;
};

/// One canonical term: coeff * prod(var^exp) * exp(sum lambda_v * var).
struct Term {
  Cpx coeff{0.0, 0.0};
  std::vector<std::pair<int, int>> monomial;   ///< (varId, exponent > 0), sorted
  std::vector<std::pair<int, Cpx>> expFactor;  ///< (varId, lambda != 0), sorted
};

/// Finite sums of exponential-polynomial terms in canonical merged form:
/// terms sorted by (monomial, expFactor) key, equal keys merged, exact-zero
/// coefficients dropped. Closed under +, -, *, d/dv and conjugation.
class CoeffExpr {
public:
  CoeffExpr() = default;

  static CoeffExpr constant(Cpx c);
  static CoeffExpr variable(int varId);
  static CoeffExpr fromTerms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return m_terms; }
  bool isZero() const { return m_terms.empty(); }
  bool isConstant() const;
  /// Value of a constant expression (throws if variables are present).
  Cpx constantValue() const;

  CoeffExpr operator-() const;
  CoeffExpr operator+(const CoeffExpr& o) const;
  CoeffExpr operator-(const CoeffExpr& o) const;
  CoeffExpr operator*(const CoeffExpr& o) const;
  bool operator==(const CoeffExpr& o) const;
  bool operator!=(const CoeffExpr& o) const { return !(*this == o); }

private:
  std::vector<Term> m_terms;
};

CoeffExpr operator*(Cpx c, const CoeffExpr& e);

/// exp(arg) for an affine argument; throws std::invalid_argument otherwise.
CoeffExpr expOf(const CoeffExpr& affineArg);

/// Exact Wirtinger partial derivative.
CoeffExpr diff(const CoeffExpr& e, int varId);

/// Conjugate: conjugates constants and swaps every variable with its partner.
CoeffExpr conjugate(const CoeffExpr& e);

/// Point assignment varId -> value. Conjugate partners are auto-filled by
/// fromBase/set; explicit inconsistent assignments are rejected by set().
class Point {
public:
  static Point fromBase(const VarTable& vt, const std::vector<Cpx>& baseValues);

  /// Assigns var and its partner (conj value); throws if this contradicts an
  /// earlier explicit assignment.
  void set(int varId, Cpx value);
  /// Assigns one variable only, no consistency coupling (finite-difference
  /// probes along a single Wirtinger direction use this).
  void setRaw(int varId, Cpx value);

  bool has(int varId) const;
  Cpx value(int varId) const;  ///< throws if unassigned

private:
  std::map<int, Cpx> m_values;
};

Cpx eval(const CoeffExpr& e, const Point& p);

/// Canonical printing; parseExpr(toString(e)) == e exactly.
std::string toString(const CoeffExpr& e, const VarTable& vt);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        m_pos(pos) {}
  size_t position() const { return m_pos; }

private:
  size_t m_pos;
};

/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor ("*" factor)*
///   factor := base ("^" uint)?
///   base   := number | "i" | "pi" | ident | "(" expr ")" | "exp" "(" expr ")"
///           | "-" base
///   ident  := letter (letter|digit)* ("_")?     trailing "_" = conjugate
CoeffExpr parseExpr(const std::string& text, const VarTable& vt);

/// Constant expression evaluated in floating point (pi and exp allowed).
Cpx parseConstant(const std::string& text);

/// Constant expression evaluated exactly over the Gaussian rationals.
/// pi, exp and variables are rejected (throws ParseError).
GaussRat parseExactConstant(const std::string& text);

}  // namespace acs
