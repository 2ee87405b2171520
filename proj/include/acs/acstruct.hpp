#pragma once

// Chart-level almost complex structures. A structure on a coordinate chart
// (z_1, ..., z_n) is the table
//
//   J d/dz_i = sum_j a(i,j) d/dz_j + b(i,j) d/dz_bar_j
//
// with exponential-polynomial coefficient entries; the action on the
// conjugate basis vectors is determined by conjugation. The module provides
// validation of J^2 = -1 (symbolically, with a numeric sampling fallback),
// pointwise realified 1-jets of J, and symbolic vector-field calculus
// (Lie brackets, J action, Nijenhuis values) in the complexified frame.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "acs/clinalg.hpp"
#include "acs/expr.hpp"

namespace acs {

struct ValidationReport {
  bool ok = false;
  bool symbolic = false;  // true when J^2 = -1 was verified exactly
  std::string message;
};

// Realified 1-jet of J at a point: the matrix J and its derivatives along the
// real coordinate directions (x_1, y_1, x_2, y_2, ...).
struct PointJet {
  Eigen::MatrixXd J;
  std::vector<Eigen::MatrixXd> dJ;
};

class ChartStructure {
 public:
  std::string name;
  VarTable vars;

  ChartStructure(std::string chartName, VarTable table);

  int complexDim() const { return vars.coordCount(); }

  const CoeffExpr& a(int i, int j) const;
  const CoeffExpr& b(int i, int j) const;
  void setA(int i, int j, CoeffExpr e);
  void setB(int i, int j, CoeffExpr e);

  static ChartStructure fromJson(const nlohmann::json& spec);
  nlohmann::json toJson() const;

  ValidationReport validate(double tol = 1e-9, int samples = 24, unsigned seed = 1) const;

  // Complex coefficient matrices at a point: J dz_i = sum A(i,j) dz_j + B(i,j) dz_bar_j.
  void evalAB(const Point& p, Eigen::MatrixXcd& A, Eigen::MatrixXcd& B) const;

  PointJet jetAt(const Point& p) const;

 private:
  std::vector<CoeffExpr> m_a;  // row-major n x n
  std::vector<CoeffExpr> m_b;
};

// A complexified vector field: comp[id] is the coefficient of d/d(var id),
// indexed like VarTable ids (even = d/dz_k, odd = d/dz_bar_k).
struct VectorField {
  std::vector<CoeffExpr> comp;

  static VectorField zero(int complexDim);
  static VectorField basisVector(int varId, int complexDim);
  // X plus its conjugate field (always a real field).
  static VectorField realFrom(const VectorField& x);

  int complexDim() const { return static_cast<int>(comp.size()) / 2; }
  bool isZero() const;
  bool isRealField(double tol = 1e-12) const;
  // Complexified coefficients evaluated at p.
  Eigen::VectorXcd evalAt(const Point& p) const;
};

VectorField operator+(const VectorField& x, const VectorField& y);
VectorField operator-(const VectorField& x, const VectorField& y);
VectorField scale(const CoeffExpr& c, const VectorField& x);
VectorField conjugateField(const VectorField& x);

VectorField lieBracket(const VectorField& x, const VectorField& y);
VectorField applyJ(const ChartStructure& ch, const VectorField& x);

// N(x, y) = [Jx, Jy] - J[x, Jy] - J[Jx, y] - [x, y], fully symbolic.
VectorField nijenhuisSymbolic(const ChartStructure& ch, const VectorField& x,
                              const VectorField& y);

}  // namespace acs
