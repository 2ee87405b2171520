#pragma once

// Finite-difference oracle for the Nijenhuis tensor. Evaluates
//   N(u, v) = [Ju~, Jv~] - J[u~, Jv~] - J[Ju~, v~] - [u~, v~]
// at a point by central differences of the pointwise structure matrix J
// along constant frame fields u~, v~. Shares only the evaluation of J with
// the library; the differentiation and bracket combination are independent
// of the jet-based formula under test.

#include <vector>

#include <Eigen/Dense>

#include "acs/acstruct.hpp"

namespace acs::testing {

inline Eigen::MatrixXd realStructureMatrix(const ChartStructure& ch,
                                           const Eigen::VectorXd& x) {
  const int n = ch.complexDim();
  std::vector<Cpx> base(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) base[static_cast<size_t>(k)] = Cpx(x(2 * k), x(2 * k + 1));
  return ch.jetAt(Point::fromBase(ch.vars, base)).J;
}

// d/dt|_{t=0} J(x + t a) w by central difference.
inline Eigen::VectorXd fdDirectional(const ChartStructure& ch, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& a, const Eigen::VectorXd& w,
                                     double h) {
  return (realStructureMatrix(ch, x + h * a) * w -
          realStructureMatrix(ch, x - h * a) * w) /
         (2.0 * h);
}

inline Eigen::VectorXd fdNijenhuis(const ChartStructure& ch, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                   double h = 1e-5) {
  const Eigen::MatrixXd j = realStructureMatrix(ch, x);
  const Eigen::VectorXd ju = j * u;
  const Eigen::VectorXd jv = j * v;
  // constant frames commute, so [u~, v~] = 0 and the field brackets reduce to
  // directional derivatives of J:
  Eigen::VectorXd bracketJJ = fdDirectional(ch, x, ju, v, h) - fdDirectional(ch, x, jv, u, h);
  Eigen::VectorXd bracketUJv = fdDirectional(ch, x, u, v, h);
  Eigen::VectorXd bracketJuV = -fdDirectional(ch, x, v, u, h);
  return bracketJJ - j * bracketUJv - j * bracketJuV;
}

}  // namespace acs::testing
