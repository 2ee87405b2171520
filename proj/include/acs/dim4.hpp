#pragma once

// Local invariants of 4-dimensional almost complex structures with nowhere
// vanishing Nijenhuis tensor.
//
// In real dimension 4 the image of the Nijenhuis tensor at a point is either
// zero or a 2-plane Pi^2 invariant under J.  Bracketing sections of Pi^2
// yields the derived distribution Pi^3; when it has rank 3 the structure
// carries an absolute frame (e-structure): a section xi_1 of Pi^2 normalized
// by N(xi_1, [xi_1, J xi_1]) = xi_1, together with xi_2 = J xi_1,
// xi_3 = [xi_1, xi_2] and xi_4 = J xi_3.  The pair (xi_1, xi_2) is canonical
// up to a simultaneous sign; (xi_3, xi_4) is absolutely canonical.
//
// When Pi^2 is integrable instead, the structure fibers over a surface and
// the local theory is governed by an adapted chart J dz = i dz + b dw_bar,
// J dw = i dw; this header also provides the projectibility and symmetry
// residuals of that normal form and the gauge-invariant curvature-like
// quantities of the induced fibration data.

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acs/acstruct.hpp"
#include "acs/expr.hpp"

namespace acs {

/// Pointwise structure tensor in realified coordinates: x -> J(x), a 4x4
/// real matrix with J^2 = -1.  Derivatives are recovered by central finite
/// differences, so results carry O(h^2) error.
using StructureField = std::function<Eigen::MatrixXd(const Eigen::Vector4d&)>;

/// Pointwise exact 1-jet provider: x -> (J(x), dJ(x)).  Use this form when
/// closed-form jets are available; it avoids one level of finite differencing.
using JetField = std::function<PointJet(const Eigen::Vector4d&)>;

/// The distributions Pi^2 = span(X, JX) (X a nonzero Nijenhuis value) and
/// Pi^3 = Pi^2 + [Pi^2, Pi^2] at a point.
struct DerivedDistribution {
  bool rank3 = false;       ///< true when Pi^3 has rank 3
  Eigen::MatrixXd pi2;      ///< 4x2, a basis of Pi^2 (unit columns)
  Eigen::MatrixXd pi3;      ///< 4xrank, an orthonormal basis of Pi^3
  int rank = 0;             ///< rank of Pi^3 (2 or 3)
};

/// Exact (symbolic-jet) route.  Throws PreconditionError when the structure
/// is not 4-dimensional or the Nijenhuis tensor vanishes at the point.
DerivedDistribution derivedDistribution(const ChartStructure& s, const Point& p,
                                        double tol = 1e-6);

/// Exact-jet route for structures given by a pointwise jet provider.
DerivedDistribution derivedDistribution(const JetField& s, const Eigen::Vector4d& x,
                                        double tol = 1e-6);

/// Finite-difference route; rank decisions are robust at the default
/// tolerance but carry O(h^2) numerical error.
DerivedDistribution derivedDistribution(const StructureField& s, const Eigen::Vector4d& x,
                                        double tol = 1e-4);

/// The canonical frame at a point.
struct EStructure {
  /// Columns xi_1, xi_2, xi_3, xi_4.  xi_1, xi_2 span Pi^2 with xi_2 = J xi_1
  /// and N(xi_1, xi_3) = xi_1; xi_3 = [xi_1, xi_2] and xi_4 = J xi_3.
  Eigen::Matrix4d frame;
  /// The first two columns are canonical only up to a simultaneous sign; a
  /// fixed lexicographic convention picks the representative.
  bool signAmbiguity = true;
};

/// Canonical frame from exact chart jets.  Throws PreconditionError with a
/// "Pi integrable" message when the derived distribution has rank 2.
EStructure eStructure(const ChartStructure& s, const Point& p);

/// Canonical frame from a pointwise jet provider (one finite-difference
/// level: the section bracket).
EStructure eStructure(const JetField& s, const Eigen::Vector4d& x);

/// Canonical frame from a pointwise structure field (two finite-difference
/// levels; expect ~1e-4 accuracy on the frame).
EStructure eStructure(const StructureField& s, const Eigen::Vector4d& x);

/// Integrable-Pi invariant on the quotient nu = T/Pi: the absolute value of
/// the determinant of the antilinear action u -> N(v, u) on Pi, which is a
/// positively homogeneous degree-2, J-invariant function of the class of v.
/// Throws PreconditionError when v lies in Pi.
double quotientCircle(const ChartStructure& s, const Point& p, const Eigen::Vector4d& v);

/// Residuals obstructing the projection of an adapted chart onto the leaf
/// space.  jResiduals: fiber-derivatives of the z-row (automatically zero in
/// adapted form); nResiduals: fiber-derivatives of b_w.
struct ProjectibilityReport {
  std::vector<CoeffExpr> jResiduals;
  std::vector<CoeffExpr> nResiduals;
  bool jProjectible = false;
  bool nProjectible = false;
};

/// Requires the adapted form J dz = i dz + b dw_bar, J dw = i dw.
ProjectibilityReport projectibilityResidual(const ChartStructure& s);

/// Residuals of the symmetry equations for an infinitesimal fiber
/// transformation w -> w + t f(z, zbar, w, wbar) of an adapted chart:
/// r0 = f_wbar and r1 = f_zbar + psi f_w - f psi_w - fbar psi_wbar with
/// psi = (i/2) conj(b).  Both vanish iff f generates a one-parameter group
/// of symmetries of the structure.
std::pair<CoeffExpr, CoeffExpr> symmetryResidual(const ChartStructure& s, const CoeffExpr& f);

/// Gauge-invariant data of a fibration metric weight lambda(z, zbar) (ids
/// 0/1): the invariant 2-form Lambda = (log lambda)_{z zbar} dz dzbar as the
/// quotient lambdaNum/lambdaDen, and the quartic form q = |lambda|^4 dz dzbar.
struct GaugeInvariants {
  CoeffExpr lambdaNum;   ///< lambda_{z zbar} lambda - lambda_z lambda_zbar
  CoeffExpr lambdaDen;   ///< lambda^2
  CoeffExpr q;           ///< lambda^2 conj(lambda)^2
};

/// Throws PreconditionError when lambda vanishes somewhere on the sample
/// grid |Re z|, |Im z| <= 1/2 (step 1/4).
GaugeInvariants gaugeInvariants(const CoeffExpr& lambda);

}  // namespace acs
