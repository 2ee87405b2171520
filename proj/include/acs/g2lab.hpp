#pragma once

// Exact invariant data in complex dimension 3.
//
// Two constructions live here, both over the Gaussian rationals with no
// floating arithmetic anywhere:
//
//  1. hermitianData: the invariant pairing attached to a pointwise antilinear
//     2-tensor N on C^3,
//
//         h(xi, eta) = Tr[ N(xi, N(eta, .)) + N(eta, N(xi, .)) ]
//
//     (trace over R), together with the almost symplectic form
//     omega(xi, eta) = h(J xi, eta), the complex 3-tensor
//     varsigma(X, Y, Z) = h(N(X,Y), Z) - i h(N(X,Y), J Z), its alternation
//     sigma, and the volume identity Omega = omega^3/3 = (i/4) sigma ^ conj(sigma).
//
//  2. buildAlgebra / jacobiCheck / killingForm / solveSU21: the candidate
//     14-dimensional Lie algebras g = h (+) m with h = su(3) or su(2,1)
//     acting on m = C^3.  The m-part of [m, m] is the conjugate-tripling
//     relation [d_z1, d_z2] = 2 conj(d_z3) (cyclic), the h-part is the
//     equivariant projection of Lambda^{1,1}; su(3) carries the fixed
//     coefficient 3 while the su(2,1) family depends on a rational k.
//     jacobiCheck evaluates every Jacobi triple exactly; the k-solver scans
//     the affine-in-k conditions, finds k = 2 as the unique solution of the
//     (1,1,2)-index family, and exhibits the contradiction that rules out
//     every k.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "acs/clinalg.hpp"
#include "acs/rational.hpp"

namespace acs {

// ------------------------------------------------------------------------
// 14-dimensional bracket constructions
// ------------------------------------------------------------------------

enum class G2Case { SU3, SU21 };

/// Structure constants of a candidate algebra g = h (+) m over the realified
/// basis (X12, Y12, X13, Y13, X23, Y23, D1, D2 | x1, y1, x2, y2, x3, y3):
/// X_ab, Y_ab are the off-diagonal anti-Hermitian generator pairs, D1, D2 the
/// diagonal ones, and x_k, y_k = J x_k realify the standard basis of m = C^3.
struct Algebra14 {
  static constexpr int dim = 14;
  G2Case caseTag = G2Case::SU3;
  std::string caseLabel = "su3";
  GaussRat k;  ///< bracket coefficient: fixed 3 for su(3), the parameter for su(2,1)
  std::array<std::string, 14> labels{};
  /// c[i][j][l]: [e_i, e_j] = sum_l c[i][j][l] e_l; exact and antisymmetric.
  std::array<std::array<std::array<GaussRat, 14>, 14>, 14> c{};
};

/// Builds the bracket table.  k must be real; it is ignored for SU3 (which
/// uses the fixed coefficient 3 and records k = 3 in the result).
Algebra14 buildAlgebra(G2Case caseTag, const GaussRat& k = GaussRat(2));

/// The 3x3 matrix of the i-th (i < 8) realified generator of su(3) / su(2,1),
/// acting on column vectors of C^3.  Exposed so the bracket table can be
/// cross-checked against honest matrix commutators.
std::array<std::array<GaussRat, 3>, 3> hGeneratorMatrix(G2Case caseTag, int i);

struct JacobiFailure {
  std::array<int, 3> triple{};          ///< basis indices, i < j < l
  std::array<GaussRat, 14> residual{};  ///< Jacobiator coordinates
};

struct JacobiReport {
  std::string caseLabel;
  std::string k;
  int triplesChecked = 0;
  bool pass = false;
  std::vector<JacobiFailure> failures;
  nlohmann::json toJson() const;
};

/// Exact evaluation of all C(14,3) = 364 Jacobi triples.
JacobiReport jacobiCheck(const Algebra14& a);

struct KillingReport {
  std::array<std::array<GaussRat, 14>, 14> matrix{};  ///< K(x,y) = tr(ad x ad y)
  Signature signature;
  int rank = 0;
};

/// Killing form of a verified Lie algebra; throws PreconditionError when the
/// input fails jacobiCheck.
KillingReport killingForm(const Algebra14& a);

/// One Jacobi condition of the su(2,1) family on a complexified m-basis
/// triple.  The residual lies in m and is affine in the parameter k.
struct SU21Condition {
  /// Indices into the complexified basis (dz1, dz2, dz3, conj dz1, conj dz2,
  /// conj dz3) of m.
  std::array<int, 3> triple{};
  std::array<GaussRat, 6> mConstant{};  ///< k^0 part of the residual
  std::array<GaussRat, 6> mLinear{};    ///< k^1 part of the residual
  std::string text;                     ///< e.g. "(-4+2k) dz2"
};

struct KSolverReport {
  std::vector<SU21Condition> conditions;  ///< all 20 complexified m-triples
  bool uniqueK = false;  ///< the (1,1,2)-index conditions have one solution
  GaussRat k;            ///< that solution
  bool someKClearsAll = false;  ///< whether any k satisfies every condition
  std::string contradiction;    ///< a condition that no k can clear
};

/// Scans the symbolic (affine-in-k) Jacobi conditions of the su(2,1) family.
KSolverReport solveSU21();

// ------------------------------------------------------------------------
// Hermitian data
// ------------------------------------------------------------------------

using RatMat6 = std::array<std::array<GaussRat, 6>, 6>;
using RatTensor666 = std::array<std::array<std::array<GaussRat, 6>, 6>, 6>;

struct HermitianData {
  RatMat6 h{};          ///< real symmetric; h(J., J.) = h(., .)
  RatMat6 omega{};      ///< omega(u, v) = h(J u, v); real skew, type (1,1)
  Signature signature;  ///< of h
  RatTensor666 varsigma{};  ///< complex 3-tensor on the real basis
  RatTensor666 sigma{};     ///< normalized alternation of varsigma
  GaussRat omegaVol;        ///< omega^3/3 as a multiple of dx1^dy1^...^dy3
  GaussRat identityResidual;  ///< omegaVol - (i/4) sigma ^ conj(sigma)
  RatMat6 hRaw{};             ///< unscaled trace-formula values
  GaussRat rawUnit;           ///< hRaw(e1, e1)
  bool scaleFixed = false;    ///< h = hRaw / rawUnit was applied
  bool degenerate = false;    ///< h is singular
  bool sigmaNormalizationSkipped = false;  ///< set when h is degenerate
};

/// Computes the invariant Hermitian data of an antilinear 2-tensor on C^3.
/// The realified basis order is (x1, y1, x2, y2, x3, y3) with y_k = J x_k.
/// h is scaled so that h(x1, x1) = 1 whenever the raw value is nonzero; the
/// sigma normalization constant is fixed once by requiring the volume
/// identity to hold exactly on the compact-type tensor N(X1,X2) = X3,
/// N(X3,X1) = X2, N(X2,X3) = X1, and the identity residual is reported for
/// every input.  Throws PreconditionError unless the tensor has complex
/// dimension 3 with exact small dyadic entries (floating input is rejected).
HermitianData hermitianData(const CpxTensor& n);

}  // namespace acs
