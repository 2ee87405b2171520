#pragma once

// The Nijenhuis tensor N_J(x,y) = [Jx,Jy] - J[x,Jy] - J[Jx,y] - [x,y]:
// pointwise computation from 1-jets, classification of the pointwise tensor
// in complex dimensions 2, 3 and general n, fixed-point analysis of the
// maps Phi_1: CP^2 -> Gr_2(C^3), L -> Im N(L,.) and Phi_2: Gr_2 -> CP^2,
// Pi -> C.N(Lambda^2 Pi), realization of a prescribed rank-2 distribution as
// Im(N_J) in complex dimension 2, and transversal/strong non-degeneracy
// analysis in complex dimension 4.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "acs/acstruct.hpp"
#include "acs/clinalg.hpp"

namespace acs {

class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Pointwise tensor I/O:
// { "complex_dim": n, "N": [ {"i":1,"j":2,"k":2,"c":"1"}, ... ] }
// with 1-based indices, i < j (the skew partner is implied), and c a
// constant-expression string.
CpxTensor pointTensorFromJson(const nlohmann::json& spec);
nlohmann::json pointTensorToJson(const CpxTensor& c);

// N_J at a point from the 1-jet of J, on constant-coefficient frame fields:
// N(u,v) = (d_{Ju}J)v - (d_{Jv}J)u - J(d_u J)v + J(d_v J)u.
AntilinearMap2 nijenhuisAt(const PointJet& jet);

// Pushforward action of g in GL(n,C): (g.N)(u,v) = g N(g^{-1}u, g^{-1}v).
AntilinearMap2 conjugateTensor(const AntilinearMap2& n, const Eigen::MatrixXcd& g);

struct FixedPoint {
  Eigen::Vector3cd line;  // unit representative of L in CP^2
  bool incident = false;  // true when N(Lambda^2 Pi) lies inside Pi = Phi_1(L)
  double residual = 0.0;  // projective distance between Phi2(Phi1(L)) and L
};

struct PhiReport {
  std::vector<FixedPoint> points;
  bool continuum = false;  // more than 10 distinct fixed points
  bool lowConfidence = false;
  int transversalCount = 0;
  int incidentCount = 0;
};

// Newton search for the fixed points of Phi_2 . Phi_1 on CP^2 (three affine
// charts, 100 seeds each, 40 iterations, convergence 1e-10, clustering at
// radius 1e-4). Preconditions: n = 3 and rImage = 3.
PhiReport phiMaps(const CpxTensor& c);

struct ClassificationReport {
  int n = 0;
  int rImage = 0;
  bool imageInKernel = false;
  std::string typeLabel;
  PhiReport fixedPointData;  // populated on the n=3 non-degenerate path
  int m = -1;                // n>=4, rImage=1: rank of the scalar form is 2m
  std::string branch;        // n>=4, rImage=1: "W∩Z=0" or "W⊂Z"
  bool lowConfidence = false;
  std::vector<std::string> notes;
};

ClassificationReport classify(const AntilinearMap2& n, double tol = kLinalgTol);
ClassificationReport classify(const CpxTensor& c, double tol = kLinalgTol);

// Plucker-embedding counts for the zero locus of a non-degenerate N in
// complex dimension n >= 4.
struct PluckerCounts {
  long long d;         // dim_C of N^{-1}(0) in Lambda^2
  long long codim;     // codimension of the Plucker image
  long long dimSigma;  // n - 4
  long long degSigma;  // Catalan number binom(2n-4, n-2)/(n-1)
};
PluckerCounts pluckerCounts(int n);

// Realization of a rank-2 distribution in complex dimension 2. The
// distribution is Pi^C = <dz - A dw - B dw_bar, conjugate> on a (z,w)-chart;
// alpha and beta are the structure functions of the realizing J in the
// foliated normal form, and jet is its realified 1-jet at the point.
struct Realization {
  Cpx alpha;
  Cpx beta;
  PointJet jet;
  Eigen::Vector4cd generator;  // complexified components (dz, dz_bar, dw, dw_bar)
  double imageAngle;           // max principal angle between Im(N_J) and Pi
  double generatorAngle;       // max principal angle between span(v) and Im(N_J)
};

Realization realizeDim4(const CoeffExpr& A, const CoeffExpr& B, const VarTable& vt,
                        const Point& p);

// The realified 1-jet of the realizing structure at an arbitrary point
// (used to sample the realized structure on a grid).
PointJet lemma1JetAt(const CoeffExpr& A, const CoeffExpr& B, const VarTable& vt, const Point& p);

// Characteristic generator v of Im(N_J) for a chart already in the foliated
// normal form J dz = ik dz + alpha dz_bar + (i alpha conj(beta)/(1+k)) dw + beta dw_bar,
// J dw = i dw, with k = sqrt(1+|alpha|^2). Components as in Realization::generator.
Eigen::Vector4cd lemma2Generator(const ChartStructure& ch, const Point& p);

struct TransversalReport {
  double residualP1 = 0.0;  // max |N(u,v)| over u,v in P1
  double residualP2 = 0.0;
  int crossRank = 0;  // realified rank of N: P1 x P2 -> T (8 when anti-iso)
  bool antiIso = false;
  bool linesFound = false;
  // linesIn[i][j]: the two lines L_i^{j} in which {N(xi,eta)} meets Pi_{i+1}
  std::array<std::array<Eigen::Vector4cd, 2>, 2> linesIn;
  // vLines[i][j][s]: the line V_{i+1}^{(j+1)(s+1)} inside Pi_{i+1}
  std::array<std::array<std::array<Eigen::Vector4cd, 2>, 2>, 2> vLines;
  bool strong = false;
  std::vector<std::string> notes;
};

// Transversal non-degeneracy analysis in complex dimension 4 for
// T = P1 + P2 with P1, P2 J-invariant of complex dimension 2.
TransversalReport transversalCheck(const AntilinearMap2& n, const RealSubspace& p1,
                                   const RealSubspace& p2, double tol = 1e-8);

// The strongly non-degenerate normal form on C^4 from the eight moduli
// lambda_i^{js}: N(e_1^1 + l1[j][s] e_1^2, e_2^1 + l2[j][s] e_2^2) = e_s^j
// with e_i^1 = X_{2i-1}, e_i^2 = X_{2i}.
CpxTensor buildStrongNdg8(const std::array<std::array<Cpx, 2>, 2>& l1,
                          const std::array<std::array<Cpx, 2>, 2>& l2);

}  // namespace acs
