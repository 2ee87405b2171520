#pragma once

// Symbol spaces of the local symmetry problem for a pointwise tensor N.
//
// gamma_1 = { f in T* (x)_C T : N(f xi, eta) + N(xi, f eta) = f N(xi, eta) }
// gamma_{k+1} = { h in S^{k+1} T* (x)_C T : i_xi h in gamma_k for all xi }.
//
// gamma_1 is a real (not complex) subspace of the complex-linear
// endomorphisms; the prolongations are complex-multilinear symmetric maps and
// are cut out by requiring every k-fold insertion of real vectors to land in
// gamma_1. The characteristic variety attaches to N the generic kernel rank
// over the annihilator covectors of the image of N.

#include <climits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acs/clinalg.hpp"

namespace acs {

struct SymbolSpace {
  int level = 0;    // k
  int realDim = 0;  // dim_R gamma_k
  // level 1: realified 2n x 2n endomorphisms spanning gamma_1
  std::vector<Eigen::MatrixXd> endos;
  // level >= 2: complex coefficient vectors, entry (m * n + t) holding the
  // X_t-component of the value on the m-th multiset of multisets()
  std::vector<Eigen::VectorXcd> coeffs;
  // level >= 2: non-decreasing index multisets of size k, in coefficient order
  std::vector<std::vector<int>> multisets;
};

SymbolSpace gamma1(const AntilinearMap2& n, double tol = kLinalgTol);
// k >= 1; dispatches to gamma1 for k = 1.
SymbolSpace gammaK(const AntilinearMap2& n, int k, double tol = kLinalgTol);

// Value of the idx-th basis element on level-many real tangent vectors.
Eigen::VectorXd symbolValue(const SymbolSpace& s, int idx,
                            const std::vector<Eigen::VectorXd>& args);

struct SymbolTower {
  std::vector<int> dims;  // dims[k-1] = dim_R gamma_k, padded with zeros
  bool finiteType = false;
  int stabilizedAt = -1;  // first level with dim 0, or -1
  std::vector<SymbolSpace> levels;  // computed levels only (up to first zero)
};

// Computes gamma_1 .. gamma_kMax (1 <= kMax <= 6; kMax <= 4 when n > 5).
// Once a level vanishes the remaining dims are zero without computation.
SymbolTower symbolTower(const AntilinearMap2& n, int kMax, double tol = kLinalgTol);

struct CharVarietyReport {
  int pComplex = 0;  // dim_C Ann(W); kMinusInfinity when W = T
  int kernelRankComplex = 0;
  int components = 0;
  int zetaReal = 0;
  bool lowConfidence = false;
  std::string phrase;
  std::vector<std::string> notes;
};

// Sentinel for pComplex when the image of N is all of T ("-inf").
inline constexpr int kMinusInfinity = INT_MIN;

// Samples random covectors in Ann(Im N) and reports the generic kernel rank
// K_rho = dim_C { v : N(v, u) = 0 for all u in Ann(rho) }.
CharVarietyReport charVariety(const AntilinearMap2& n, int samples = 40,
                              unsigned seed = 7u, double tol = kLinalgTol);

struct SubmaximalBound {
  int pComplex = 0;
  int zetaComplex = 0;
};

// Largest characteristic data over nonzero tensors in complex dimension n.
SubmaximalBound submaximalBound(int n);

}  // namespace acs
