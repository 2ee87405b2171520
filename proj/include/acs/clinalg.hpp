#pragma once

// Realified complex linear algebra: the standard complex structure J0 on
// R^{2n}, numerically robust rank/kernel and subspace operations built on the
// SVD, and realified antilinear 2-tensors N(u, v) that are skew and
// antilinear in each slot.
//
// Realification convention: the complex basis vector X_k corresponds to the
// real pair (e_{2k}, e_{2k+1}) with J0 e_{2k} = e_{2k+1}, so the complex
// vector sum w_k X_k realifies to sum Re(w_k) e_{2k} + Im(w_k) e_{2k+1}.

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace acs {

using Cpx = std::complex<double>;

inline constexpr double kLinalgTol = 1e-9;

// Block-diagonal standard complex structure on R^{2n}.
Eigen::MatrixXd standardJ0(int complexDim);

// Realify an n x n complex matrix as a 2n x 2n real matrix in the convention
// above (each entry a+bi becomes the 2x2 block [[a,-b],[b,a]]).
Eigen::MatrixXd realifyComplexMatrix(const Eigen::MatrixXcd& m);

// Realify the antilinear map xi -> M conj(xi) (each entry a+bi becomes the
// 2x2 block [[a,b],[b,-a]]).
Eigen::MatrixXd realifyAntilinearMatrix(const Eigen::MatrixXcd& m);

// Realify a complex vector.
Eigen::VectorXd realifyComplexVector(const Eigen::VectorXcd& v);

// Inverse of realifyComplexVector.
Eigen::VectorXcd complexifyRealVector(const Eigen::VectorXd& v);

struct RankKernel {
  int rank = 0;
  Eigen::MatrixXd kernel;  // orthonormal basis of the right null space
  Eigen::VectorXd singularValues;
};

// SVD rank and kernel with a relative singular-value threshold.
RankKernel rankAndKernel(const Eigen::MatrixXd& m, double tol = kLinalgTol);

// A linear subspace of R^m held as an orthonormal column basis.
class RealSubspace {
 public:
  RealSubspace() = default;

  static RealSubspace fromColumns(const Eigen::MatrixXd& cols, double tol = kLinalgTol);
  static RealSubspace full(int ambientDim);
  static RealSubspace zero(int ambientDim);

  int dim() const { return static_cast<int>(m_basis.cols()); }
  int ambientDim() const { return m_ambient; }
  const Eigen::MatrixXd& basis() const { return m_basis; }

  bool contains(const Eigen::VectorXd& v, double tol = kLinalgTol) const;
  bool containsSubspace(const RealSubspace& other, double tol = kLinalgTol) const;
  // True when m * S is contained in S.
  bool isInvariantUnder(const Eigen::MatrixXd& m, double tol = kLinalgTol) const;
  // dim()/2 when the space is invariant under the complex structure j,
  // -1 otherwise.
  int complexDim(const Eigen::MatrixXd& j, double tol = kLinalgTol) const;

  RealSubspace spanWith(const RealSubspace& other, double tol = kLinalgTol) const;
  // Orthogonal projection of v onto the subspace.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;

 private:
  int m_ambient = 0;
  Eigen::MatrixXd m_basis;
};

int intersectionDim(const RealSubspace& a, const RealSubspace& b, double tol = kLinalgTol);

// Principal angles between two subspaces, ascending, in radians.
std::vector<double> principalAngles(const RealSubspace& a, const RealSubspace& b);

// Complex structure constants c_{ij}^k of a skew bilinear map on C^n:
// N(X_i, X_j) = sum_k c_{ij}^k X_k.
class CpxTensor {
 public:
  explicit CpxTensor(int complexDim);

  int dim() const { return m_dim; }

  // Adds c to the (i, j, k) slot only.
  void add(int i, int j, int k, Cpx c);
  // Installs the skew pair: adds c to (i, j, k) and -c to (j, i, k).
  void set(int i, int j, int k, Cpx c);

  Cpx coeff(int i, int j, int k) const;
  // The complex value N(X_i, X_j) as a coordinate vector.
  Eigen::VectorXcd value(int i, int j) const;

  bool isSkew(double tol = kLinalgTol) const;

 private:
  int m_dim;
  std::vector<Cpx> m_raw;
};

// A realified pointwise tensor N: R^{2n} x R^{2n} -> R^{2n} that is skew and
// antilinear in each slot with respect to a complex structure J0.
class AntilinearMap2 {
 public:
  AntilinearMap2() = default;
  // flat has 2n rows and (2n)^2 columns; column u*2n+v holds N(e_u, e_v).
  AntilinearMap2(Eigen::MatrixXd j0, Eigen::MatrixXd flat);

  static AntilinearMap2 fromComplexConstants(const CpxTensor& c);

  int realDim() const { return static_cast<int>(m_j0.rows()); }
  int complexDim() const { return realDim() / 2; }
  const Eigen::MatrixXd& J0() const { return m_j0; }
  const Eigen::MatrixXd& flat() const { return m_flat; }
  Eigen::MatrixXd& mutableFlat() { return m_flat; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  // The matrix v -> N(u, v) for fixed u.
  Eigen::MatrixXd partialMatrix(const Eigen::VectorXd& u) const;

  // Checks skewness and antilinearity in both slots (relative tolerance).
  bool validate(double tol = kLinalgTol) const;

  bool isZero(double tol = kLinalgTol) const;

 private:
  Eigen::MatrixXd m_j0;
  Eigen::MatrixXd m_flat;
};

// Span of all values N(u, v); J0-invariant by antilinearity.
RealSubspace complexImage(const AntilinearMap2& n);

// {v : N(v, s) = 0 for all s in S}.
RealSubspace perpSet(const AntilinearMap2& n, const RealSubspace& s, double tol = kLinalgTol);

struct AdaptedComplexBasis {
  // Real basis change: column 2k is the k-th complex basis vector, column
  // 2k+1 its J0 image, both expressed in ambient coordinates.
  Eigen::MatrixXd basis;
  CpxTensor tensor;
};

// Expresses a realified tensor in an adapted complex basis (v_1, J0 v_1, ...)
// and returns its complex structure constants.
AdaptedComplexBasis complexStructureConstants(const AntilinearMap2& n, double tol = kLinalgTol);

}  // namespace acs
