#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acs/clinalg.hpp"

using namespace acs;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// The cross-product / octonion point tensor: N(X1,X2)=X3, N(X3,X1)=X2,
// N(X2,X3)=X1 on C^3.
AntilinearMap2 crossTensor() {
  CpxTensor c(3);
  c.set(0, 1, 2, Cpx(1, 0));
  c.set(2, 0, 1, Cpx(1, 0));
  c.set(1, 2, 0, Cpx(1, 0));
  return AntilinearMap2::fromComplexConstants(c);
}

// N(X1,X2)=X3 only (all other brackets zero).
AntilinearMap2 heisenbergTensor() {
  CpxTensor c(3);
  c.set(0, 1, 2, Cpx(1, 0));
  return AntilinearMap2::fromComplexConstants(c);
}

}  // namespace

TEST_CASE("standard J0 squares to -identity") {
  for (int n : {1, 2, 3, 4}) {
    MatrixXd j = standardJ0(n);
    CHECK((j * j + MatrixXd::Identity(2 * n, 2 * n)).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("rankAndKernel: rank, kernel, zero matrix edge case") {
  MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 0, 1;  // rank 2
  auto rk = rankAndKernel(m);
  CHECK(rk.rank == 2);
  REQUIRE(rk.kernel.cols() == 1);
  CHECK((m * rk.kernel).norm() == doctest::Approx(0.0).epsilon(1e-12));

  auto rk0 = rankAndKernel(MatrixXd::Zero(4, 2));
  CHECK(rk0.rank == 0);
  CHECK(rk0.kernel.cols() == 2);
}

TEST_CASE("realified multiplication by i is J0") {
  // Complex-linear map v -> i v realifies to J0 itself.
  MatrixXd m = realifyComplexMatrix(Eigen::MatrixXcd::Identity(2, 2) * Cpx(0, 1));
  CHECK((m - standardJ0(2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("subspace operations") {
  MatrixXd j = standardJ0(2);
  MatrixXd cols(4, 2);
  // the complex line through (1, i): real span of (1,0,0,1) and J0 * it
  VectorXd v(4);
  v << 1, 0, 0, 1;
  cols.col(0) = v;
  cols.col(1) = j * v;
  RealSubspace line = RealSubspace::fromColumns(cols);
  CHECK(line.dim() == 2);
  CHECK(line.isInvariantUnder(j));
  CHECK(line.complexDim(j) == 1);
  CHECK(line.contains(j * v));

  VectorXd w(4);
  w << 1, 0, 0, 0;
  RealSubspace other = RealSubspace::fromColumns(w);
  CHECK_FALSE(other.isInvariantUnder(j));
  CHECK(intersectionDim(line, other) == 0);
  RealSubspace sum = line.spanWith(other);
  CHECK(sum.dim() == 3);
  CHECK(intersectionDim(sum, line) == 2);
  auto angles = principalAngles(line, line);
  for (double a : angles) CHECK(a == doctest::Approx(0.0));
}

TEST_CASE("antilinear tensor invariants hold for realified constants") {
  AntilinearMap2 n = crossTensor();
  CHECK(n.validate(1e-12));
  // antilinearity spot check: N(J u, v) = -J N(u, v)
  MatrixXd j = n.J0();
  VectorXd u = VectorXd::Unit(6, 0), v = VectorXd::Unit(6, 2);
  CHECK((n.apply(j * u, v) + j * n.apply(u, v)).norm() == doctest::Approx(0.0));
  CHECK((n.apply(u, j * v) + j * n.apply(u, v)).norm() == doctest::Approx(0.0));
  CHECK((n.apply(u, v) + n.apply(v, u)).norm() == doctest::Approx(0.0));
}

TEST_CASE("non-antilinear input is rejected") {
  AntilinearMap2 bad = crossTensor();
  bad.mutableFlat()(0, 1) += 0.5;  // break the structure
  CHECK_FALSE(bad.validate(1e-9));
}

TEST_CASE("complexImage: full image for the cross tensor, line for Heisenberg") {
  AntilinearMap2 cross = crossTensor();
  RealSubspace im = complexImage(cross);
  CHECK(im.dim() == 6);
  CHECK(im.complexDim(cross.J0()) == 3);

  AntilinearMap2 heis = heisenbergTensor();
  RealSubspace im2 = complexImage(heis);
  CHECK(im2.dim() == 2);
  // image is the complex line X3
  VectorXd x3 = VectorXd::Unit(6, 4);
  CHECK(im2.contains(x3));
}

TEST_CASE("perpSet and kernel") {
  AntilinearMap2 heis = heisenbergTensor();
  RealSubspace full = RealSubspace::full(6);
  RealSubspace ker = perpSet(heis, full);
  CHECK(ker.dim() == 2);
  CHECK(ker.contains(VectorXd::Unit(6, 4)));  // X3 in kernel
  CHECK(ker.isInvariantUnder(heis.J0()));
  // Im subset Ker for this tensor
  CHECK(ker.containsSubspace(complexImage(heis)));

  AntilinearMap2 cross = crossTensor();
  CHECK(perpSet(cross, full).dim() == 0);
}

TEST_CASE("Lambda^2 realified matrix of the cross tensor has rank 6, kernel 0") {
  AntilinearMap2 cross = crossTensor();
  // columns: realified values on the complex basis pairs (12), (13), (23) and
  // their J0-twists; complex dim of the domain is 3, realified 6.
  MatrixXd j = cross.J0();
  MatrixXd m(6, 6);
  int col = 0;
  for (auto [a, b] : {std::pair{0, 2}, {0, 4}, {2, 4}}) {
    VectorXd u = VectorXd::Unit(6, a), v = VectorXd::Unit(6, b);
    m.col(col++) = cross.apply(u, v);
    m.col(col++) = j * cross.apply(u, v);
  }
  auto rk = rankAndKernel(m);
  CHECK(rk.rank == 6);
  CHECK(rk.kernel.cols() == 0);
}

TEST_CASE("complex structure constants round-trip through a realified tensor") {
  AntilinearMap2 cross = crossTensor();
  auto adapted = complexStructureConstants(cross);
  CHECK(adapted.tensor.dim() == 3);
  // rebuild and compare against the original flat data
  AntilinearMap2 rebuilt = AntilinearMap2::fromComplexConstants(adapted.tensor);
  // the adapted basis for a standard-J0 tensor is the standard basis
  CHECK((adapted.basis - MatrixXd::Identity(6, 6)).norm() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK((rebuilt.flat() - cross.flat()).norm() == doctest::Approx(0.0).epsilon(1e-9));
}
