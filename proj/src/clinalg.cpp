#include "acs/clinalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acs {

using Eigen::MatrixXd;
using Eigen::MatrixXcd;
using Eigen::VectorXd;
using Eigen::VectorXcd;

MatrixXd standardJ0(int complexDim) {
  MatrixXd j = MatrixXd::Zero(2 * complexDim, 2 * complexDim);
  for (int k = 0; k < complexDim; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

MatrixXd realifyComplexMatrix(const MatrixXcd& m) {
  const auto rows = m.rows();
  const auto cols = m.cols();
  MatrixXd r(2 * rows, 2 * cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double a = m(i, j).real();
      const double b = m(i, j).imag();
      r(2 * i, 2 * j) = a;
      r(2 * i, 2 * j + 1) = -b;
      r(2 * i + 1, 2 * j) = b;
      r(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return r;
}

MatrixXd realifyAntilinearMatrix(const MatrixXcd& m) {
  const auto rows = m.rows();
  const auto cols = m.cols();
  MatrixXd r(2 * rows, 2 * cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double a = m(i, j).real();
      const double b = m(i, j).imag();
      r(2 * i, 2 * j) = a;
      r(2 * i, 2 * j + 1) = b;
      r(2 * i + 1, 2 * j) = b;
      r(2 * i + 1, 2 * j + 1) = -a;
    }
  }
  return r;
}

VectorXd realifyComplexVector(const VectorXcd& v) {
  VectorXd r(2 * v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    r(2 * k) = v(k).real();
    r(2 * k + 1) = v(k).imag();
  }
  return r;
}

VectorXcd complexifyRealVector(const VectorXd& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("complexifyRealVector: odd dimension");
  VectorXcd c(v.size() / 2);
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = Cpx(v(2 * k), v(2 * k + 1));
  return c;
}

RankKernel rankAndKernel(const MatrixXd& m, double tol) {
  RankKernel out;
  if (m.size() == 0) {
    out.kernel = MatrixXd::Identity(m.cols(), m.cols());
    return out;
  }
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
  out.singularValues = svd.singularValues();
  const double top = out.singularValues.size() > 0 ? out.singularValues(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < out.singularValues.size(); ++i) {
    if (out.singularValues(i) > tol * std::max(top, 1e-300)) ++rank;
  }
  if (top == 0.0) rank = 0;
  out.rank = rank;
  out.kernel = svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

RealSubspace RealSubspace::fromColumns(const MatrixXd& cols, double tol) {
  RealSubspace s;
  s.m_ambient = static_cast<int>(cols.rows());
  if (cols.cols() == 0 || cols.norm() == 0.0) {
    s.m_basis = MatrixXd::Zero(cols.rows(), 0);
    return s;
  }
  Eigen::JacobiSVD<MatrixXd> svd(cols, Eigen::ComputeThinU);
  const VectorXd& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  s.m_basis = svd.matrixU().leftCols(rank);
  return s;
}

RealSubspace RealSubspace::full(int ambientDim) {
  RealSubspace s;
  s.m_ambient = ambientDim;
  s.m_basis = MatrixXd::Identity(ambientDim, ambientDim);
  return s;
}

RealSubspace RealSubspace::zero(int ambientDim) {
  RealSubspace s;
  s.m_ambient = ambientDim;
  s.m_basis = MatrixXd::Zero(ambientDim, 0);
  return s;
}

bool RealSubspace::contains(const VectorXd& v, double tol) const {
  const VectorXd residual = v - project(v);
  return residual.norm() <= tol * std::max(1.0, v.norm());
}

bool RealSubspace::containsSubspace(const RealSubspace& other, double tol) const {
  for (int c = 0; c < other.dim(); ++c) {
    if (!contains(other.basis().col(c), tol)) return false;
  }
  return true;
}

bool RealSubspace::isInvariantUnder(const MatrixXd& m, double tol) const {
  for (int c = 0; c < dim(); ++c) {
    const VectorXd img = m * m_basis.col(c);
    const VectorXd residual = img - project(img);
    if (residual.norm() > tol * std::max(1.0, m.norm())) return false;
  }
  return true;
}

int RealSubspace::complexDim(const MatrixXd& j, double tol) const {
  if (dim() % 2 != 0 || !isInvariantUnder(j, tol)) return -1;
  return dim() / 2;
}

RealSubspace RealSubspace::spanWith(const RealSubspace& other, double tol) const {
  MatrixXd cols(m_ambient, dim() + other.dim());
  cols << m_basis, other.basis();
  return fromColumns(cols, tol);
}

VectorXd RealSubspace::project(const VectorXd& v) const {
  if (dim() == 0) return VectorXd::Zero(m_ambient);
  return m_basis * (m_basis.transpose() * v);
}

int intersectionDim(const RealSubspace& a, const RealSubspace& b, double tol) {
  if (a.dim() == 0 || b.dim() == 0) return 0;
  MatrixXd cols(a.ambientDim(), a.dim() + b.dim());
  cols << a.basis(), b.basis();
  return a.dim() + b.dim() - rankAndKernel(cols, tol).rank;
}

std::vector<double> principalAngles(const RealSubspace& a, const RealSubspace& b) {
  if (a.dim() == 0 || b.dim() == 0) return {};
  const MatrixXd overlap = a.basis().transpose() * b.basis();
  Eigen::JacobiSVD<MatrixXd> svd(overlap);
  std::vector<double> angles;
  angles.reserve(static_cast<size_t>(svd.singularValues().size()));
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    angles.push_back(std::acos(std::clamp(svd.singularValues()(i), 0.0, 1.0)));
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

CpxTensor::CpxTensor(int complexDim) : m_dim(complexDim) {
  if (complexDim <= 0) throw std::invalid_argument("CpxTensor: dimension must be positive");
  m_raw.assign(static_cast<size_t>(complexDim) * complexDim * complexDim, Cpx(0, 0));
}

namespace {
size_t slot(int n, int i, int j, int k) {
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) {
    throw std::out_of_range("CpxTensor index out of range");
  }
  return (static_cast<size_t>(i) * n + j) * n + k;
}
}  // namespace

void CpxTensor::add(int i, int j, int k, Cpx c) { m_raw[slot(m_dim, i, j, k)] += c; }

void CpxTensor::set(int i, int j, int k, Cpx c) {
  add(i, j, k, c);
  add(j, i, k, -c);
}

Cpx CpxTensor::coeff(int i, int j, int k) const { return m_raw[slot(m_dim, i, j, k)]; }

VectorXcd CpxTensor::value(int i, int j) const {
  VectorXcd v(m_dim);
  for (int k = 0; k < m_dim; ++k) v(k) = coeff(i, j, k);
  return v;
}

bool CpxTensor::isSkew(double tol) const {
  for (int i = 0; i < m_dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      for (int k = 0; k < m_dim; ++k) {
        if (std::abs(coeff(i, j, k) + coeff(j, i, k)) > tol) return false;
      }
    }
  }
  return true;
}

AntilinearMap2::AntilinearMap2(MatrixXd j0, MatrixXd flat)
    : m_j0(std::move(j0)), m_flat(std::move(flat)) {
  const auto d = m_j0.rows();
  if (m_j0.cols() != d || d % 2 != 0) throw std::invalid_argument("AntilinearMap2: bad J0 shape");
  if (m_flat.rows() != d || m_flat.cols() != d * d) {
    throw std::invalid_argument("AntilinearMap2: flat storage must be 2n x (2n)^2");
  }
}

AntilinearMap2 AntilinearMap2::fromComplexConstants(const CpxTensor& c) {
  const int n = c.dim();
  const int d = 2 * n;
  const MatrixXd j = standardJ0(n);
  MatrixXd flat = MatrixXd::Zero(d, static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < n; ++jj) {
      const VectorXd base = realifyComplexVector(c.value(i, jj));
      // N(x_i, x_j), then the J0-twists from antilinearity:
      // N(y_i, x_j) = N(x_i, y_j) = -J0 N(x_i, x_j), N(y_i, y_j) = -N(x_i, x_j).
      flat.col(static_cast<Eigen::Index>(2 * i) * d + 2 * jj) = base;
      flat.col(static_cast<Eigen::Index>(2 * i + 1) * d + 2 * jj) = -j * base;
      flat.col(static_cast<Eigen::Index>(2 * i) * d + 2 * jj + 1) = -j * base;
      flat.col(static_cast<Eigen::Index>(2 * i + 1) * d + 2 * jj + 1) = -base;
    }
  }
  return AntilinearMap2(j, std::move(flat));
}

VectorXd AntilinearMap2::apply(const VectorXd& u, const VectorXd& v) const {
  const auto d = m_j0.rows();
  VectorXd out = VectorXd::Zero(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    if (u(a) == 0.0) continue;
    out += u(a) * (m_flat.middleCols(a * d, d) * v);
  }
  return out;
}

MatrixXd AntilinearMap2::partialMatrix(const VectorXd& u) const {
  const auto d = m_j0.rows();
  MatrixXd out = MatrixXd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    if (u(a) == 0.0) continue;
    out += u(a) * m_flat.middleCols(a * d, d);
  }
  return out;
}

bool AntilinearMap2::validate(double tol) const {
  const auto d = m_j0.rows();
  const double scale = std::max(1.0, m_flat.norm());
  // J0^2 = -1
  if ((m_j0 * m_j0 + MatrixXd::Identity(d, d)).norm() > tol * scale) return false;
  for (Eigen::Index a = 0; a < d; ++a) {
    const MatrixXd block = m_flat.middleCols(a * d, d);
    // skewness: N(e_a, e_b) = -N(e_b, e_a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const VectorXd mirrored = m_flat.col(b * d + a);
      if ((block.col(b) + mirrored).norm() > tol * scale) return false;
    }
    // antilinearity in the second slot: N(e_a, J e_b) = -J N(e_a, e_b)
    if ((block * m_j0 + m_j0 * block).norm() > tol * scale) return false;
  }
  // antilinearity in the first slot: N(J e_a, e_b) = -J N(e_a, e_b)
  for (Eigen::Index a = 0; a < d; ++a) {
    VectorXd ja = m_j0.col(a);
    const MatrixXd lhs = partialMatrix(ja);
    const MatrixXd rhs = -m_j0 * m_flat.middleCols(a * d, d);
    if ((lhs - rhs).norm() > tol * scale) return false;
  }
  return true;
}

bool AntilinearMap2::isZero(double tol) const { return m_flat.norm() <= tol; }

RealSubspace complexImage(const AntilinearMap2& n) {
  const auto d = n.flat().rows();
  MatrixXd cols(d, 2 * n.flat().cols());
  cols << n.flat(), n.J0() * n.flat();
  return RealSubspace::fromColumns(cols);
}

RealSubspace perpSet(const AntilinearMap2& n, const RealSubspace& s, double tol) {
  const auto d = n.flat().rows();
  if (s.dim() == 0) return RealSubspace::full(static_cast<int>(d));
  MatrixXd constraints(d * s.dim(), d);
  for (int c = 0; c < s.dim(); ++c) {
    // row block: v -> N(v, s_c); entry (k, a) = N(e_a, s_c)_k
    const VectorXd sc = s.basis().col(c);
    for (Eigen::Index a = 0; a < d; ++a) {
      constraints.block(static_cast<Eigen::Index>(c) * d, a, d, 1) =
          n.flat().middleCols(a * d, d) * sc;
    }
  }
  auto rk = rankAndKernel(constraints, tol);
  return RealSubspace::fromColumns(rk.kernel, tol);
}

AdaptedComplexBasis complexStructureConstants(const AntilinearMap2& n, double tol) {
  const int d = n.realDim();
  const int half = n.complexDim();
  const MatrixXd& j = n.J0();
  MatrixXd basis(d, d);
  int built = 0;
  RealSubspace sofar = RealSubspace::zero(d);
  for (int e = 0; e < d && built < half; ++e) {
    VectorXd cand = VectorXd::Unit(d, e) - sofar.project(VectorXd::Unit(d, e));
    if (cand.norm() < 1e-8) continue;
    cand.normalize();
    basis.col(2 * built) = cand;
    basis.col(2 * built + 1) = j * cand;
    ++built;
    sofar = RealSubspace::fromColumns(basis.leftCols(2 * built), tol);
  }
  if (built < half) throw std::runtime_error("complexStructureConstants: basis construction failed");

  // coordinates in the adapted basis via a linear solve
  Eigen::PartialPivLU<MatrixXd> lu(basis);
  CpxTensor tensor(half);
  for (int i = 0; i < half; ++i) {
    for (int jj = i + 1; jj < half; ++jj) {
      const VectorXd value = n.apply(basis.col(2 * i), basis.col(2 * jj));
      const VectorXd coords = lu.solve(value);
      for (int k = 0; k < half; ++k) {
        const Cpx c(coords(2 * k), coords(2 * k + 1));
        if (std::abs(c) > tol) tensor.set(i, jj, k, c);
      }
    }
  }
  return AdaptedComplexBasis{basis, std::move(tensor)};
}

}  // namespace acs
