#include "acs/dim4.hpp"

#include <cmath>
#include <complex>

#include "acs/nijenhuis.hpp"

namespace acs {

using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// Real tangent vector of a real (conjugation-invariant) complexified field
// value: the coefficient of d/dz_k realifies to (Re c_k, Im c_k).
Vector4d realTangent(const VectorXcd& complexified) {
  return {complexified(0).real(), complexified(0).imag(), complexified(2).real(),
          complexified(2).imag()};
}

Point displaced(const VarTable& vt, const Vector4d& x) {
  return Point::fromBase(vt, {Cpx(x(0), x(1)), Cpx(x(2), x(3))});
}

Vector4d realCoords(const Point& p) {
  const Cpx z = p.value(0);
  const Cpx w = p.value(2);
  return {z.real(), z.imag(), w.real(), w.imag()};
}

JetField finiteDifferenceJets(const StructureField& s, double h = 1e-4) {
  return [s, h](const Vector4d& x) {
    PointJet jet;
    jet.J = s(x);
    jet.dJ.resize(4);
    for (int k = 0; k < 4; ++k) {
      Vector4d step = Vector4d::Zero();
      step(k) = h;
      const MatrixXd raw = (s(x + step) - s(x - step)) / (2.0 * h);
      // project onto the J-anticommuting part; exact derivatives satisfy
      // d(J^2) = dJ J + J dJ = 0, finite differences only up to O(h^2)
      jet.dJ[static_cast<size_t>(k)] = (raw + jet.J * raw * jet.J) / 2.0;
    }
    return jet;
  };
}

void requireDim4(int complexDim) {
  if (complexDim != 2) {
    throw PreconditionError("the operation requires a 4-dimensional structure");
  }
}

// Smooth canonical section of Pi^2 for pointwise routes: the value of N on a
// real basis pair frozen once at the center point.
struct Section {
  int a = -1, b = -1;

  Vector4d at(const AntilinearMap2& n) const {
    return n.apply(VectorXd::Unit(4, a), VectorXd::Unit(4, b));
  }
};

Section pickSection(const AntilinearMap2& n, double tol) {
  Section best;
  double bestNorm = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const double norm = n.apply(VectorXd::Unit(4, a), VectorXd::Unit(4, b)).norm();
      if (norm > bestNorm) {
        bestNorm = norm;
        best.a = a;
        best.b = b;
      }
    }
  }
  if (bestNorm <= tol) {
    throw PreconditionError("the Nijenhuis tensor vanishes at the point");
  }
  return best;
}

// Bracket of a pair of vector-valued sections by Richardson-extrapolated
// central differences: [u, v]^i = sum_j u^j d_j v^i - v^j d_j u^i.
Vector4d bracketOfSections(
    const std::function<std::pair<Vector4d, Vector4d>(const Vector4d&)>& uv, const Vector4d& x,
    double h) {
  const auto [u0, v0] = uv(x);
  const auto estimate = [&, u0 = u0, v0 = v0](double step) {
    Matrix4d du = Matrix4d::Zero();
    Matrix4d dv = Matrix4d::Zero();
    for (int j = 0; j < 4; ++j) {
      Vector4d delta = Vector4d::Zero();
      delta(j) = step;
      const auto [up, vp] = uv(x + delta);
      const auto [um, vm] = uv(x - delta);
      du.col(j) = (up - um) / (2.0 * step);
      dv.col(j) = (vp - vm) / (2.0 * step);
    }
    return Vector4d(dv * u0 - du * v0);
  };
  const Vector4d coarse = estimate(h);
  const Vector4d fine = estimate(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

// Complex coordinate of a vector of Pi relative to the basis (X, JX):
// v = Re(mu) X + Im(mu) JX.  Throws when v has a component off the plane.
Cpx planeCoordinate(const Vector4d& x, const Vector4d& jx, const Vector4d& v, double tol) {
  MatrixXd basis(4, 2);
  basis.col(0) = x;
  basis.col(1) = jx;
  const Vector2d sol = basis.colPivHouseholderQr().solve(v);
  if ((basis * sol - v).norm() > tol * (1.0 + v.norm())) {
    throw PreconditionError("value escaped the characteristic plane");
  }
  return {sol(0), sol(1)};
}

DerivedDistribution distributionFromValues(const Vector4d& x, const Vector4d& y,
                                           const Vector4d& b, double tol) {
  MatrixXd cols(4, 3);
  cols.col(0) = x / x.norm();
  cols.col(1) = y / y.norm();
  cols.col(2) = b;
  if (b.norm() > tol) cols.col(2) /= b.norm();

  Eigen::JacobiSVD<MatrixXd> svd(cols, Eigen::ComputeFullU);
  DerivedDistribution out;
  const double top = svd.singularValues()(0);
  for (int k = 0; k < 3; ++k) {
    if (svd.singularValues()(k) > tol * top) ++out.rank;
  }
  out.rank3 = out.rank >= 3;
  out.pi2 = cols.leftCols(2);
  out.pi3 = svd.matrixU().leftCols(out.rank);
  return out;
}

// Symbolic canonical section of Pi^2 for a chart: X = the realification of
// the first complexified basis pair with a Nijenhuis value nonzero at the
// point (scanned in a fixed order), together with Y = JX as a field.
std::pair<VectorField, VectorField> symbolicSection(const ChartStructure& s, const Point& p,
                                                    double tol) {
  requireDim4(s.complexDim());
  constexpr int kPairs[6][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {0, 1}, {2, 3}};
  for (const auto& pair : kPairs) {
    const VectorField v = nijenhuisSymbolic(s, VectorField::basisVector(pair[0], 2),
                                            VectorField::basisVector(pair[1], 2));
    if (v.isZero()) continue;
    // the realification of v or of iv may individually vanish at p even when
    // v(p) != 0; seed with whichever is larger there
    VectorField xf = VectorField::realFrom(v);
    VectorField alt = VectorField::realFrom(scale(CoeffExpr::constant(Cpx(0, 1)), v));
    const double normX = realTangent(xf.evalAt(p)).norm();
    const double normAlt = realTangent(alt.evalAt(p)).norm();
    if (std::max(normX, normAlt) <= tol) continue;
    if (normAlt > normX) xf = std::move(alt);
    return {xf, applyJ(s, xf)};
  }
  throw PreconditionError("the Nijenhuis tensor vanishes at the point");
}

// Shared frame assembly: fix the sign of xi_1 at the center (first component
// above the relative threshold made positive), propagate it continuously to
// neighboring evaluations, and take the outer bracket xi_3 = [xi_1, xi_2].
EStructure assembleFrame(const std::function<Vector4d(const Vector4d&)>& rawXi1,
                         const std::function<Matrix4d(const Vector4d&)>& jAt,
                         const Vector4d& x0, double outerStep) {
  Vector4d center = rawXi1(x0);
  for (int k = 0; k < 4; ++k) {
    if (std::abs(center(k)) > 1e-9 * center.norm()) {
      if (center(k) < 0.0) center = -center;
      break;
    }
  }
  const auto xi12 = [&](const Vector4d& y) {
    Vector4d xi1 = rawXi1(y);
    if (xi1.dot(center) < 0.0) xi1 = -xi1;
    return std::pair<Vector4d, Vector4d>(xi1, jAt(y) * xi1);
  };

  EStructure out;
  const auto [xi1, xi2] = xi12(x0);
  const Vector4d xi3 = bracketOfSections(xi12, x0, outerStep);
  out.frame.col(0) = xi1;
  out.frame.col(1) = xi2;
  out.frame.col(2) = xi3;
  out.frame.col(3) = jAt(x0) * xi3;
  out.signAmbiguity = true;
  return out;
}

// Pointwise-route core.  The normalized section xi_1(y) = c(y) X(y) solves
// N(xi_1, [xi_1, J xi_1]) = xi_1: with N(X, [X, JX]) = mu X the scaling is
// c = |mu|^{-1/2} e^{i arg(mu)/2}.  Pi is N-isotropic, so the Pi-component
// of the bracket never enters the normalization.
EStructure eStructureCore(const JetField& jets, const Vector4d& x0, double innerStep,
                          double rankTol) {
  const AntilinearMap2 nCenter = nijenhuisAt(jets(x0));
  const Section section = pickSection(nCenter, 1e-10);

  const auto xy = [&](const Vector4d& y) {
    const PointJet jet = jets(y);
    const Vector4d x = section.at(nijenhuisAt(jet));
    return std::pair<Vector4d, Vector4d>(x, jet.J * x);
  };

  {
    const auto [x, y] = xy(x0);
    const Vector4d b = bracketOfSections(xy, x0, innerStep);
    if (!distributionFromValues(x, y, b, rankTol).rank3) {
      throw PreconditionError(
          "Pi integrable: the derived distribution has rank 2, no canonical e-structure");
    }
  }

  const auto rawXi1 = [&](const Vector4d& y) {
    const PointJet jet = jets(y);
    const AntilinearMap2 n = nijenhuisAt(jet);
    const Vector4d x = section.at(n);
    const Vector4d jx = jet.J * x;
    const Vector4d bracket = bracketOfSections(xy, y, innerStep);
    const Cpx mu = planeCoordinate(x, jx, n.apply(x, bracket), 1e-6);
    if (std::abs(mu) < 1e-12) {
      throw PreconditionError("degenerate e-structure normalization");
    }
    const Cpx c = std::polar(1.0 / std::sqrt(std::abs(mu)), std::arg(mu) / 2.0);
    return Vector4d(c.real() * x + c.imag() * jx);
  };
  const auto jAt = [&](const Vector4d& y) { return Matrix4d(jets(y).J); };
  return assembleFrame(rawXi1, jAt, x0, 1e-3);
}

}  // namespace

DerivedDistribution derivedDistribution(const ChartStructure& s, const Point& p, double tol) {
  const auto [xf, yf] = symbolicSection(s, p, tol);
  const VectorField bf = lieBracket(xf, yf);
  return distributionFromValues(realTangent(xf.evalAt(p)), realTangent(yf.evalAt(p)),
                                realTangent(bf.evalAt(p)), tol);
}

DerivedDistribution derivedDistribution(const JetField& s, const Eigen::Vector4d& x,
                                        double tol) {
  const AntilinearMap2 nCenter = nijenhuisAt(s(x));
  const Section section = pickSection(nCenter, 1e-10);
  const auto xy = [&](const Vector4d& y) {
    const PointJet jet = s(y);
    const Vector4d xv = section.at(nijenhuisAt(jet));
    return std::pair<Vector4d, Vector4d>(xv, jet.J * xv);
  };
  const auto [xv, yv] = xy(x);
  return distributionFromValues(xv, yv, bracketOfSections(xy, x, 1e-4), tol);
}

DerivedDistribution derivedDistribution(const StructureField& s, const Eigen::Vector4d& x,
                                        double tol) {
  return derivedDistribution(finiteDifferenceJets(s), x, tol);
}

EStructure eStructure(const ChartStructure& s, const Point& p) {
  const auto [xf, yf] = symbolicSection(s, p, 1e-10);
  const VectorField bf = lieBracket(xf, yf);
  if (!derivedDistribution(s, p).rank3) {
    throw PreconditionError(
        "Pi integrable: the derived distribution has rank 2, no canonical e-structure");
  }

  const VarTable& vt = s.vars;
  const auto rawXi1 = [&](const Vector4d& y) {
    const Point py = displaced(vt, y);
    const PointJet jet = s.jetAt(py);
    const Vector4d x = realTangent(xf.evalAt(py));
    const Vector4d jx = jet.J * x;
    const Vector4d bracket = realTangent(bf.evalAt(py));
    const AntilinearMap2 n = nijenhuisAt(jet);
    const Cpx mu = planeCoordinate(x, jx, n.apply(x, bracket), 1e-6);
    if (std::abs(mu) < 1e-12) {
      throw PreconditionError("degenerate e-structure normalization");
    }
    const Cpx c = std::polar(1.0 / std::sqrt(std::abs(mu)), std::arg(mu) / 2.0);
    return Vector4d(c.real() * x + c.imag() * jx);
  };
  const auto jAt = [&](const Vector4d& y) { return Matrix4d(s.jetAt(displaced(vt, y)).J); };
  return assembleFrame(rawXi1, jAt, realCoords(p), 1e-3);
}

EStructure eStructure(const JetField& s, const Eigen::Vector4d& x) {
  return eStructureCore(s, x, 1e-4, 1e-6);
}

EStructure eStructure(const StructureField& s, const Eigen::Vector4d& x) {
  return eStructureCore(finiteDifferenceJets(s), x, 1e-4, 1e-4);
}

double quotientCircle(const ChartStructure& s, const Point& p, const Eigen::Vector4d& v) {
  const VectorField xf = symbolicSection(s, p, 1e-10).first;
  const PointJet jet = s.jetAt(p);
  const Vector4d x = realTangent(xf.evalAt(p));
  const Vector4d jx = jet.J * x;

  MatrixXd basis(4, 2);
  basis.col(0) = x;
  basis.col(1) = jx;
  const Vector2d inPlane = basis.colPivHouseholderQr().solve(v);
  if ((basis * inPlane - v).norm() < 1e-8 * (1.0 + v.norm())) {
    throw PreconditionError("the vector lies in Pi: the quotient class is zero");
  }

  const AntilinearMap2 n = nijenhuisAt(jet);
  const Cpx c1 = planeCoordinate(x, jx, n.apply(v, x), 1e-8);
  const Cpx c2 = planeCoordinate(x, jx, n.apply(v, jx), 1e-8);
  Eigen::Matrix2d m;
  m << c1.real(), c2.real(), c1.imag(), c2.imag();
  return std::abs(m.determinant());
}

namespace {

// J dz = i dz + b dw_bar, J dw = i dw; returns b.
const CoeffExpr& requireAdapted(const ChartStructure& s) {
  requireDim4(s.complexDim());
  const CoeffExpr eye = CoeffExpr::constant(Cpx(0, 1));
  const bool adapted = s.a(0, 0) == eye && s.a(0, 1).isZero() && s.a(1, 0).isZero() &&
                       s.a(1, 1) == eye && s.b(0, 0).isZero() && s.b(1, 0).isZero() &&
                       s.b(1, 1).isZero();
  if (!adapted) {
    throw PreconditionError("the chart is not in the adapted form J dz = i dz + b dw_bar");
  }
  return s.b(0, 1);
}

}  // namespace

ProjectibilityReport projectibilityResidual(const ChartStructure& s) {
  const CoeffExpr& b = requireAdapted(s);
  constexpr int kW = 2;
  constexpr int kWbar = 3;

  ProjectibilityReport out;
  // fiber-derivatives of the (dz, dz_bar) entries of the z-row
  for (const CoeffExpr& entry : {s.a(0, 0), s.b(0, 0)}) {
    out.jResiduals.push_back(diff(entry, kW));
    out.jResiduals.push_back(diff(entry, kWbar));
  }
  const CoeffExpr bw = diff(b, kW);
  out.nResiduals.push_back(diff(bw, kW));
  out.nResiduals.push_back(diff(bw, kWbar));

  const auto allZero = [](const std::vector<CoeffExpr>& v) {
    for (const auto& e : v) {
      if (!e.isZero()) return false;
    }
    return true;
  };
  out.jProjectible = allZero(out.jResiduals);
  out.nProjectible = allZero(out.nResiduals);
  return out;
}

std::pair<CoeffExpr, CoeffExpr> symmetryResidual(const ChartStructure& s, const CoeffExpr& f) {
  const CoeffExpr& b = requireAdapted(s);
  constexpr int kZbar = 1;
  constexpr int kW = 2;
  constexpr int kWbar = 3;

  const CoeffExpr psi = Cpx(0, 0.5) * conjugate(b);
  const CoeffExpr r0 = diff(f, kWbar);
  const CoeffExpr r1 =
      diff(f, kZbar) + psi * diff(f, kW) - f * diff(psi, kW) - conjugate(f) * diff(psi, kWbar);
  return {r0, r1};
}

GaugeInvariants gaugeInvariants(const CoeffExpr& lambda) {
  constexpr int kZ = 0;
  constexpr int kZbar = 1;
  const VarTable vt({"z"});
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const Point p = Point::fromBase(vt, {Cpx(0.25 * i, 0.25 * j)});
      if (std::abs(eval(lambda, p)) < 1e-12) {
        throw PreconditionError("lambda vanishes on the sample grid");
      }
    }
  }

  GaugeInvariants out;
  out.lambdaNum =
      diff(diff(lambda, kZ), kZbar) * lambda - diff(lambda, kZ) * diff(lambda, kZbar);
  out.lambdaDen = lambda * lambda;
  out.q = lambda * lambda * conjugate(lambda) * conjugate(lambda);
  return out;
}

}  // namespace acs
