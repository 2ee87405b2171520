#include "acs/nijenhuis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace acs {

using Eigen::Matrix3cd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector2cd;
using Eigen::Vector3cd;
using Eigen::Vector4cd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// projective distance between complex lines: sqrt(1 - |<a,b>|^2/(|a|^2|b|^2))
double lineDistance(const VectorXcd& a, const VectorXcd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double overlap = std::abs(a.dot(b)) / (na * nb);
  return std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
}

int complexRank(const MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

bool rankAmbiguous(const VectorXd& sv, double tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return false;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double rel = sv(i) / sv(0);
    if (rel > tol / 10.0 && rel < tol * 10.0) return true;
  }
  return false;
}

}  // namespace

CpxTensor pointTensorFromJson(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("complex_dim") || !spec.contains("N")) {
    throw std::invalid_argument("point tensor: expected {complex_dim, N}");
  }
  const int n = spec.at("complex_dim").get<int>();
  CpxTensor c(n);
  for (const auto& entry : spec.at("N")) {
    const int i = entry.at("i").get<int>();
    const int j = entry.at("j").get<int>();
    const int k = entry.at("k").get<int>();
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n) {
      throw std::invalid_argument("point tensor: index out of range");
    }
    if (i >= j) {
      throw std::invalid_argument(
          "point tensor: entries must have i < j (the skew partner is implied)");
    }
    c.set(i - 1, j - 1, k - 1, parseConstant(entry.at("c").get<std::string>()));
  }
  if (!AntilinearMap2::fromComplexConstants(c).validate()) {
    throw std::invalid_argument("point tensor: realification fails the tensor invariants");
  }
  return c;
}

nlohmann::json pointTensorToJson(const CpxTensor& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < c.dim(); ++i) {
    for (int j = i + 1; j < c.dim(); ++j) {
      for (int k = 0; k < c.dim(); ++k) {
        const Cpx v = c.coeff(i, j, k);
        if (v == Cpx(0, 0)) continue;
        std::ostringstream text;
        text.precision(17);
        text << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "*i)";
        entries.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"c", text.str()}});
      }
    }
  }
  return {{"complex_dim", c.dim()}, {"N", std::move(entries)}};
}

AntilinearMap2 nijenhuisAt(const PointJet& jet) {
  const auto d = jet.J.rows();
  if (jet.J.cols() != d || static_cast<Eigen::Index>(jet.dJ.size()) != d) {
    throw std::invalid_argument("nijenhuisAt: jet shape mismatch");
  }
  // directional derivatives of J along e_a and along J e_a
  std::vector<MatrixXd> dAlong(static_cast<size_t>(d)), dAlongJ(static_cast<size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a) {
    dAlong[static_cast<size_t>(a)] = jet.dJ[static_cast<size_t>(a)];
    MatrixXd q = MatrixXd::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
      if (jet.J(m, a) != 0.0) q += jet.J(m, a) * jet.dJ[static_cast<size_t>(m)];
    }
    dAlongJ[static_cast<size_t>(a)] = std::move(q);
  }
  MatrixXd flat = MatrixXd::Zero(d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      if (a == b) continue;
      flat.col(a * d + b) = dAlongJ[static_cast<size_t>(a)].col(b) -
                            dAlongJ[static_cast<size_t>(b)].col(a) -
                            jet.J * dAlong[static_cast<size_t>(a)].col(b) +
                            jet.J * dAlong[static_cast<size_t>(b)].col(a);
    }
  }
  AntilinearMap2 out(jet.J, std::move(flat));
  if (!out.validate(1e-9)) {
    const double residual = (jet.J * jet.J + MatrixXd::Identity(d, d)).norm();
    std::ostringstream msg;
    msg << "nijenhuisAt: output fails tensor invariants (J^2+1 residual " << residual
        << "); the input jet is not an almost complex 1-jet";
    throw std::invalid_argument(msg.str());
  }
  return out;
}

AntilinearMap2 conjugateTensor(const AntilinearMap2& n, const MatrixXcd& g) {
  const MatrixXd gr = realifyComplexMatrix(g);
  const MatrixXd gi = gr.inverse();
  const auto d = n.realDim();
  MatrixXd flat(d, static_cast<Eigen::Index>(d) * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      flat.col(a * d + b) = gr * n.apply(gi.col(a), gi.col(b));
    }
  }
  return AntilinearMap2(n.J0(), std::move(flat));
}

namespace {

// N(u,v)^k = sum_{ij} conj(u_i) conj(v_j) c_{ij}^k on complex coordinates
Vector3cd applyC3(const CpxTensor& c, const Vector3cd& u, const Vector3cd& v) {
  Vector3cd out = Vector3cd::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Cpx f = std::conj(u(i)) * std::conj(v(j));
      if (f == Cpx(0, 0)) continue;
      for (int k = 0; k < 3; ++k) out(k) += f * c.coeff(i, j, k);
    }
  }
  return out;
}

// matrix of v -> N(l, v): P_{kj} = sum_i conj(l_i) c_{ij}^k
Matrix3cd phi1Matrix(const CpxTensor& c, const Vector3cd& l) {
  Matrix3cd p = Matrix3cd::Zero();
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      Cpx acc(0, 0);
      for (int i = 0; i < 3; ++i) acc += std::conj(l(i)) * c.coeff(i, j, k);
      p(k, j) = acc;
    }
  }
  return p;
}

// Phi2(Phi1(l)) with a fixed choice (a,b) of spanning columns of Phi1.
// The composite is a holomorphic quadratic polynomial in l: conj(P col_a) is
// linear in l, and applyC3 conjugates once more. jac (optional) receives the
// complex derivative matrix dF/dl.
Vector3cd phiComposite(const CpxTensor& c, const Vector3cd& l, int a, int b,
                       Matrix3cd* jac = nullptr) {
  // conj(U)_i = sum_p l_p conj(c_{pa}^i) and likewise for the b column
  Vector3cd ubar = Vector3cd::Zero(), vbar = Vector3cd::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int p = 0; p < 3; ++p) {
      ubar(i) += l(p) * std::conj(c.coeff(p, a, i));
      vbar(i) += l(p) * std::conj(c.coeff(p, b, i));
    }
  }
  Vector3cd f = Vector3cd::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Cpx w = ubar(i) * vbar(j);
      if (w == Cpx(0, 0) && !jac) continue;
      for (int k = 0; k < 3; ++k) f(k) += w * c.coeff(i, j, k);
    }
  }
  if (jac) {
    jac->setZero();
    for (int m = 0; m < 3; ++m) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const Cpx w =
              std::conj(c.coeff(m, a, i)) * vbar(j) + ubar(i) * std::conj(c.coeff(m, b, j));
          if (w == Cpx(0, 0)) continue;
          for (int k = 0; k < 3; ++k) (*jac)(k, m) += w * c.coeff(i, j, k);
        }
      }
    }
  }
  return f;
}

// pick the column pair of P with the largest cross-product norm
std::pair<int, int> bestColumnPair(const Matrix3cd& p) {
  double best = -1.0;
  std::pair<int, int> pair{0, 1};
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    const double score = p.col(a).cross(p.col(b)).norm();
    if (score > best) {
      best = score;
      pair = {a, b};
    }
  }
  return pair;
}

}  // namespace

PhiReport phiMaps(const CpxTensor& c) {
  if (c.dim() != 3) throw PreconditionError("phiMaps: tensor must have complex dimension 3");
  {
    MatrixXcd values(3, 3);
    int col = 0;
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) values.col(col++) = c.value(i, j);
    if (complexRank(values, kLinalgTol) != 3) {
      throw PreconditionError("phiMaps: requires rImage = 3");
    }
  }

  constexpr int kSeedsPerChart = 100;
  constexpr int kNewtonIters = 40;
  constexpr double kConvergence = 1e-10;
  // a multiple root's position is conditioned like sqrt(eps/curvature), so
  // copies of one root can scatter up to ~1e-5; distinct roots of these
  // classification problems stay >= 1e-2 apart
  constexpr double kCluster = 1e-4;
  constexpr double kVerify = 1e-8;

  PhiReport report;
  std::mt19937 rng(20240901u);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);

  for (int chart = 0; chart < 3; ++chart) {
    const int i1 = (chart + 1) % 3, i2 = (chart + 2) % 3;
    for (int seed = 0; seed < kSeedsPerChart; ++seed) {
      Eigen::Vector4d t;
      if (seed < 16) {
        // deterministic corner grid, then random fill
        t << (seed & 1 ? 0.7 : -0.7), (seed & 2 ? 0.7 : -0.7), (seed & 4 ? 0.7 : -0.7),
            (seed & 8 ? 0.7 : -0.7);
      } else {
        t << dist(rng), dist(rng), dist(rng), dist(rng);
      }

      Vector2cd tc(Cpx(t(0), t(1)), Cpx(t(2), t(3)));
      auto lineOf = [&](const Vector2cd& s) {
        Vector3cd l;
        l(chart) = Cpx(1, 0);
        l(i1) = s(0);
        l(i2) = s(1);
        return l;
      };

      // fix the spanning-column pair for this Newton run
      auto [colA, colB] = bestColumnPair(phi1Matrix(c, lineOf(tc)));
      // the composite is holomorphic in l, so Newton runs in C^2 with the
      // analytic Jacobian (no finite-difference noise at degenerate roots)
      Eigen::Matrix2cd jac;
      auto residual = [&](const Vector2cd& s, Eigen::Matrix2cd* jacOut) -> Vector2cd {
        const Vector3cd l = lineOf(s);
        Matrix3cd df;
        const Vector3cd f = phiComposite(c, l, colA, colB, jacOut ? &df : nullptr);
        if (std::abs(f(chart)) < 1e-14) {
          if (jacOut) jacOut->setZero();
          return Vector2cd::Constant(Cpx(1e6, 0));  // left the chart
        }
        if (jacOut) {
          // d(F_r/F_chart)/dl_m - identity, with l_m ranging over (i1, i2)
          const std::array<int, 2> rows{i1, i2};
          const std::array<int, 2> cols{i1, i2};
          for (int r = 0; r < 2; ++r) {
            for (int m = 0; m < 2; ++m) {
              (*jacOut)(r, m) = (df(rows[r], cols[m]) * f(chart) -
                                 f(rows[r]) * df(chart, cols[m])) /
                                    (f(chart) * f(chart)) -
                                (r == m ? Cpx(1, 0) : Cpx(0, 0));
            }
          }
        }
        return Vector2cd(f(i1) / f(chart) - s(0), f(i2) / f(chart) - s(1));
      };

      // min-norm least-squares Newton step; SVD keeps degenerate (parabolic)
      // roots reachable where a plain LU solve would bail out
      auto newtonStep = [&](const Vector2cd& g) {
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-13);
        Vector2cd step = svd.solve(g);
        if (step.norm() > 2.0) step *= 2.0 / step.norm();
        return step;
      };

      bool converged = false;
      for (int iter = 0; iter < kNewtonIters; ++iter) {
        const Vector2cd g = residual(tc, &jac);
        if (g.norm() < kConvergence) {
          converged = true;
          break;
        }
        if (!g.allFinite() || g.norm() > 1e5) break;
        Vector2cd step = newtonStep(g);
        if (!step.allFinite()) break;
        // backtracking damping globalizes convergence across chart boundaries
        Vector2cd tNext = tc - step;
        for (int bt = 0; bt < 6 && residual(tNext, nullptr).norm() >= g.norm(); ++bt) {
          step *= 0.5;
          tNext = tc - step;
        }
        tc = tNext;
      }
      if (!converged) continue;
      // polish: at a multiple root, |t - root| ~ sqrt(residual) at the
      // convergence threshold; keep stepping while the residual improves so
      // duplicates collapse inside the dedup radius
      for (int extra = 0; extra < 25; ++extra) {
        const Vector2cd g = residual(tc, &jac);
        if (g.norm() == 0.0) break;
        const Vector2cd tNew = tc - newtonStep(g);
        if (!tNew.allFinite() || residual(tNew, nullptr).norm() >= g.norm()) break;
        tc = tNew;
      }

      Vector3cd l = lineOf(tc).normalized();
      // verify projectively with the best column pair at the solution
      const Matrix3cd p = phi1Matrix(c, l);
      if (complexRank(p, 1e-7) < 2) continue;
      auto [va, vb] = bestColumnPair(p);
      const Vector3cd f = applyC3(c, p.col(va), p.col(vb));
      const double dist2 = lineDistance(f, l);
      if (dist2 > kVerify) continue;

      bool duplicate = false;
      for (auto& fp : report.points) {
        if (lineDistance(fp.line, l) < kCluster) {
          duplicate = true;
          if (dist2 < fp.residual) {  // keep the best representative
            fp.line = l;
            fp.residual = dist2;
          }
          break;
        }
      }
      if (duplicate) continue;
      report.points.push_back({l, false, dist2});
    }
  }

  // incidence per representative: does C.N(Lambda^2 Pi) = C.f lie inside Pi?
  for (auto& fp : report.points) {
    const Matrix3cd p = phi1Matrix(c, fp.line);
    auto [va, vb] = bestColumnPair(p);
    const Vector3cd f = applyC3(c, p.col(va), p.col(vb));
    Eigen::JacobiSVD<MatrixXcd> svd(p, Eigen::ComputeFullU);
    const MatrixXcd basis = svd.matrixU().leftCols(2);
    const Vector3cd proj = basis * (basis.adjoint() * f);
    // converged incident points sit at perp/|f| <~ 1e-6 while transversal
    // ones stay above ~1e-4 even under strong basis changes
    fp.incident = (f - proj).norm() <= 1e-5 * f.norm();
  }

  for (const auto& fp : report.points) {
    if (fp.incident) {
      ++report.incidentCount;
    } else {
      ++report.transversalCount;
    }
  }
  report.continuum = static_cast<int>(report.points.size()) > 10;
  report.lowConfidence = report.points.empty();
  return report;
}

namespace {

// complex structure constants of a realified tensor; fast path for the
// standard J0, adapted-basis route otherwise
CpxTensor complexConstantsOf(const AntilinearMap2& n) {
  const int half = n.complexDim();
  if ((n.J0() - standardJ0(half)).norm() < 1e-12) {
    CpxTensor c(half);
    for (int i = 0; i < half; ++i) {
      for (int j = i + 1; j < half; ++j) {
        const VectorXcd value = complexifyRealVector(
            n.apply(VectorXd::Unit(2 * half, 2 * i), VectorXd::Unit(2 * half, 2 * j)));
        for (int k = 0; k < half; ++k) {
          if (std::abs(value(k)) > 0.0) c.set(i, j, k, value(k));
        }
      }
    }
    return c;
  }
  return complexStructureConstants(n).tensor;
}

}  // namespace

ClassificationReport classify(const AntilinearMap2& n, double tol) {
  ClassificationReport report;
  report.n = n.complexDim();
  if (report.n < 2) throw std::invalid_argument("classify: requires complex dimension >= 2");

  const RealSubspace image = complexImage(n);
  report.rImage = image.dim() / 2;
  {
    // rank-ambiguity scan of the image matrix
    MatrixXd cols(n.flat().rows(), 2 * n.flat().cols());
    cols << n.flat(), n.J0() * n.flat();
    auto rk = rankAndKernel(cols, tol);
    if (rankAmbiguous(rk.singularValues, tol)) {
      report.lowConfidence = true;
      report.notes.push_back("image rank is within a factor 10 of the tolerance");
    }
  }
  const RealSubspace kernel = perpSet(n, RealSubspace::full(n.realDim()), tol);
  report.imageInKernel = report.rImage > 0 && kernel.containsSubspace(image, 1e-7);

  if (report.rImage == 0) {
    report.typeLabel = "INTEGRABLE";
    return report;
  }

  if (report.n == 2) {
    report.typeLabel = "DIM4_NONZERO";
    return report;
  }

  if (report.n == 3) {
    switch (report.rImage) {
      case 1:
        report.typeLabel = report.imageInKernel ? "DG2(2)" : "DG2(1)";
        return report;
      case 2:
        report.typeLabel = "DG1";
        return report;
      default: {
        report.fixedPointData = phiMaps(complexConstantsOf(n));
        const auto& phi = report.fixedPointData;
        if (phi.lowConfidence) {
          report.lowConfidence = true;
          report.typeLabel = "NDG(3)-candidate";
          report.notes.push_back("no fixed points located; defaulted to NDG(3)-candidate");
          return report;
        }
        if (phi.continuum) {
          report.typeLabel = "NDG(3)-candidate";
          report.notes.push_back("continuum of fixed points (Phi2 . Phi1 = id)");
        } else if (phi.transversalCount == 3) {
          report.typeLabel = "NDG(3)-candidate";
        } else if (phi.transversalCount == 1) {
          report.typeLabel = "NDG(1|2)-candidate";
        } else if (phi.transversalCount == 0 && phi.incidentCount >= 1) {
          report.typeLabel = "NDG(4)-candidate";
        } else {
          report.lowConfidence = true;
          report.typeLabel = phi.transversalCount >= 2 ? "NDG(3)-candidate" : "NDG(1|2)-candidate";
          std::ostringstream msg;
          msg << "unexpected fixed-point counts (transversal " << phi.transversalCount
              << ", incident " << phi.incidentCount << ")";
          report.notes.push_back(msg.str());
        }
        return report;
      }
    }
  }

  // n >= 4
  if (report.rImage == 1) {
    const CpxTensor c = complexConstantsOf(n);
    const int dim = c.dim();
    // image direction E: the largest value vector
    VectorXcd e = VectorXcd::Zero(dim);
    double best = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        const VectorXcd v = c.value(i, j);
        if (v.norm() > best) {
          best = v.norm();
          e = v;
        }
      }
    }
    MatrixXcd omega = MatrixXcd::Zero(dim, dim);
    const double e2 = e.squaredNorm();
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        omega(i, j) = e.dot(c.value(i, j)) / e2;  // component along E
      }
    }
    const int rank = complexRank(omega, tol);
    if (rank % 2 != 0) {
      report.lowConfidence = true;
      report.notes.push_back("scalar form has odd numerical rank");
    }
    report.m = rank / 2;
    // Z = conj(ker omega); W subset Z iff omega * conj(e) = 0
    const double wInZ = (omega * e.conjugate()).norm() / (std::max(1e-300, omega.norm()) * e.norm());
    report.branch = wInZ <= 1e-7 ? "W⊂Z" : "W∩Z=0";
    std::ostringstream label;
    label << "GENERAL(m=" << report.m << ", " << report.branch << ")";
    report.typeLabel = label.str();
    return report;
  }

  report.typeLabel = "GENERAL";
  std::ostringstream msg;
  msg << "rImage = " << report.rImage << "; no rank-1 scalar-form refinement";
  report.notes.push_back(msg.str());
  return report;
}

ClassificationReport classify(const CpxTensor& c, double tol) {
  return classify(AntilinearMap2::fromComplexConstants(c), tol);
}

PluckerCounts pluckerCounts(int n) {
  if (n < 4) throw std::invalid_argument("pluckerCounts: requires n >= 4");
  PluckerCounts out;
  out.d = (static_cast<long long>(n) * n - 3LL * n) / 2;
  out.codim = out.d + 3 - n;
  out.dimSigma = n - 4;
  // degSigma = binom(2n-4, n-2)/(n-1), computed exactly
  long long binom = 1;
  for (int k = 1; k <= n - 2; ++k) {
    binom = binom * (n - 2 + k) / k;  // exact at every step for binomials
  }
  out.degSigma = binom / (n - 1);
  return out;
}

// ----------------------------------------------------------------------------
// realization in complex dimension 2 (4 real dimensions)

namespace {

// first-order Wirtinger jet of a complex scalar: value and the four partials
// d/dz, d/dz_bar, d/dw, d/dw_bar
struct JetScalar {
  Cpx v{0, 0};
  std::array<Cpx, 4> d{Cpx(0, 0), Cpx(0, 0), Cpx(0, 0), Cpx(0, 0)};

  static JetScalar constant(Cpx c) { return {c, {}}; }
};

JetScalar operator+(const JetScalar& a, const JetScalar& b) {
  JetScalar out{a.v + b.v, {}};
  for (int k = 0; k < 4; ++k) out.d[k] = a.d[k] + b.d[k];
  return out;
}

JetScalar operator-(const JetScalar& a, const JetScalar& b) {
  JetScalar out{a.v - b.v, {}};
  for (int k = 0; k < 4; ++k) out.d[k] = a.d[k] - b.d[k];
  return out;
}

JetScalar operator*(const JetScalar& a, const JetScalar& b) {
  JetScalar out{a.v * b.v, {}};
  for (int k = 0; k < 4; ++k) out.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return out;
}

JetScalar operator*(Cpx c, const JetScalar& a) {
  JetScalar out{c * a.v, {}};
  for (int k = 0; k < 4; ++k) out.d[k] = c * a.d[k];
  return out;
}

JetScalar operator/(const JetScalar& a, const JetScalar& b) {
  JetScalar out{a.v / b.v, {}};
  for (int k = 0; k < 4; ++k) out.d[k] = (a.d[k] * b.v - a.v * b.d[k]) / (b.v * b.v);
  return out;
}

// conjugation swaps the Wirtinger partials: d(conj f)/dv = conj(df/d conj(v))
JetScalar conjJet(const JetScalar& a) {
  JetScalar out{std::conj(a.v), {}};
  out.d[0] = std::conj(a.d[1]);
  out.d[1] = std::conj(a.d[0]);
  out.d[2] = std::conj(a.d[3]);
  out.d[3] = std::conj(a.d[2]);
  return out;
}

// square root of a real-positive jet
JetScalar sqrtJet(const JetScalar& a) {
  JetScalar out{std::sqrt(a.v.real()), {}};
  for (int k = 0; k < 4; ++k) out.d[k] = a.d[k] / (2.0 * out.v);
  return out;
}

JetScalar jetOf(const CoeffExpr& e, const Point& p) {
  JetScalar out;
  out.v = eval(e, p);
  for (int k = 0; k < 4; ++k) out.d[k] = eval(diff(e, k), p);
  return out;
}

struct StructureJets {
  JetScalar alpha, beta, k;  // k = sqrt(1+|alpha|^2)
};

StructureJets structureJets(const CoeffExpr& A, const CoeffExpr& B, const VarTable& vt,
                            const Point& p) {
  if (vt.coordCount() != 2) {
    throw std::invalid_argument("realizeDim4: chart must have exactly two coordinates");
  }
  const int w = 2, wb = 3;  // Wirtinger ids of the second coordinate
  const JetScalar aJet = jetOf(A, p);
  const JetScalar bJet = jetOf(B, p);
  const JetScalar aWbar = jetOf(diff(A, wb), p);
  const JetScalar bW = jetOf(diff(B, w), p);

  const double nA = std::abs(aWbar.v), nB = std::abs(bW.v);
  if (!(nB > 1e-12)) {
    throw PreconditionError("realizeDim4: |B_w| > 0 fails at the point");
  }
  if (!(nA > nB)) {
    throw PreconditionError("realizeDim4: |A_wbar| > |B_w| fails at the point");
  }
  // conj(A)_w = conj(A_wbar), conj(A)_ww = conj(A_wbar,wbar)
  const Cpx aBarW = std::conj(aWbar.v);
  const Cpx aBarWW = std::conj(eval(diff(diff(A, wb), wb), p));
  const Cpx bWW = eval(diff(diff(B, w), w), p);
  const Cpx degeneracy = aBarW * bWW - aBarWW * bW.v;
  if (std::abs(degeneracy) <= 1e-12 * std::max(1.0, nA * nA)) {
    throw PreconditionError("realizeDim4: conj(A)_w B_ww = conj(A)_ww B_w (Xi_+ would vanish)");
  }

  StructureJets out;
  const JetScalar denom = aWbar * conjJet(aWbar) - bW * conjJet(bW);
  out.alpha = Cpx(0, -2) * (aWbar * bW) / denom;
  out.k = sqrtJet(JetScalar::constant(Cpx(1, 0)) + out.alpha * conjJet(out.alpha));
  const JetScalar onePlusK = JetScalar::constant(Cpx(1, 0)) + out.k;
  out.beta = JetScalar::constant(Cpx(0, 0)) - out.alpha * conjJet(aJet) -
             Cpx(0, 1) * (onePlusK * bJet);
  return out;
}

PointJet jetFromStructure(const StructureJets& s) {
  const JetScalar onePlusK = JetScalar::constant(Cpx(1, 0)) + s.k;
  // row z: a(0,0) = i k, b(0,0) = alpha, a(0,1) = i alpha conj(beta)/(1+k), b(0,1) = beta
  std::array<std::array<JetScalar, 2>, 2> aEntries;
  std::array<std::array<JetScalar, 2>, 2> bEntries;
  aEntries[0][0] = Cpx(0, 1) * s.k;
  aEntries[0][1] = Cpx(0, 1) * (s.alpha * conjJet(s.beta)) / onePlusK;
  aEntries[1][0] = JetScalar::constant(Cpx(0, 0));
  aEntries[1][1] = JetScalar::constant(Cpx(0, 1));
  bEntries[0][0] = s.alpha;
  bEntries[0][1] = s.beta;
  bEntries[1][0] = JetScalar::constant(Cpx(0, 0));
  bEntries[1][1] = JetScalar::constant(Cpx(0, 0));

  PointJet jet;
  MatrixXcd A(2, 2), B(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      A(i, j) = aEntries[i][j].v;
      B(i, j) = bEntries[i][j].v;
    }
  }
  jet.J = realifyComplexMatrix(A.transpose()) + realifyAntilinearMatrix(B.conjugate().transpose());
  for (int dir = 0; dir < 4; ++dir) {
    MatrixXcd dA(2, 2), dB(2, 2);
    const int coord = dir / 2;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const auto& ja = aEntries[i][j].d;
        const auto& jb = bEntries[i][j].d;
        if (dir % 2 == 0) {
          dA(i, j) = ja[2 * coord] + ja[2 * coord + 1];
          dB(i, j) = jb[2 * coord] + jb[2 * coord + 1];
        } else {
          dA(i, j) = Cpx(0, 1) * (ja[2 * coord] - ja[2 * coord + 1]);
          dB(i, j) = Cpx(0, 1) * (jb[2 * coord] - jb[2 * coord + 1]);
        }
      }
    }
    jet.dJ.push_back(realifyComplexMatrix(dA.transpose()) +
                     realifyAntilinearMatrix(dB.conjugate().transpose()));
  }
  return jet;
}

// Lemma-2 generator from the structure jets
Vector4cd generatorFromJets(const StructureJets& s) {
  const Cpx alpha = s.alpha.v;
  const Cpx alphaW = s.alpha.d[2];
  const Cpx alphaBar = std::conj(alpha);
  const Cpx alphaBarW = std::conj(s.alpha.d[3]);
  const Cpx betaW = s.beta.d[2];
  const Cpx k = s.k.v;

  if (std::abs(alpha) < 1e-10) {
    // v = -i alpha_w dz_bar + conj(beta) alpha_w dw - 2 i beta_w dw_bar
    return Vector4cd(Cpx(0, 0), Cpx(0, -1) * alphaW, std::conj(s.beta.v) * alphaW,
                     Cpx(0, -2) * betaW);
  }
  const Cpx sym = (alphaW * alphaBar + alpha * alphaBarW) / (2.0 * k);
  const Cpx skew = (alphaW * alphaBar - alpha * alphaBarW) / 2.0;
  const Cpx xiPlus = sym + skew;
  const Cpx xiMinus = sym - skew;
  if (std::abs(xiPlus) < 1e-12) {
    throw PreconditionError("lemma2: Xi_+ = 0 (singular characteristic distribution)");
  }
  const Cpx onePlusK = 1.0 + k;
  Vector4cd xi;
  xi(0) = Cpx(1, 0);
  xi(1) = Cpx(0, -1) * onePlusK / alphaBar;
  xi(2) = std::conj(s.beta.v) / alphaBar;
  xi(3) = Cpx(0, 1) * s.beta.v / onePlusK * (xiMinus / xiPlus) - Cpx(0, 2) * betaW / xiPlus;
  return xiPlus * xi;
}

// real 2-plane spanned by Re(v), Im(v) for a complexified vector with
// components (dz, dz_bar, dw, dw_bar)
RealSubspace planeOfComplexifiedVector(const Vector4cd& v) {
  // real field c_z dz + conj dz_bar + c_w dw + conj dw_bar <-> xi = (c_z, c_w)
  const Cpx reZ = (v(0) + std::conj(v(1))) / 2.0;
  const Cpx reW = (v(2) + std::conj(v(3))) / 2.0;
  const Cpx imZ = (v(0) - std::conj(v(1))) / Cpx(0, 2);
  const Cpx imW = (v(2) - std::conj(v(3))) / Cpx(0, 2);
  MatrixXd cols(4, 2);
  cols.col(0) = realifyComplexVector((VectorXcd(2) << reZ, reW).finished());
  cols.col(1) = realifyComplexVector((VectorXcd(2) << imZ, imW).finished());
  return RealSubspace::fromColumns(cols);
}

}  // namespace

PointJet lemma1JetAt(const CoeffExpr& A, const CoeffExpr& B, const VarTable& vt, const Point& p) {
  return jetFromStructure(structureJets(A, B, vt, p));
}

Realization realizeDim4(const CoeffExpr& A, const CoeffExpr& B, const VarTable& vt,
                        const Point& p) {
  const StructureJets s = structureJets(A, B, vt, p);
  Realization out;
  out.alpha = s.alpha.v;
  out.beta = s.beta.v;
  out.jet = jetFromStructure(s);
  out.generator = generatorFromJets(s);

  const AntilinearMap2 n = nijenhuisAt(out.jet);
  const RealSubspace image = complexImage(n);

  // the prescribed plane: real and imaginary parts of dz - A dw - B dw_bar
  const Vector4cd prescribed(Cpx(1, 0), Cpx(0, 0), -eval(A, p), -eval(B, p));
  const RealSubspace plane = planeOfComplexifiedVector(prescribed);
  auto angles = principalAngles(image, plane);
  out.imageAngle = angles.empty() ? 1.57 : angles.back();

  const RealSubspace generatorPlane = planeOfComplexifiedVector(out.generator);
  auto genAngles = principalAngles(image, generatorPlane);
  out.generatorAngle = genAngles.empty() ? 1.57 : genAngles.back();

  if (out.imageAngle > 1e-6) {
    std::ostringstream msg;
    msg << "realizeDim4: realization check failed (principal angle " << out.imageAngle << ")";
    throw std::runtime_error(msg.str());
  }
  return out;
}

Eigen::Vector4cd lemma2Generator(const ChartStructure& ch, const Point& p) {
  if (ch.complexDim() != 2) {
    throw std::invalid_argument("lemma2Generator: chart must have complex dimension 2");
  }
  // foliated normal form: J dw = i dw and no other w-row entries
  const CoeffExpr iConst = CoeffExpr::constant(Cpx(0, 1));
  if (ch.a(1, 1) != iConst || !ch.a(1, 0).isZero() || !ch.b(1, 0).isZero() ||
      !ch.b(1, 1).isZero()) {
    throw PreconditionError("lemma2Generator: chart is not in the foliated normal form");
  }
  const CoeffExpr& alphaExpr = ch.b(0, 0);
  const CoeffExpr& betaExpr = ch.b(0, 1);

  StructureJets s;
  s.alpha = jetOf(alphaExpr, p);
  s.beta = jetOf(betaExpr, p);
  s.k = sqrtJet(JetScalar::constant(Cpx(1, 0)) + s.alpha * conjJet(s.alpha));

  // verify the diagonal entries pointwise: a(z,z) = ik, a(z,w) = i a conj(b)/(1+k)
  const Cpx a00 = eval(ch.a(0, 0), p);
  const Cpx a01 = eval(ch.a(0, 1), p);
  const Cpx expected01 = Cpx(0, 1) * s.alpha.v * std::conj(s.beta.v) / (1.0 + s.k.v);
  if (std::abs(a00 - Cpx(0, 1) * s.k.v) > 1e-9 * (1.0 + std::abs(a00)) ||
      std::abs(a01 - expected01) > 1e-9 * (1.0 + std::abs(a01))) {
    throw PreconditionError("lemma2Generator: z-row entries do not match the normal form");
  }
  return generatorFromJets(s);
}

// ----------------------------------------------------------------------------
// transversal non-degeneracy in complex dimension 4

namespace {

// adapted complex basis (two vectors) of a 4-real-dimensional J-invariant space
std::array<VectorXd, 2> complexBasisOf(const RealSubspace& s, const MatrixXd& j0) {
  const VectorXd b1 = s.basis().col(0);
  // choose the column least aligned with span(b1, J b1)
  MatrixXd pair(s.ambientDim(), 2);
  pair << b1, j0 * b1;
  RealSubspace line = RealSubspace::fromColumns(pair);
  for (int c = 1; c < s.dim(); ++c) {
    const VectorXd cand = s.basis().col(c);
    if (!line.contains(cand, 1e-6)) {
      const VectorXd ortho = (cand - line.project(cand)).normalized();
      return {b1, ortho};
    }
  }
  throw std::invalid_argument("complexBasisOf: space is not 2-complex-dimensional");
}

// roots of q2 x^2 + q1 x + q0 = 0 (assumes q2 != 0 for the generic path)
std::vector<Cpx> quadraticRoots(Cpx q2, Cpx q1, Cpx q0, double scale) {
  std::vector<Cpx> roots;
  if (std::abs(q2) <= 1e-10 * scale) {
    if (std::abs(q1) > 1e-10 * scale) roots.push_back(-q0 / q1);
    return roots;
  }
  const Cpx disc = std::sqrt(q1 * q1 - 4.0 * q2 * q0);
  roots.push_back((-q1 + disc) / (2.0 * q2));
  roots.push_back((-q1 - disc) / (2.0 * q2));
  return roots;
}

}  // namespace

TransversalReport transversalCheck(const AntilinearMap2& n, const RealSubspace& p1,
                                   const RealSubspace& p2, double tol) {
  const MatrixXd& j0 = n.J0();
  if (n.complexDim() != 4) {
    throw PreconditionError("transversalCheck: tensor must have complex dimension 4");
  }
  if (p1.dim() != 4 || p2.dim() != 4 || !p1.isInvariantUnder(j0, 1e-8) ||
      !p2.isInvariantUnder(j0, 1e-8)) {
    throw PreconditionError("transversalCheck: P1, P2 must be J-invariant of complex dimension 2");
  }
  if (intersectionDim(p1, p2) != 0) {
    throw PreconditionError("transversalCheck: P1 and P2 are not transversal");
  }

  TransversalReport report;
  auto restrictionResidual = [&](const RealSubspace& s) {
    double worst = 0.0;
    for (int a = 0; a < s.dim(); ++a) {
      for (int b = a + 1; b < s.dim(); ++b) {
        worst = std::max(worst, n.apply(s.basis().col(a), s.basis().col(b)).norm());
      }
    }
    return worst;
  };
  report.residualP1 = restrictionResidual(p1);
  report.residualP2 = restrictionResidual(p2);

  MatrixXd cross(8, 16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      cross.col(4 * a + b) = n.apply(p1.basis().col(a), p2.basis().col(b));
    }
  }
  report.crossRank = rankAndKernel(cross, 1e-9).rank;
  report.antiIso = report.crossRank == 8 && report.residualP1 <= tol && report.residualP2 <= tol;
  if (!report.antiIso) {
    report.notes.push_back("N is not an anti-isomorphism P1 x P2 -> T for this splitting");
    return report;
  }

  // complex bases and the four cross values in complex coordinates
  const auto e1 = complexBasisOf(p1, j0);
  const auto e2 = complexBasisOf(p2, j0);
  // complex coordinates on T adapted to (e1, e2): solve the realified system
  MatrixXd frame(8, 8);
  frame << e1[0], j0 * e1[0], e1[1], j0 * e1[1], e2[0], j0 * e2[0], e2[1], j0 * e2[1];
  Eigen::PartialPivLU<MatrixXd> frameLu(frame);
  auto coords = [&](const VectorXd& v) {
    const VectorXd c = frameLu.solve(v);
    Vector4cd out;
    for (int k = 0; k < 4; ++k) out(k) = Cpx(c(2 * k), c(2 * k + 1));
    return out;
  };

  // value(a,b) = N(e1[a], e2[b]) in adapted complex coordinates
  std::array<std::array<Vector4cd, 2>, 2> value;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      value[a][b] = coords(n.apply(e1[a], e2[b]));
    }
  }

  // N(e1[0] + t e1[1], e2[0] + s e2[1]) = v00 + conj(s) v01 + conj(t) v10 + conj(ts) v11;
  // demanding the value in Pi_s kills two complex coordinates -> quadratic in conj(s)
  double scale = 0.0;
  for (auto& row : value) {
    for (auto& v : row) scale = std::max(scale, v.norm());
  }
  report.linesFound = true;
  for (int target = 0; target < 2 && report.linesFound; ++target) {
    // coordinates that must vanish: the other plane's pair
    const int z0 = target == 0 ? 2 : 0;
    const int z1 = z0 + 1;
    // component c: A_c + B_c tbar + C_c sbar + D_c tbar sbar with
    // A_c = v00_c, B_c = v10_c, C_c = v01_c, D_c = v11_c
    const Cpx A0 = value[0][0](z0), B0 = value[1][0](z0), C0 = value[0][1](z0),
              D0 = value[1][1](z0);
    const Cpx A1 = value[0][0](z1), B1 = value[1][0](z1), C1 = value[0][1](z1),
              D1 = value[1][1](z1);
    // eliminate tbar: tbar = -(A + C sbar)/(B + D sbar) from component 0;
    // resultant: (A1 + C1 s)(B0 + D0 s) - (A0 + C0 s)(B1 + D1 s) = 0
    const Cpx q2 = C1 * D0 - C0 * D1;
    const Cpx q1 = A1 * D0 + C1 * B0 - A0 * D1 - C0 * B1;
    const Cpx q0 = A1 * B0 - A0 * B1;
    const auto roots = quadraticRoots(q2, q1, q0, scale * scale);
    if (roots.size() != 2) {
      report.linesFound = false;
      report.notes.push_back("line system is degenerate (fewer than two roots)");
      break;
    }
    for (size_t j = 0; j < roots.size(); ++j) {
      const Cpx sbar = roots[j];
      const Cpx denom = B0 + D0 * sbar;
      Cpx tbar;
      if (std::abs(denom) > 1e-10 * scale) {
        tbar = -(A0 + C0 * sbar) / denom;
      } else {
        const Cpx denom1 = B1 + D1 * sbar;
        if (std::abs(denom1) <= 1e-10 * scale) {
          report.linesFound = false;
          report.notes.push_back("line system is degenerate (no finite t)");
          break;
        }
        tbar = -(A1 + C1 * sbar) / denom1;
      }
      const Cpx t = std::conj(tbar), sVal = std::conj(sbar);
      const Vector4cd line = value[0][0] + std::conj(sVal) * value[0][1] +
                             std::conj(t) * value[1][0] + std::conj(t * sVal) * value[1][1];
      report.linesIn[target][j] = line / line.norm();
      // V lines in adapted complex coordinates of Pi_1 and Pi_2
      Vector4cd v1 = Vector4cd::Zero(), v2 = Vector4cd::Zero();
      v1(0) = 1;
      v1(1) = t;
      v2(2) = 1;
      v2(3) = sVal;
      report.vLines[0][j][target] = v1.normalized();
      report.vLines[1][j][target] = v2.normalized();
    }
  }

  if (report.linesFound) {
    // strong non-degeneracy: a choice of distinguished lines (one per plane)
    // avoided by all four V-lines of that plane
    auto planeStrong = [&](int plane, int which) {
      const Vector4cd& l = report.linesIn[plane][which];
      for (int j = 0; j < 2; ++j) {
        for (int s = 0; s < 2; ++s) {
          if (lineDistance(report.vLines[plane][j][s], l) < 1e-8) return false;
        }
      }
      return true;
    };
    report.strong = false;
    for (int w1 = 0; w1 < 2 && !report.strong; ++w1) {
      for (int w2 = 0; w2 < 2 && !report.strong; ++w2) {
        report.strong = planeStrong(0, w1) && planeStrong(1, w2);
      }
    }
  }
  return report;
}

CpxTensor buildStrongNdg8(const std::array<std::array<Cpx, 2>, 2>& l1,
                          const std::array<std::array<Cpx, 2>, 2>& l2) {
  // unknowns U_{ab} = N(e_1^{a+1}, e_2^{b+1}); equations indexed by (j,s):
  // U00 + conj(l2) U01 + conj(l1) U10 + conj(l1 l2) U11 = e_s^j
  Eigen::Matrix4cd m;
  Eigen::Matrix4cd rhs = Eigen::Matrix4cd::Zero();  // columns are coordinates of e_s^j
  int row = 0;
  for (int j = 0; j < 2; ++j) {
    for (int s = 0; s < 2; ++s) {
      const Cpx c1 = std::conj(l1[j][s]);
      const Cpx c2 = std::conj(l2[j][s]);
      m(row, 0) = 1;
      m(row, 1) = c2;
      m(row, 2) = c1;
      m(row, 3) = c1 * c2;
      // e_s^j = X_{2s+j} in 0-based coordinates (e_i^1 = X_{2i-2}, e_i^2 = X_{2i-1})
      rhs(row, 2 * s + j) = 1;
      ++row;
    }
  }
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(m);
  if (!lu.isInvertible()) {
    throw PreconditionError("buildStrongNdg8: the moduli give a singular interpolation system");
  }
  const Eigen::Matrix4cd u = lu.solve(rhs);  // row r: U for slot r, columns = coordinates

  CpxTensor c(4);
  // basis order: e_1^1 = X_1, e_1^2 = X_2, e_2^1 = X_3, e_2^2 = X_4 (0-based 0..3)
  const std::array<std::pair<int, int>, 4> slots{
      std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}};  // (e_1^a, e_2^b) index pairs
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) {
      if (u(r, k) != Cpx(0, 0)) c.set(slots[r].first, slots[r].second, k, u(r, k));
    }
  }
  return c;
}

}  // namespace acs
