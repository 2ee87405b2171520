#include "acs/symbol.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace acs {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// Rows of the gamma_1 identity as a linear system over all (2n)^2 real
// endomorphism entries, vectorized column-major: column c*2n+r is the entry
// R(r, c). One 2n-row block per unordered real basis pair (a, b).
MatrixXd gamma1System(const AntilinearMap2& n) {
  const int d = n.realDim();
  std::vector<MatrixXd> partials(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) {
    partials[static_cast<size_t>(a)] = n.partialMatrix(VectorXd::Unit(d, a));
  }
  const int pairs = d * (d - 1) / 2;
  MatrixXd m = MatrixXd::Zero(static_cast<Eigen::Index>(pairs) * d,
                              static_cast<Eigen::Index>(d) * d);
  int block = 0;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b, ++block) {
      const VectorXd nab = partials[static_cast<size_t>(a)].col(b);
      for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
          // R = E_{rc}: N(R e_a, e_b) + N(e_a, R e_b) - R N(e_a, e_b)
          VectorXd val = VectorXd::Zero(d);
          if (c == a) val -= partials[static_cast<size_t>(b)].col(r);  // N(e_r, e_b)
          if (c == b) val += partials[static_cast<size_t>(a)].col(r);  // N(e_a, e_r)
          val(r) -= nab(c);
          m.block(static_cast<Eigen::Index>(block) * d, static_cast<Eigen::Index>(c) * d + r,
                  d, 1) = val;
        }
      }
    }
  }
  return m;
}

// vec (column-major) of the realification of a complex n x n matrix.
VectorXd vecRealify(const MatrixXcd& f) {
  const MatrixXd r = realifyComplexMatrix(f);
  return Eigen::Map<const VectorXd>(r.data(), r.size());
}

std::vector<std::vector<int>> multisetsOf(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(k), 0);
  while (true) {
    out.push_back(cur);
    int pos = k - 1;
    while (pos >= 0 && cur[static_cast<size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    const int next = cur[static_cast<size_t>(pos)] + 1;
    for (int q = pos; q < k; ++q) cur[static_cast<size_t>(q)] = next;
  }
  return out;
}

int multisetIndex(const std::vector<std::vector<int>>& sets, std::vector<int> key) {
  std::sort(key.begin(), key.end());
  const auto it = std::lower_bound(sets.begin(), sets.end(), key);
  if (it == sets.end() || *it != key) {
    throw std::logic_error("symbol: multiset lookup failed");
  }
  return static_cast<int>(it - sets.begin());
}

SymbolSpace prolongation(const AntilinearMap2& nTensor, int k, double tol) {
  const int n = nTensor.complexDim();
  const MatrixXd m1 = gamma1System(nTensor);
  const auto sets = multisetsOf(n, k);          // value multisets, size k
  const auto args = multisetsOf(n, k - 1);      // insertion multisets, size k-1
  const int unknowns = static_cast<int>(sets.size()) * n;  // complex

  // Linear maps y -> vec(realify(F_alpha)) with y = (Re H, Im H) stacked.
  // F_alpha(t, q) = H[alpha + {q}, t].
  const int d = 2 * n;
  MatrixXd system(static_cast<Eigen::Index>(2 * m1.rows()) * static_cast<Eigen::Index>(args.size()),
                  2 * unknowns);
  Eigen::Index rowBase = 0;
  for (const auto& alpha : args) {
    MatrixXd toVec = MatrixXd::Zero(d * d, 2 * unknowns);
    MatrixXd toVecI = MatrixXd::Zero(d * d, 2 * unknowns);
    for (int q = 0; q < n; ++q) {
      std::vector<int> key = alpha;
      key.push_back(q);
      const int ms = multisetIndex(sets, std::move(key));
      for (int t = 0; t < n; ++t) {
        const int u = ms * n + t;  // complex unknown H[ms, t]
        // realify maps entry a+bi at (t, q) to [[a,-b],[b,a]] at rows/cols (2t, 2q)
        MatrixXcd unitRe = MatrixXcd::Zero(n, n);
        unitRe(t, q) = Cpx(1, 0);
        // H = x + iy contributes x*E + y*(iE) to F and x*(iE) + y*(-E) to iF
        toVec.col(u) = vecRealify(unitRe);
        toVec.col(unknowns + u) = vecRealify(Cpx(0, 1) * unitRe);
        toVecI.col(u) = vecRealify(Cpx(0, 1) * unitRe);
        toVecI.col(unknowns + u) = -toVec.col(u);
      }
    }
    system.middleRows(rowBase, m1.rows()) = m1 * toVec;
    rowBase += m1.rows();
    system.middleRows(rowBase, m1.rows()) = m1 * toVecI;
    rowBase += m1.rows();
  }

  RankKernel rk = rankAndKernel(system, tol);
  SymbolSpace out;
  out.level = k;
  out.realDim = 2 * unknowns - rk.rank;
  out.multisets = sets;
  for (int c = 0; c < rk.kernel.cols(); ++c) {
    VectorXcd h(unknowns);
    for (int u = 0; u < unknowns; ++u) {
      h(u) = Cpx(rk.kernel(u, c), rk.kernel(unknowns + u, c));
    }
    out.coeffs.push_back(std::move(h));
  }
  return out;
}

}  // namespace

SymbolSpace gamma1(const AntilinearMap2& nTensor, double tol) {
  const int n = nTensor.complexDim();
  const MatrixXd m1 = gamma1System(nTensor);
  // restrict to complex-linear endomorphisms: f = realify(F)
  const int unknowns = n * n;  // complex
  MatrixXd p(m1.cols(), 2 * unknowns);
  for (int q = 0; q < n; ++q) {
    for (int t = 0; t < n; ++t) {
      MatrixXcd unit = MatrixXcd::Zero(n, n);
      unit(t, q) = Cpx(1, 0);
      p.col(q * n + t) = vecRealify(unit);
      p.col(unknowns + q * n + t) = vecRealify(Cpx(0, 1) * unit);
    }
  }
  RankKernel rk = rankAndKernel(m1 * p, tol);
  SymbolSpace out;
  out.level = 1;
  out.realDim = 2 * unknowns - rk.rank;
  const int d = 2 * n;
  for (int c = 0; c < rk.kernel.cols(); ++c) {
    const VectorXd v = p * rk.kernel.col(c);
    out.endos.push_back(Eigen::Map<const MatrixXd>(v.data(), d, d));
  }
  return out;
}

SymbolSpace gammaK(const AntilinearMap2& nTensor, int k, double tol) {
  if (k < 1) throw std::invalid_argument("gammaK: level must be >= 1");
  if (k == 1) return gamma1(nTensor, tol);
  return prolongation(nTensor, k, tol);
}

Eigen::VectorXd symbolValue(const SymbolSpace& s, int idx,
                            const std::vector<Eigen::VectorXd>& args) {
  if (static_cast<int>(args.size()) != s.level) {
    throw std::invalid_argument("symbolValue: expected one argument per level");
  }
  if (s.level == 1) {
    return s.endos.at(static_cast<size_t>(idx)) * args[0];
  }
  const VectorXcd& h = s.coeffs.at(static_cast<size_t>(idx));
  const int n = static_cast<int>(args[0].size()) / 2;
  std::vector<VectorXcd> cargs;
  cargs.reserve(args.size());
  for (const auto& a : args) cargs.push_back(complexifyRealVector(a));

  // complex-multilinear evaluation over all index tuples
  VectorXcd value = VectorXcd::Zero(n);
  std::vector<int> tuple(static_cast<size_t>(s.level), 0);
  while (true) {
    Cpx weight(1, 0);
    for (int slot = 0; slot < s.level; ++slot) {
      weight *= cargs[static_cast<size_t>(slot)](tuple[static_cast<size_t>(slot)]);
    }
    if (weight != Cpx(0, 0)) {
      std::vector<int> key = tuple;
      std::sort(key.begin(), key.end());
      const auto it = std::lower_bound(s.multisets.begin(), s.multisets.end(), key);
      const int ms = static_cast<int>(it - s.multisets.begin());
      for (int t = 0; t < n; ++t) value(t) += weight * h(ms * n + t);
    }
    int pos = s.level - 1;
    while (pos >= 0 && tuple[static_cast<size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    tuple[static_cast<size_t>(pos)] += 1;
    for (int q = pos + 1; q < s.level; ++q) tuple[static_cast<size_t>(q)] = 0;
  }
  return realifyComplexVector(value);
}

SymbolTower symbolTower(const AntilinearMap2& nTensor, int kMax, double tol) {
  if (kMax < 1 || kMax > 6) {
    throw std::invalid_argument("symbolTower: kMax must be between 1 and 6");
  }
  if (nTensor.complexDim() > 5 && kMax > 4) {
    throw std::invalid_argument(
        "symbolTower: kMax > 4 is not supported above complex dimension 5");
  }
  SymbolTower tower;
  bool vanished = false;
  for (int k = 1; k <= kMax; ++k) {
    if (vanished) {
      tower.dims.push_back(0);
      continue;
    }
    SymbolSpace s = gammaK(nTensor, k, tol);
    tower.dims.push_back(s.realDim);
    if (s.realDim == 0) {
      vanished = true;
      tower.finiteType = true;
      tower.stabilizedAt = k;
    }
    tower.levels.push_back(std::move(s));
  }
  return tower;
}

CharVarietyReport charVariety(const AntilinearMap2& nTensor, int samples, unsigned seed,
                              double tol) {
  if (samples < 1) throw std::invalid_argument("charVariety: samples must be positive");
  const int n = nTensor.complexDim();
  const int d = 2 * n;
  CharVarietyReport report;

  const RealSubspace w = complexImage(nTensor);
  const int wDim = w.complexDim(nTensor.J0());
  if (wDim < 0) throw std::logic_error("charVariety: image is not J-invariant");

  if (wDim == n) {
    report.pComplex = kMinusInfinity;
    report.components = 0;
    report.kernelRankComplex = 0;
    report.zetaReal = 0;
    report.phrase = "0 complex functions of -inf arguments";
    report.notes.push_back("Im N spans T: the annihilator is trivial");
    return report;
  }
  report.pComplex = n - wDim;
  report.components = 2;

  // complex annihilator of W: rows rho with rho . v = 0 for complex points v
  MatrixXcd wCols(n, std::max(1, wDim));
  if (wDim == 0) {
    wCols.setZero();
  } else {
    // extract a complex basis of W from its real orthonormal basis
    MatrixXd basis = w.basis();
    int taken = 0;
    RealSubspace span = RealSubspace::zero(d);
    for (int c = 0; c < basis.cols() && taken < wDim; ++c) {
      const VectorXd cand = basis.col(c);
      if (span.contains(cand, 1e-8)) continue;
      wCols.col(taken++) = complexifyRealVector(cand);
      MatrixXd pair(d, 2);
      pair << cand, nTensor.J0() * cand;
      span = span.spanWith(RealSubspace::fromColumns(pair));
    }
    if (taken != wDim) throw std::logic_error("charVariety: failed to extract complex basis");
  }
  Eigen::FullPivLU<MatrixXcd> lu(wCols.transpose());
  lu.setThreshold(1e-9);
  const MatrixXcd annBasis = lu.kernel();  // columns: covectors (as vectors)
  const int p = wDim == 0 ? n : static_cast<int>(annBasis.cols());
  if (p != report.pComplex) {
    throw std::logic_error("charVariety: annihilator dimension mismatch");
  }

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::map<int, int> histogram;
  for (int trial = 0; trial < samples; ++trial) {
    VectorXcd rho(n);
    if (wDim == 0) {
      for (int k = 0; k < n; ++k) rho(k) = Cpx(gauss(rng), gauss(rng));
    } else {
      VectorXcd mix(annBasis.cols());
      for (int k = 0; k < mix.size(); ++k) mix(k) = Cpx(gauss(rng), gauss(rng));
      rho = annBasis * mix;
    }
    rho /= rho.norm();

    // real basis of Ann(rho) = complex hyperplane { v : sum rho_k v_k = 0 }
    Eigen::FullPivLU<MatrixXcd> hyper(rho.transpose());
    hyper.setThreshold(1e-9);
    const MatrixXcd hv = hyper.kernel();  // n x (n-1)
    MatrixXd rows(static_cast<Eigen::Index>(2 * hv.cols()) * d, d);
    for (int c = 0; c < hv.cols(); ++c) {
      const VectorXd u = realifyComplexVector(hv.col(c));
      rows.middleRows(static_cast<Eigen::Index>(2 * c) * d, d) = nTensor.partialMatrix(u);
      rows.middleRows(static_cast<Eigen::Index>(2 * c + 1) * d, d) =
          nTensor.partialMatrix(nTensor.J0() * u);
    }
    const RankKernel rk = rankAndKernel(rows, tol);
    const int kernelComplex = (d - rk.rank) / 2;
    histogram[kernelComplex] += 1;
  }

  int bestRank = 0;
  int bestCount = -1;
  for (const auto& [rank, count] : histogram) {
    if (count > bestCount) {
      bestRank = rank;
      bestCount = count;
    }
  }
  report.kernelRankComplex = bestRank;
  if (bestCount < (samples * 9 + 9) / 10) {
    report.lowConfidence = true;
    std::ostringstream msg;
    msg << "kernel rank agreed on only " << bestCount << " of " << samples << " samples";
    report.notes.push_back(msg.str());
  }
  report.zetaReal = report.components * report.kernelRankComplex;
  if (report.kernelRankComplex == 0) {
    report.notes.push_back(
        "generic annihilator covector has trivial kernel; any solutions live on "
        "proper strata");
  }
  std::ostringstream phrase;
  phrase << report.kernelRankComplex << " complex functions of " << report.pComplex
         << " arguments";
  report.phrase = phrase.str();
  return report;
}

SubmaximalBound submaximalBound(int n) {
  if (n < 2) throw std::invalid_argument("submaximalBound: n must be >= 2");
  SubmaximalBound b;
  b.pComplex = n - 1;
  b.zetaComplex = n <= 3 ? n - 1 : n - 2;
  return b;
}

}  // namespace acs
