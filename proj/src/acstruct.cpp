#include "acs/acstruct.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace acs {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

namespace {

bool exprApproxZero(const CoeffExpr& e, double tol) {
  for (const auto& t : e.terms()) {
    if (std::abs(t.coeff) > tol) return false;
  }
  return true;
}

// Wirtinger derivative along a real coordinate direction:
// d/dx_k = d/dz_k + d/dz_bar_k, d/dy_k = i (d/dz_k - d/dz_bar_k).
CoeffExpr realDirDiff(const CoeffExpr& e, int realDir) {
  const int coord = realDir / 2;
  const CoeffExpr dz = diff(e, 2 * coord);
  const CoeffExpr dzb = diff(e, 2 * coord + 1);
  if (realDir % 2 == 0) return dz + dzb;
  return Cpx(0, 1) * (dz - dzb);
}

}  // namespace

ChartStructure::ChartStructure(std::string chartName, VarTable table)
    : name(std::move(chartName)), vars(std::move(table)) {
  const int n = vars.coordCount();
  if (n <= 0) throw std::invalid_argument("ChartStructure: needs at least one coordinate");
  m_a.assign(static_cast<size_t>(n) * n, CoeffExpr());
  m_b.assign(static_cast<size_t>(n) * n, CoeffExpr());
}

const CoeffExpr& ChartStructure::a(int i, int j) const {
  return m_a[static_cast<size_t>(i) * complexDim() + j];
}
const CoeffExpr& ChartStructure::b(int i, int j) const {
  return m_b[static_cast<size_t>(i) * complexDim() + j];
}
void ChartStructure::setA(int i, int j, CoeffExpr e) {
  m_a[static_cast<size_t>(i) * complexDim() + j] = std::move(e);
}
void ChartStructure::setB(int i, int j, CoeffExpr e) {
  m_b[static_cast<size_t>(i) * complexDim() + j] = std::move(e);
}

ChartStructure ChartStructure::fromJson(const nlohmann::json& spec) {
  if (!spec.is_object()) throw std::invalid_argument("chart: expected a JSON object");
  for (const char* key : {"name", "complex_dim", "coords", "J"}) {
    if (!spec.contains(key)) {
      throw std::invalid_argument(std::string("chart: missing field '") + key + "'");
    }
  }
  const int n = spec.at("complex_dim").get<int>();
  std::vector<std::string> coords = spec.at("coords").get<std::vector<std::string>>();
  if (static_cast<int>(coords.size()) != n) {
    throw std::invalid_argument("chart: coords length does not match complex_dim");
  }
  ChartStructure ch(spec.at("name").get<std::string>(), VarTable(coords));

  const auto& table = spec.at("J");
  if (!table.is_object() || table.empty()) {
    throw std::invalid_argument("chart: J table must be a non-empty object");
  }
  for (auto it = table.begin(); it != table.end(); ++it) {
    auto rowId = ch.vars.tryIdOf(it.key());
    if (!rowId || VarTable::isConjVar(*rowId)) {
      throw std::invalid_argument("chart: J row '" + it.key() + "' is not a base coordinate");
    }
    const int i = VarTable::coordOf(*rowId);
    if (!it.value().is_object()) throw std::invalid_argument("chart: J row must be an object");
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
      const std::string& key = jt.key();
      if (key.size() < 2 || key[0] != 'd') {
        throw std::invalid_argument("chart: J entry key '" + key + "' must look like d<coord>");
      }
      auto colId = ch.vars.tryIdOf(key.substr(1));
      if (!colId) {
        throw std::invalid_argument("chart: J entry key '" + key + "' names no coordinate");
      }
      CoeffExpr e = parseExpr(jt.value().get<std::string>(), ch.vars);
      const int j = VarTable::coordOf(*colId);
      if (VarTable::isConjVar(*colId)) {
        ch.setB(i, j, ch.b(i, j) + e);
      } else {
        ch.setA(i, j, ch.a(i, j) + e);
      }
    }
  }
  // every row must be present: an all-zero row can never satisfy J^2 = -1
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j) {
      any = any || !ch.a(i, j).isZero() || !ch.b(i, j).isZero();
    }
    if (!any) {
      throw std::invalid_argument("chart: J has no entries for coordinate '" + coords[i] + "'");
    }
  }
  return ch;
}

nlohmann::json ChartStructure::toJson() const {
  nlohmann::json table = nlohmann::json::object();
  const int n = complexDim();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::object();
    for (int j = 0; j < n; ++j) {
      if (!a(i, j).isZero()) row["d" + vars.coordNames()[j]] = toString(a(i, j), vars);
      if (!b(i, j).isZero()) row["d" + vars.coordNames()[j] + "_"] = toString(b(i, j), vars);
    }
    table[vars.coordNames()[i]] = std::move(row);
  }
  return {{"name", name},
          {"complex_dim", n},
          {"coords", vars.coordNames()},
          {"J", std::move(table)}};
}

ValidationReport ChartStructure::validate(double tol, int samples, unsigned seed) const {
  const int n = complexDim();
  // J^2 dz_i = sum_k (sum_j a_ij a_jk + b_ij conj(b_jk)) dz_k
  //          + sum_k (sum_j a_ij b_jk + b_ij conj(a_jk)) dz_bar_k
  bool symbolicOk = true;
  for (int i = 0; i < n && symbolicOk; ++i) {
    for (int k = 0; k < n && symbolicOk; ++k) {
      CoeffExpr lin, anti;
      for (int j = 0; j < n; ++j) {
        lin = lin + a(i, j) * a(j, k) + b(i, j) * conjugate(b(j, k));
        anti = anti + a(i, j) * b(j, k) + b(i, j) * conjugate(a(j, k));
      }
      if (i == k) lin = lin + CoeffExpr::constant(Cpx(1, 0));
      symbolicOk = exprApproxZero(lin, 1e-12) && exprApproxZero(anti, 1e-12);
    }
  }
  if (symbolicOk) return {true, true, "J^2 = -1 verified symbolically"};

  // sampling fallback: the symbolic residual may fail to cancel exactly for
  // coefficients that are equal only numerically
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int d = 2 * n;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<Cpx> base(n);
    for (auto& c : base) c = Cpx(dist(rng), dist(rng));
    const PointJet jet = jetAt(Point::fromBase(vars, base));
    worst = std::max(worst, (jet.J * jet.J + MatrixXd::Identity(d, d)).norm());
  }
  if (worst <= tol * std::sqrt(static_cast<double>(d))) {
    return {true, false, "J^2 = -1 verified by sampling"};
  }
  std::ostringstream msg;
  msg << "J^2 + 1 has residual " << worst << " on sampled points";
  return {false, false, msg.str()};
}

void ChartStructure::evalAB(const Point& p, MatrixXcd& A, MatrixXcd& B) const {
  const int n = complexDim();
  A.resize(n, n);
  B.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      A(i, j) = eval(a(i, j), p);
      B(i, j) = eval(b(i, j), p);
    }
  }
}

PointJet ChartStructure::jetAt(const Point& p) const {
  const int n = complexDim();
  PointJet jet;
  // In complexified coordinates xi (the dz-components of a real vector),
  // J xi = A^T xi + conj(B)^T conj(xi).
  MatrixXcd A, B;
  evalAB(p, A, B);
  jet.J = realifyComplexMatrix(A.transpose()) + realifyAntilinearMatrix(B.conjugate().transpose());
  jet.dJ.reserve(static_cast<size_t>(2 * n));
  for (int dir = 0; dir < 2 * n; ++dir) {
    MatrixXcd dA(n, n), dB(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        dA(i, j) = eval(realDirDiff(a(i, j), dir), p);
        dB(i, j) = eval(realDirDiff(b(i, j), dir), p);
      }
    }
    jet.dJ.push_back(realifyComplexMatrix(dA.transpose()) +
                     realifyAntilinearMatrix(dB.conjugate().transpose()));
  }
  return jet;
}

VectorField VectorField::zero(int complexDim) {
  VectorField f;
  f.comp.assign(static_cast<size_t>(2 * complexDim), CoeffExpr());
  return f;
}

VectorField VectorField::basisVector(int varId, int complexDim) {
  VectorField f = zero(complexDim);
  f.comp.at(static_cast<size_t>(varId)) = CoeffExpr::constant(Cpx(1, 0));
  return f;
}

VectorField VectorField::realFrom(const VectorField& x) { return x + conjugateField(x); }

bool VectorField::isZero() const {
  for (const auto& c : comp) {
    if (!c.isZero()) return false;
  }
  return true;
}

bool VectorField::isRealField(double tol) const {
  for (size_t id = 0; id < comp.size(); id += 2) {
    if (!exprApproxZero(comp[id ^ 1] - conjugate(comp[id]), tol)) return false;
  }
  return true;
}

VectorXcd VectorField::evalAt(const Point& p) const {
  VectorXcd v(comp.size());
  for (size_t id = 0; id < comp.size(); ++id) v(static_cast<Eigen::Index>(id)) = eval(comp[id], p);
  return v;
}

VectorField operator+(const VectorField& x, const VectorField& y) {
  VectorField out = x;
  for (size_t id = 0; id < out.comp.size(); ++id) out.comp[id] = out.comp[id] + y.comp.at(id);
  return out;
}

VectorField operator-(const VectorField& x, const VectorField& y) {
  VectorField out = x;
  for (size_t id = 0; id < out.comp.size(); ++id) out.comp[id] = out.comp[id] - y.comp.at(id);
  return out;
}

VectorField scale(const CoeffExpr& c, const VectorField& x) {
  VectorField out = x;
  for (auto& e : out.comp) e = c * e;
  return out;
}

VectorField conjugateField(const VectorField& x) {
  VectorField out = x;
  for (size_t id = 0; id < out.comp.size(); id += 2) {
    out.comp[id] = conjugate(x.comp[id ^ 1]);
    out.comp[id ^ 1] = conjugate(x.comp[id]);
  }
  return out;
}

VectorField lieBracket(const VectorField& x, const VectorField& y) {
  const int n = x.complexDim();
  if (y.complexDim() != n) throw std::invalid_argument("lieBracket: dimension mismatch");
  VectorField out = VectorField::zero(n);
  for (int k = 0; k < 2 * n; ++k) {
    CoeffExpr acc;
    for (int d = 0; d < 2 * n; ++d) {
      acc = acc + x.comp[d] * diff(y.comp[k], d) - y.comp[d] * diff(x.comp[k], d);
    }
    out.comp[k] = acc;
  }
  return out;
}

VectorField applyJ(const ChartStructure& ch, const VectorField& x) {
  const int n = ch.complexDim();
  if (x.complexDim() != n) throw std::invalid_argument("applyJ: dimension mismatch");
  VectorField out = VectorField::zero(n);
  // J dz_i = sum_k a(i,k) dz_k + b(i,k) dz_bar_k and the conjugate row for
  // dz_bar_i; coefficients multiply symbolically.
  for (int k = 0; k < n; ++k) {
    CoeffExpr hol, anti;
    for (int i = 0; i < n; ++i) {
      hol = hol + x.comp[2 * i] * ch.a(i, k) + x.comp[2 * i + 1] * conjugate(ch.b(i, k));
      anti = anti + x.comp[2 * i] * ch.b(i, k) + x.comp[2 * i + 1] * conjugate(ch.a(i, k));
    }
    out.comp[2 * k] = hol;
    out.comp[2 * k + 1] = anti;
  }
  return out;
}

VectorField nijenhuisSymbolic(const ChartStructure& ch, const VectorField& x,
                              const VectorField& y) {
  const VectorField jx = applyJ(ch, x);
  const VectorField jy = applyJ(ch, y);
  return lieBracket(jx, jy) - applyJ(ch, lieBracket(x, jy)) - applyJ(ch, lieBracket(jx, y)) -
         lieBracket(x, y);
}

}  // namespace acs
