#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>

#include "acs/catalog.hpp"
#include "acs/nijenhuis.hpp"
#include "helpers/fd_oracle.hpp"

using namespace acs;

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

Point originOf(const ChartStructure& ch) {
  return Point::fromBase(ch.vars,
                         std::vector<Cpx>(static_cast<size_t>(ch.complexDim()), Cpx(0, 0)));
}

AntilinearMap2 tensorAtOrigin(const ChartStructure& ch) {
  return nijenhuisAt(ch.jetAt(originOf(ch)));
}

// unordered comparison of two complex pairs
bool samePair(std::array<Cpx, 2> got, std::array<Cpx, 2> want, double tol = 1e-7) {
  auto close = [tol](Cpx a, Cpx b) { return std::abs(a - b) < tol; };
  return (close(got[0], want[0]) && close(got[1], want[1])) ||
         (close(got[0], want[1]) && close(got[1], want[0]));
}

}  // namespace

TEST_CASE("jet formula agrees with the finite-difference bracket oracle") {
  std::mt19937 rng(42u);
  std::uniform_real_distribution<double> coord(-0.8, 0.8);
  for (const char* name : {"flat3", "submax", "torus", "onfor", "nofor"}) {
    CAPTURE(name);
    ChartStructure ch = catalogChart(name);
    const int d = 2 * ch.complexDim();
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x(d);
      for (int k = 0; k < d; ++k) x(k) = coord(rng);
      const Eigen::MatrixXd j = testing::realStructureMatrix(ch, x);
      std::vector<Cpx> base(static_cast<size_t>(ch.complexDim()));
      for (int k = 0; k < ch.complexDim(); ++k) base[static_cast<size_t>(k)] = Cpx(x(2 * k), x(2 * k + 1));
      AntilinearMap2 n = nijenhuisAt(ch.jetAt(Point::fromBase(ch.vars, base)));
      REQUIRE(((n.J0() - j).norm()) < 1e-12);
      for (int u = 0; u < d; ++u) {
        for (int v = u + 1; v < d; ++v) {
          Eigen::VectorXd fd = testing::fdNijenhuis(
              ch, x, Eigen::VectorXd::Unit(d, u), Eigen::VectorXd::Unit(d, v));
          Eigen::VectorXd impl =
              n.apply(Eigen::VectorXd::Unit(d, u), Eigen::VectorXd::Unit(d, v));
          CAPTURE(trial);
          CAPTURE(u);
          CAPTURE(v);
          CHECK((fd - impl).lpNorm<Eigen::Infinity>() < 1e-4);
        }
      }
    }
  }
}

TEST_CASE("submaximal chart: pinned pointwise values") {
  ChartStructure submax = catalogChart("submax");

  SUBCASE("at the origin") {
    AntilinearMap2 n = tensorAtOrigin(submax);
    REQUIRE(n.validate());
    // N(d/dx_z, d/dx_w) = 2 d/dy_w
    Eigen::Vector4d expected(0, 0, 0, 2);
    CHECK((n.apply(Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 0, 1, 0)) - expected)
              .norm() < 1e-10);
    // antilinearity: N(J0 u, v) = -J0 N(u, v)
    Eigen::Vector4d u(1, 0, 0, 0), v(0, 0, 1, 0);
    CHECK((n.apply(n.J0() * u, v) + n.J0() * n.apply(u, v)).norm() < 1e-10);
    CHECK(complexImage(n).dim() == 2);
    CHECK(classify(n).typeLabel == "DIM4_NONZERO");
  }

  SUBCASE("at w = 1/2") {
    Point p = Point::fromBase(submax.vars, {Cpx(0.3, -0.7), Cpx(0.5, 0.0)});
    AntilinearMap2 n = nijenhuisAt(submax.jetAt(p));
    // N(dz, dzbar) = w dw - wbar dwbar realifies to N(d/dx_z, d/dy_z) = (0,0,0,-1)
    Eigen::Vector4d expected(0, 0, 0, -1);
    CHECK((n.apply(Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0)) - expected)
              .norm() < 1e-10);
  }
}

TEST_CASE("point tensor JSON: round trip and validation") {
  CpxTensor ndg1 = catalogTensor("ndg1");
  CpxTensor back = pointTensorFromJson(pointTensorToJson(ndg1));
  REQUIRE(back.dim() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(back.coeff(i, j, k) - ndg1.coeff(i, j, k)) < 1e-15);
      }
    }
  }

  nlohmann::json good = {{"complex_dim", 2},
                         {"N", {{{"i", 1}, {"j", 2}, {"k", 1}, {"c", "exp(i*pi*0.25)"}}}}};
  CpxTensor t = pointTensorFromJson(good);
  CHECK(std::abs(t.coeff(0, 1, 0) - std::polar(1.0, kPi / 4)) < 1e-12);
  CHECK(std::abs(t.coeff(1, 0, 0) + std::polar(1.0, kPi / 4)) < 1e-12);

  CHECK_THROWS_AS((void)pointTensorFromJson(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS((void)pointTensorFromJson({{"complex_dim", 2}}), std::invalid_argument);
  // i >= j is rejected: the skew partner is implied
  CHECK_THROWS_AS((void)pointTensorFromJson(
                      {{"complex_dim", 2},
                       {"N", {{{"i", 2}, {"j", 1}, {"k", 1}, {"c", "1"}}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pointTensorFromJson(
                      {{"complex_dim", 2},
                       {"N", {{{"i", 1}, {"j", 3}, {"k", 1}, {"c", "1"}}}}}),
                  std::invalid_argument);
}

TEST_CASE("classification: pinned reports for the catalog tensors") {
  SUBCASE("non-degenerate with isolated fixed points") {
    struct Pin {
      const char* name;
      int transversal;
      int incident;
      int points;
    };
    const Pin pins[] = {
        {"ndg1", 1, 2, 3},
        {"ndg2", 1, 1, 2},
        {"ndg3", 3, 0, 3},
        {"ndg4", 0, 1, 1},
    };
    for (const auto& pin : pins) {
      CAPTURE(pin.name);
      ClassificationReport r = classify(catalogTensor(pin.name));
      CHECK(r.n == 3);
      CHECK(r.rImage == 3);
      CHECK_FALSE(r.lowConfidence);
      CHECK_FALSE(r.fixedPointData.continuum);
      CHECK(r.fixedPointData.transversalCount == pin.transversal);
      CHECK(r.fixedPointData.incidentCount == pin.incident);
      CHECK(static_cast<int>(r.fixedPointData.points.size()) == pin.points);
      for (const auto& fp : r.fixedPointData.points) CHECK(fp.residual < 1e-8);
    }
  }

  SUBCASE("exceptional symmetric tensors see a continuum of fixed points") {
    for (const char* name : {"neqs1", "neqs2", "neqs3"}) {
      CAPTURE(name);
      ClassificationReport r = classify(catalogTensor(name));
      CHECK(r.rImage == 3);
      CHECK(r.typeLabel == "NDG(3)-candidate");
      CHECK(r.fixedPointData.continuum);
      CHECK(r.fixedPointData.points.size() > 50);
      CHECK_FALSE(r.lowConfidence);
      bool noted = false;
      for (const auto& note : r.notes) {
        noted = noted || note.find("continuum") != std::string::npos;
      }
      CHECK(noted);
    }
  }

  SUBCASE("degenerate tensors") {
    ClassificationReport dg1 = classify(catalogTensor("dg1"));
    CHECK(dg1.rImage == 2);
    CHECK(dg1.typeLabel == "DG1");

    ClassificationReport dg21 = classify(catalogTensor("dg2_1"));
    CHECK(dg21.rImage == 1);
    CHECK_FALSE(dg21.imageInKernel);
    CHECK(dg21.typeLabel == "DG2(1)");

    ClassificationReport dg22 = classify(catalogTensor("dg2_2"));
    CHECK(dg22.rImage == 1);
    CHECK(dg22.imageInKernel);
    CHECK(dg22.typeLabel == "DG2(2)");

    ClassificationReport flat = classify(CpxTensor(3));
    CHECK(flat.rImage == 0);
    CHECK(flat.typeLabel == "INTEGRABLE");
  }

  SUBCASE("complex dimension 2") {
    CHECK(classify(CpxTensor(2)).typeLabel == "INTEGRABLE");
    CpxTensor t(2);
    t.set(0, 1, 0, Cpx(1, 0));
    CHECK(classify(t).typeLabel == "DIM4_NONZERO");
  }

  SUBCASE("complex dimension 4, rank-one image") {
    ClassificationReport split = classify(catalogTensor("gen4_split"));
    CHECK(split.n == 4);
    CHECK(split.rImage == 1);
    CHECK(split.m == 1);
    CHECK(split.branch == "W∩Z=0");
    CHECK(split.typeLabel == "GENERAL(m=1, W∩Z=0)");

    ClassificationReport nested = classify(catalogTensor("gen4_nested"));
    CHECK(nested.m == 1);
    CHECK(nested.branch == "W⊂Z");
    CHECK(nested.typeLabel == "GENERAL(m=1, W⊂Z)");
  }

  SUBCASE("both classify entry points agree") {
    for (const char* name : {"ndg1", "dg1", "dg2_2", "gen4_nested"}) {
      CAPTURE(name);
      CpxTensor t = catalogTensor(name);
      ClassificationReport viaTensor = classify(t);
      ClassificationReport viaMap = classify(AntilinearMap2::fromComplexConstants(t));
      CHECK(viaTensor.typeLabel == viaMap.typeLabel);
      CHECK(viaTensor.rImage == viaMap.rImage);
    }
  }
}

TEST_CASE("fixed points of the diagonal model are the coordinate axes") {
  PhiReport phi = phiMaps(catalogTensor("ndg1"));
  REQUIRE(phi.points.size() == 3);
  CHECK_FALSE(phi.continuum);
  CHECK_FALSE(phi.lowConfidence);
  bool axisSeen[3] = {false, false, false};
  for (const auto& fp : phi.points) {
    CHECK(fp.residual < 1e-8);
    Eigen::Vector3cd line = fp.line.normalized();
    int axis = 0;
    line.cwiseAbs().maxCoeff(&axis);
    // pure coordinate line: all other components vanish
    for (int k = 0; k < 3; ++k) {
      if (k != axis) CHECK(std::abs(line(k)) < 1e-6);
    }
    // the X1 axis is the transversal fixed point, X2 and X3 are incident
    CHECK(fp.incident == (axis != 0));
    axisSeen[axis] = true;
  }
  CHECK(axisSeen[0]);
  CHECK(axisSeen[1]);
  CHECK(axisSeen[2]);
}

TEST_CASE("phiMaps preconditions") {
  CHECK_THROWS_AS((void)phiMaps(catalogTensor("dg1")), PreconditionError);
  CHECK_THROWS_AS((void)phiMaps(CpxTensor(3)), PreconditionError);
  CHECK_THROWS_AS((void)phiMaps(catalogTensor("gen4_split")), PreconditionError);
}

TEST_CASE("classification labels are invariant under complex basis changes") {
  std::mt19937 rng(20240902u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto randomGl = [&](int n) {
    while (true) {
      Eigen::MatrixXcd g(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = Cpx(gauss(rng), gauss(rng));
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
      const double cond =
          svd.singularValues()(0) / svd.singularValues()(n - 1);
      if (cond < 50.0) return g;
    }
  };

  for (const char* name : {"ndg1", "ndg2", "ndg3", "ndg4", "neqs1", "neqs3", "dg1",
                           "dg2_1", "dg2_2", "gen4_split", "gen4_nested"}) {
    CAPTURE(name);
    CpxTensor t = catalogTensor(name);
    const std::string label = classify(t).typeLabel;
    AntilinearMap2 n = AntilinearMap2::fromComplexConstants(t);
    for (int trial = 0; trial < 10; ++trial) {
      AntilinearMap2 moved = conjugateTensor(n, randomGl(t.dim()));
      REQUIRE(moved.validate());
      CHECK(classify(moved).typeLabel == label);
    }
  }
}

TEST_CASE("realization of a rank-2 distribution in complex dimension 2") {
  VarTable vt({"z", "w"});
  const CoeffExpr A = parseExpr("2*w_ + w_*w_", vt);
  const CoeffExpr B = parseExpr("w", vt);
  Point p = Point::fromBase(vt, {Cpx(0, 0), Cpx(0, 0)});

  SUBCASE("pinned example at the origin") {
    Realization r = realizeDim4(A, B, vt, p);
    CHECK(std::abs(r.alpha - Cpx(0, -4.0 / 3.0)) < 1e-9);
    CHECK(std::abs(r.beta) < 1e-12);
    CHECK(std::abs(r.generator(0) - Cpx(-16.0 / 9.0, 0)) < 1e-9);
    CHECK(std::abs(r.generator(1) - Cpx(32.0 / 9.0, 0)) < 1e-9);
    CHECK(std::abs(r.generator(2)) < 1e-12);
    CHECK(std::abs(r.generator(3)) < 1e-12);
    CHECK(r.imageAngle < 1e-6);
    CHECK(r.generatorAngle < 1e-6);
    // the realified jet is an almost complex structure
    CHECK((r.jet.J * r.jet.J + Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-9);
  }

  SUBCASE("sampling the realized structure off the base point") {
    Point q = Point::fromBase(vt, {Cpx(0.1, -0.05), Cpx(0.2, 0.1)});
    PointJet jet = lemma1JetAt(A, B, vt, q);
    CHECK((jet.J * jet.J + Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-9);
    AntilinearMap2 n = nijenhuisAt(jet);
    CHECK_FALSE(n.isZero());
    // Im(N) still spans the prescribed plane at q: the real span of the
    // complexified vector xi = dz - A dw - B dwbar (components on
    // (dz, dzbar, dw, dwbar)), i.e. of Re(xi) and Im(xi).
    const Cpx a = eval(A, q), b = eval(B, q);
    auto realPart = [&](Cpx scale) {
      // realification of scale * xi + conj(scale * xi)
      const Cpx cz = scale;                                  // dz coefficient
      const Cpx cw = -scale * a + std::conj(-scale * b);     // dw coefficient
      Eigen::Vector4d out;
      out << cz.real(), cz.imag(), cw.real(), cw.imag();
      return out;
    };
    Eigen::MatrixXd plane(4, 2);
    plane.col(0) = realPart(Cpx(1, 0));
    plane.col(1) = realPart(Cpx(0, 1));
    RealSubspace prescribed = RealSubspace::fromColumns(plane);
    auto angles = principalAngles(complexImage(n), prescribed);
    REQUIRE_FALSE(angles.empty());
    CHECK(angles.back() < 1e-6);
  }

  SUBCASE("preconditions") {
    // B_w must not vanish
    CHECK_THROWS_AS((void)realizeDim4(A, parseExpr("1", vt), vt, p), PreconditionError);
    // |A_wbar| > |B_w| must hold
    CHECK_THROWS_AS((void)realizeDim4(parseExpr("w_", vt), B, vt, p), PreconditionError);
    // the characteristic direction must not degenerate
    CHECK_THROWS_AS((void)realizeDim4(parseExpr("2*w_", vt), B, vt, p), PreconditionError);
  }
}

TEST_CASE("characteristic generator of the foliated normal form") {
  SUBCASE("submaximal chart at the origin") {
    ChartStructure submax = catalogChart("submax");
    Eigen::Vector4cd v = lemma2Generator(submax, originOf(submax));
    CHECK(std::abs(v(0)) < 1e-12);
    CHECK(std::abs(v(1)) < 1e-12);
    CHECK(std::abs(v(2)) < 1e-12);
    CHECK(std::abs(v(3) - Cpx(0, -2)) < 1e-12);
  }

  SUBCASE("torus chart: beta_w = pi i beta") {
    ChartStructure torus = catalogChart("torus");
    const Cpx w(0.25, 0.6);
    Point p = Point::fromBase(torus.vars, {Cpx(0.3, -0.1), w});
    Eigen::Vector4cd v = lemma2Generator(torus, p);
    // generator = -2i beta_w dwbar with beta = exp(2 pi i Re w)
    const Cpx beta = std::exp(Cpx(0, 2 * kPi * w.real()));
    CHECK(std::abs(v(0)) < 1e-12);
    CHECK(std::abs(v(1)) < 1e-12);
    CHECK(std::abs(v(2)) < 1e-12);
    CHECK(std::abs(v(3) - 2.0 * kPi * beta) < 1e-9);
  }

  SUBCASE("generator spans the image of N") {
    ChartStructure submax = catalogChart("submax");
    Point p = Point::fromBase(submax.vars, {Cpx(-0.2, 0.4), Cpx(0.4, 0.2)});
    Eigen::Vector4cd v = lemma2Generator(submax, p);
    AntilinearMap2 n = nijenhuisAt(submax.jetAt(p));
    RealSubspace image = complexImage(n);
    REQUIRE(image.dim() == 2);
    // realify v + conj(v): the dz coefficient becomes v0 + conj(v1)
    const Cpx cz = v(0) + std::conj(v(1));
    const Cpx cw = v(2) + std::conj(v(3));
    Eigen::Vector4d re;
    re << cz.real(), cz.imag(), cw.real(), cw.imag();
    CHECK(image.contains(re, 1e-7));
  }

  SUBCASE("rejects charts away from the normal form") {
    CHECK_THROWS_AS((void)lemma2Generator(catalogChart("onfor"),
                                          originOf(catalogChart("onfor"))),
                    std::invalid_argument);
    ChartStructure bad = ChartStructure::fromJson(
        {{"name", "bad"},
         {"complex_dim", 2},
         {"coords", {"z", "w"}},
         {"J", {{"z", {{"dz", "i"}}}, {"w", {{"dw", "i"}, {"dz", "w"}}}}}});
    CHECK_THROWS_AS((void)lemma2Generator(bad, originOf(bad)), PreconditionError);
  }
}

TEST_CASE("transversal analysis in complex dimension 4") {
  const std::array<std::array<Cpx, 2>, 2> l1{
      std::array<Cpx, 2>{Cpx(1, 0), Cpx(2, 0)},
      std::array<Cpx, 2>{Cpx(-1, 0), Cpx(0, 1)}};
  const std::array<std::array<Cpx, 2>, 2> l2{
      std::array<Cpx, 2>{Cpx(0, 2), Cpx(1, 1)},
      std::array<Cpx, 2>{Cpx(-2, 0), Cpx(3, 0)}};

  Eigen::MatrixXd p1Cols = Eigen::MatrixXd::Zero(8, 4);
  Eigen::MatrixXd p2Cols = Eigen::MatrixXd::Zero(8, 4);
  for (int k = 0; k < 4; ++k) {
    p1Cols(k, k) = 1.0;
    p2Cols(4 + k, k) = 1.0;
  }
  const RealSubspace p1 = RealSubspace::fromColumns(p1Cols);
  const RealSubspace p2 = RealSubspace::fromColumns(p2Cols);

  SUBCASE("generic moduli give a strong structure and recover the moduli") {
    CpxTensor t = buildStrongNdg8(l1, l2);
    REQUIRE(t.isSkew());
    AntilinearMap2 n = AntilinearMap2::fromComplexConstants(t);
    TransversalReport r = transversalCheck(n, p1, p2);
    CHECK(r.residualP1 < 1e-12);
    CHECK(r.residualP2 < 1e-12);
    CHECK(r.crossRank == 8);
    CHECK(r.antiIso);
    CHECK(r.linesFound);
    CHECK(r.strong);

    auto slope1 = [](const Eigen::Vector4cd& v) { return v(1) / v(0); };
    auto slope2 = [](const Eigen::Vector4cd& v) { return v(3) / v(2); };
    // target s = 0: the values landing in P1 come from the first moduli column
    CHECK(samePair({slope1(r.vLines[0][0][0]), slope1(r.vLines[0][1][0])},
                   {l1[0][0], l1[1][0]}));
    CHECK(samePair({slope2(r.vLines[1][0][0]), slope2(r.vLines[1][1][0])},
                   {l2[0][0], l2[1][0]}));
    // target s = 1: the second column
    CHECK(samePair({slope1(r.vLines[0][0][1]), slope1(r.vLines[0][1][1])},
                   {l1[0][1], l1[1][1]}));
    CHECK(samePair({slope2(r.vLines[1][0][1]), slope2(r.vLines[1][1][1])},
                   {l2[0][1], l2[1][1]}));

    // the distinguished lines in each plane are the two coordinate axes
    for (int plane = 0; plane < 2; ++plane) {
      for (int j = 0; j < 2; ++j) {
        Eigen::Vector4cd line = r.linesIn[plane][j];
        int axis = 0;
        line.cwiseAbs().maxCoeff(&axis);
        CHECK(axis / 2 == plane);
        for (int k = 0; k < 4; ++k) {
          if (k != axis) CHECK(std::abs(line(k)) < 1e-7);
        }
      }
    }
  }

  SUBCASE("the zero tensor is not an anti-isomorphism") {
    TransversalReport r = transversalCheck(
        AntilinearMap2::fromComplexConstants(CpxTensor(4)), p1, p2);
    CHECK(r.crossRank == 0);
    CHECK_FALSE(r.antiIso);
    CHECK_FALSE(r.strong);
    REQUIRE_FALSE(r.notes.empty());
  }

  SUBCASE("preconditions") {
    CpxTensor t = buildStrongNdg8(l1, l2);
    AntilinearMap2 n = AntilinearMap2::fromComplexConstants(t);
    // not J-invariant: mixes real/imaginary directions of different lines
    Eigen::MatrixXd badCols = Eigen::MatrixXd::Zero(8, 4);
    badCols(0, 0) = 1;
    badCols(2, 1) = 1;
    badCols(4, 2) = 1;
    badCols(6, 3) = 1;
    CHECK_THROWS_AS(
        (void)transversalCheck(n, RealSubspace::fromColumns(badCols), p2),
        PreconditionError);
    // not transversal
    CHECK_THROWS_AS((void)transversalCheck(n, p1, p1), PreconditionError);
    // wrong ambient dimension
    CHECK_THROWS_AS(
        (void)transversalCheck(AntilinearMap2::fromComplexConstants(CpxTensor(3)), p1, p2),
        PreconditionError);
  }

  SUBCASE("constant moduli give a singular interpolation system") {
    const std::array<std::array<Cpx, 2>, 2> same{
        std::array<Cpx, 2>{Cpx(1, 0), Cpx(1, 0)},
        std::array<Cpx, 2>{Cpx(1, 0), Cpx(1, 0)}};
    CHECK_THROWS_AS((void)buildStrongNdg8(same, same), PreconditionError);
  }
}

TEST_CASE("Plucker counts for the zero locus in the Grassmannian") {
  PluckerCounts c4 = pluckerCounts(4);
  CHECK(c4.d == 2);
  CHECK(c4.codim == 1);
  CHECK(c4.dimSigma == 0);
  CHECK(c4.degSigma == 2);

  PluckerCounts c5 = pluckerCounts(5);
  CHECK(c5.d == 5);
  CHECK(c5.codim == 3);
  CHECK(c5.dimSigma == 1);
  CHECK(c5.degSigma == 5);

  PluckerCounts c6 = pluckerCounts(6);
  CHECK(c6.d == 9);
  CHECK(c6.codim == 6);
  CHECK(c6.dimSigma == 2);
  CHECK(c6.degSigma == 14);

  CHECK_THROWS_AS((void)pluckerCounts(3), std::invalid_argument);
}
