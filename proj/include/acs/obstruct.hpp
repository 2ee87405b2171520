#pragma once

// Integer arithmetic of the topological obstructions to non-degenerate
// almost complex structures: closed 4-manifolds (Euler characteristic and
// signature), dimension 6 (Chern class conditions from the antilinear
// isomorphism Lambda^2 T -> T), and dimension 8 (existence congruences and
// the transversal / strong non-degeneracy constraints).
//
// Every checker is a pure function of caller-supplied integers and booleans.
// Cohomology-class statements (torsion facts such as 3 c1 = 0) are accepted
// as asserted inputs; the checkers never model cohomology rings.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace acs {

enum class Verdict { ADMITS, EXCLUDED, UNDETERMINED };
std::string verdictName(Verdict v);

enum class CheckStatus { Pass, Fail, Undetermined, Info };
std::string checkStatusName(CheckStatus s);

struct ObstructionCheck {
  std::string name;        // the condition being evaluated
  std::string expression;  // the condition instantiated with the inputs
  CheckStatus status = CheckStatus::Info;
};

// EXCLUDED iff at least one necessary condition fails. ADMITS only means
// "no implemented obstruction fails"; when a line cannot be evaluated from
// the supplied data (or existence is genuinely open) the verdict degrades
// to UNDETERMINED instead. Info lines are derived context and never affect
// the verdict.
struct ObstructionReport {
  std::string context;
  std::vector<ObstructionCheck> checks;
  Verdict verdict = Verdict::ADMITS;

  bool hasFailure() const;
  nlohmann::json toJson() const;
  std::string str() const;  // plain-text rendering, one line per check
};

// Closed oriented 4-manifold with Euler characteristic chi and signature
// tau. Conditions: 5 chi + 6 tau = 0 and chi = 0 (mod 24). Derived context:
// K.K = -chi/2 (from chi = -2 K.K) and Wu's relation c1^2 = 2 chi + 3 tau.
ObstructionReport dim4Check(long long chi, long long tau);

// Connected sum of r copies of CP^2 and s copies of conj(CP^2), so
// b+ = r, b- = s. Pass iff r is odd and s = 11 r + 10.
// Precondition: r >= 0 and s >= 0 (throws PreconditionError).
ObstructionReport cp2SumCheck(long long r, long long s);

// Simply connected type II manifold with intersection form m H (+) n E8.
// Pass iff 4 n = 5 (m + 1), n > 0 and m = 3 (mod 4).
ObstructionReport typeIICheck(long long m, long long n);

// Dimension 6: the class conditions 3 c1 = 0, c1^2 = 0 and c1 c2 = 0.
// The first two are caller-asserted class facts; c1 c2 is the integer
// Chern number, required to vanish.
ObstructionReport dim6Check(bool c1TorsionOrderDividesThree, bool c1SquaredZero,
                            long long c1c2);

// The manifold underlying CP^3: almost complex structures correspond to the
// total Chern classes 1 + 2r x + 2(r^2 - 1) x^2 + 4 x^3. Instantiates
// dim6Check with c1 = 2r x, c1^2 = 4r^2 x^2, c1 c2 = 4r(r^2 - 1). Every
// r != 0 is EXCLUDED; at r = 0 no implemented obstruction fails but
// existence is open, so the verdict is UNDETERMINED.
ObstructionReport cp3Check(long long r);

enum class Dim8Mode { General, Transversal, Strong };
std::string dim8ModeName(Dim8Mode m);

// Inputs for the dimension 8 checkers. Chern numbers are the degree-8
// pairings against the fundamental class; torsion facts are caller-asserted.
// c2Coeff / qCoeff express c2 and the auxiliary class q against a chosen
// generator of H^4 when the caller's manifold supports that reduction.
// Missing data turns the corresponding line UNDETERMINED, never pass/fail.
struct Dim8Data {
  std::optional<long long> c1p4;    // c1^4
  std::optional<long long> c1sqc2;  // c1^2 c2
  std::optional<long long> c1c3;    // c1 c3
  std::optional<long long> c2sq;    // c2^2
  std::optional<long long> c4;      // c4 (the Euler characteristic)
  std::optional<bool> torsionFree;  // H^*(M; Z) has no torsion
  std::optional<bool> threeC1Zero;  // 3 c1 = 0 in H^2
  std::optional<bool> threeC3Zero;  // 3 c3 = 0 in H^6
  std::optional<long long> c2Coeff;
  std::optional<long long> qCoeff;
};

// General mode: the three existence congruences
//   -c1^4 + 4 c1^2 c2 + c1 c3 + 3 c2^2 - c4 = 0 (mod 720),
//   2 c1^4 + c1^2 c2 = 0 (mod 12),
//   c1 c3 - 2 c4 = 0 (mod 4).
// Transversal mode adds the class relations 3 c1 = 0, 3 c2 = -3 q^2,
// 3 c3 = 0 and the consequence 15 c4 = 0 => chi = 0.
// Strong mode checks c4 = 0 (mod 720) and, over torsion-free cohomology,
// the vanishing of all Chern numbers; both lines are always reported.
ObstructionReport dim8Check(const Dim8Data& data, Dim8Mode mode);

}  // namespace acs
