#include "acs/obstruct.hpp"

#include <sstream>

#include "acs/nijenhuis.hpp"

namespace acs {

namespace {

long long mod(long long x, long long m) { return ((x % m) + m) % m; }

std::string num(long long x) { return std::to_string(x); }

/// "-chi/2" rendered exactly: integer when chi is even, halves otherwise.
std::string halfOf(long long minusChi) {
  if (minusChi % 2 == 0) return num(minusChi / 2);
  return num(minusChi) + "/2";
}

ObstructionCheck pass_fail(std::string name, std::string expr, bool ok) {
  return ObstructionCheck{std::move(name), std::move(expr),
                          ok ? CheckStatus::Pass : CheckStatus::Fail};
}

ObstructionCheck info(std::string name, std::string expr) {
  return ObstructionCheck{std::move(name), std::move(expr), CheckStatus::Info};
}

ObstructionCheck undetermined(std::string name, std::string expr) {
  return ObstructionCheck{std::move(name), std::move(expr),
                          CheckStatus::Undetermined};
}

Verdict settle(const std::vector<ObstructionCheck>& checks) {
  bool open = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return Verdict::EXCLUDED;
    if (c.status == CheckStatus::Undetermined) open = true;
  }
  return open ? Verdict::UNDETERMINED : Verdict::ADMITS;
}

/// Congruence line "label = 0 (mod m)" over an optional combination value.
ObstructionCheck congruence(const std::string& label,
                            std::optional<long long> value, long long m,
                            const std::string& missing) {
  const std::string name = label + " = 0 (mod " + num(m) + ")";
  if (!value)
    return undetermined(name, "not evaluated: missing " + missing);
  const long long r = mod(*value, m);
  std::ostringstream os;
  os << "value " << *value << ", remainder " << r << " (mod " << m << ")";
  return pass_fail(name, os.str(), r == 0);
}

template <class... Opt>
bool allGiven(const Opt&... o) {
  return (static_cast<bool>(o) && ...);
}

}  // namespace

std::string verdictName(Verdict v) {
  switch (v) {
    case Verdict::ADMITS: return "ADMITS";
    case Verdict::EXCLUDED: return "EXCLUDED";
    default: return "UNDETERMINED";
  }
}

std::string checkStatusName(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Undetermined: return "undetermined";
    default: return "info";
  }
}

bool ObstructionReport::hasFailure() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return true;
  return false;
}

nlohmann::json ObstructionReport::toJson() const {
  nlohmann::json j;
  j["context"] = context;
  j["verdict"] = verdictName(verdict);
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"expression", c.expression},
                           {"status", checkStatusName(c.status)}});
  return j;
}

std::string ObstructionReport::str() const {
  std::ostringstream os;
  os << context << "\n";
  for (const auto& c : checks)
    os << "  [" << checkStatusName(c.status) << "] " << c.name << ": "
       << c.expression << "\n";
  os << "verdict: " << verdictName(verdict);
  return os.str();
}

ObstructionReport dim4Check(long long chi, long long tau) {
  ObstructionReport rep;
  rep.context =
      "closed 4-manifold with chi = " + num(chi) + ", tau = " + num(tau);

  const long long lin = 5 * chi + 6 * tau;
  {
    std::ostringstream os;
    os << "5*(" << chi << ") + 6*(" << tau << ") = " << lin;
    rep.checks.push_back(pass_fail("5 chi + 6 tau = 0", os.str(), lin == 0));
  }
  {
    std::ostringstream os;
    os << chi << " = " << mod(chi, 24) << " (mod 24)";
    rep.checks.push_back(
        pass_fail("chi = 0 (mod 24)", os.str(), mod(chi, 24) == 0));
  }
  rep.checks.push_back(
      info("K.K = -chi/2", "K.K = " + halfOf(-chi) + " (from chi = -2 K.K)"));
  {
    std::ostringstream os;
    os << "c1^2 = 2*(" << chi << ") + 3*(" << tau << ") = " << 2 * chi + 3 * tau;
    rep.checks.push_back(info("Wu relation c1^2 = 2 chi + 3 tau", os.str()));
  }
  rep.verdict = settle(rep.checks);
  return rep;
}

ObstructionReport cp2SumCheck(long long r, long long s) {
  if (r < 0 || s < 0)
    throw PreconditionError(
        "cp2SumCheck: the summand counts r, s must be non-negative");
  ObstructionReport rep;
  rep.context = "connected sum of " + num(r) + " copies of CP^2 and " + num(s) +
                " copies of conj(CP^2) (b+ = " + num(r) + ", b- = " + num(s) +
                ")";
  rep.checks.push_back(pass_fail(
      "b+ odd", num(r) + " is " + (r % 2 == 1 ? "odd" : "even"), r % 2 == 1));
  {
    std::ostringstream os;
    os << "11*(" << r << ") + 10 = " << 11 * r + 10 << ", b- = " << s;
    rep.checks.push_back(
        pass_fail("b- = 11 b+ + 10", os.str(), s == 11 * r + 10));
  }
  rep.verdict = settle(rep.checks);
  return rep;
}

ObstructionReport typeIICheck(long long m, long long n) {
  ObstructionReport rep;
  rep.context = "type II manifold with intersection form " + num(m) +
                " H (+) " + num(n) + " E8";
  {
    std::ostringstream os;
    os << "4*(" << n << ") = " << 4 * n << ", 5*(" << m << " + 1) = "
       << 5 * (m + 1);
    rep.checks.push_back(
        pass_fail("4 n = 5 (m + 1)", os.str(), 4 * n == 5 * (m + 1)));
  }
  rep.checks.push_back(pass_fail("n > 0", "n = " + num(n), n > 0));
  {
    std::ostringstream os;
    os << m << " = " << mod(m, 4) << " (mod 4)";
    rep.checks.push_back(pass_fail("m = 3 (mod 4)", os.str(), mod(m, 4) == 3));
  }
  rep.verdict = settle(rep.checks);
  return rep;
}

ObstructionReport dim6Check(bool c1TorsionOrderDividesThree, bool c1SquaredZero,
                            long long c1c2) {
  ObstructionReport rep;
  rep.context = "dimension 6 class conditions for Lambda^2 T ~ T";
  rep.checks.push_back(pass_fail(
      "3 c1 = 0",
      std::string("asserted ") + (c1TorsionOrderDividesThree ? "true" : "false"),
      c1TorsionOrderDividesThree));
  rep.checks.push_back(pass_fail(
      "c1^2 = 0", std::string("asserted ") + (c1SquaredZero ? "true" : "false"),
      c1SquaredZero));
  rep.checks.push_back(
      pass_fail("c1 c2 = 0", "c1 c2 = " + num(c1c2), c1c2 == 0));
  rep.verdict = settle(rep.checks);
  return rep;
}

ObstructionReport cp3Check(long long r) {
  // Route through dim6Check so the pass/fail logic lives in one place, then
  // re-instantiate the expressions with the Chern data of the class.
  ObstructionReport rep =
      dim6Check(r == 0, r == 0, 4 * r * (r * r - 1));
  rep.context = "CP^3 with total Chern class 1 + 2r x + 2(r^2 - 1) x^2 + 4 x^3, r = " +
                num(r);
  rep.checks[0].expression = "3 c1 = 6*(" + num(r) + ") x = " + num(6 * r) + " x";
  rep.checks[1].expression =
      "c1^2 = 4*(" + num(r) + ")^2 x^2 = " + num(4 * r * r) + " x^2";
  rep.checks[2].expression = "c1 c2 = 4*(" + num(r) + ")*((" + num(r) +
                             ")^2 - 1) = " + num(4 * r * (r * r - 1));
  if (r == 0 && !rep.hasFailure()) {
    rep.checks.push_back(undetermined(
        "existence at r = 0",
        "no implemented obstruction fails; existence is an open question"));
    rep.verdict = settle(rep.checks);
  }
  return rep;
}

std::string dim8ModeName(Dim8Mode m) {
  switch (m) {
    case Dim8Mode::General: return "GENERAL";
    case Dim8Mode::Transversal: return "TRANSVERSAL";
    default: return "STRONG";
  }
}

ObstructionReport dim8Check(const Dim8Data& d, Dim8Mode mode) {
  ObstructionReport rep;
  rep.context = "dimension 8, mode " + dim8ModeName(mode);

  if (mode == Dim8Mode::Strong) {
    rep.checks.push_back(
        congruence("c4", d.c4, 720, "Chern number c4"));
    if (!d.torsionFree) {
      rep.checks.push_back(undetermined("all Chern numbers vanish",
                                        "torsion-freeness not asserted"));
    } else if (!*d.torsionFree) {
      rep.checks.push_back(info(
          "all Chern numbers vanish",
          "not applicable: the vanishing rule requires torsion-free cohomology"));
    } else if (!allGiven(d.c1p4, d.c1sqc2, d.c1c3, d.c2sq, d.c4)) {
      rep.checks.push_back(undetermined("all Chern numbers vanish",
                                        "not all Chern numbers supplied"));
    } else {
      std::ostringstream os;
      os << "c1^4 = " << *d.c1p4 << ", c1^2 c2 = " << *d.c1sqc2
         << ", c1 c3 = " << *d.c1c3 << ", c2^2 = " << *d.c2sq
         << ", c4 = " << *d.c4 << " (torsion-free)";
      const bool allZero = *d.c1p4 == 0 && *d.c1sqc2 == 0 && *d.c1c3 == 0 &&
                           *d.c2sq == 0 && *d.c4 == 0;
      rep.checks.push_back(
          pass_fail("all Chern numbers vanish", os.str(), allZero));
    }
    rep.verdict = settle(rep.checks);
    return rep;
  }

  // The three existence congruences (general and transversal modes).
  std::optional<long long> big, mid, low;
  if (allGiven(d.c1p4, d.c1sqc2, d.c1c3, d.c2sq, d.c4))
    big = -*d.c1p4 + 4 * *d.c1sqc2 + *d.c1c3 + 3 * *d.c2sq - *d.c4;
  if (allGiven(d.c1p4, d.c1sqc2)) mid = 2 * *d.c1p4 + *d.c1sqc2;
  if (allGiven(d.c1c3, d.c4)) low = *d.c1c3 - 2 * *d.c4;
  rep.checks.push_back(congruence("-c1^4 + 4 c1^2 c2 + c1 c3 + 3 c2^2 - c4",
                                  big, 720, "Chern numbers"));
  rep.checks.push_back(
      congruence("2 c1^4 + c1^2 c2", mid, 12, "c1^4 or c1^2 c2"));
  rep.checks.push_back(congruence("c1 c3 - 2 c4", low, 4, "c1 c3 or c4"));

  if (mode == Dim8Mode::Transversal) {
    const auto asserted = [](const std::optional<bool>& fact,
                             const char* name) {
      if (!fact)
        return undetermined(name, "class fact not asserted");
      return pass_fail(name, std::string("asserted ") + (*fact ? "true" : "false"),
                       *fact);
    };
    rep.checks.push_back(asserted(d.threeC1Zero, "3 c1 = 0"));
    if (d.c2Coeff && d.qCoeff) {
      std::ostringstream os;
      os << "3*(" << *d.c2Coeff << ") = " << 3 * *d.c2Coeff << ", -3*("
         << *d.qCoeff << ")^2 = " << -3 * *d.qCoeff * *d.qCoeff;
      rep.checks.push_back(pass_fail(
          "3 c2 = -3 q^2", os.str(),
          3 * *d.c2Coeff == -3 * *d.qCoeff * *d.qCoeff));
    } else {
      rep.checks.push_back(
          undetermined("3 c2 = -3 q^2", "q (or c2) not supplied"));
    }
    rep.checks.push_back(asserted(d.threeC3Zero, "3 c3 = 0"));
    if (d.c4) {
      std::ostringstream os;
      os << "chi = c4 = " << *d.c4;
      rep.checks.push_back(
          pass_fail("15 c4 = 0 => chi = 0", os.str(), *d.c4 == 0));
    } else {
      rep.checks.push_back(
          undetermined("15 c4 = 0 => chi = 0", "c4 not supplied"));
    }
  }

  rep.verdict = settle(rep.checks);
  return rep;
}

}  // namespace acs
