#include "acs/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace acs {

namespace {

constexpr size_t kMaxTerms = 20000;
constexpr unsigned kMaxExponent = 64;

int cmpDouble(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmpCpx(Cpx a, Cpx b) {
  if (int c = cmpDouble(a.real(), b.real())) return c;
  return cmpDouble(a.imag(), b.imag());
}

int cmpKey(const Term& a, const Term& b) {
  if (a.monomial != b.monomial)
    return a.monomial < b.monomial ? -1 : 1;
  size_t n = std::min(a.expFactor.size(), b.expFactor.size());
  for (size_t k = 0; k < n; ++k) {
    if (a.expFactor[k].first != b.expFactor[k].first)
      return a.expFactor[k].first < b.expFactor[k].first ? -1 : 1;
    if (int c = cmpCpx(a.expFactor[k].second, b.expFactor[k].second)) return c;
  }
  if (a.expFactor.size() != b.expFactor.size())
    return a.expFactor.size() < b.expFactor.size() ? -1 : 1;
  return 0;
}

std::vector<Term> canonicalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return cmpKey(a, b) < 0; });
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && cmpKey(out.back(), t) == 0) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == 0.0) out.pop_back();
    } else if (t.coeff != 0.0) {
      out.push_back(std::move(t));
    }
  }
  if (out.size() > kMaxTerms)
    throw std::length_error("CoeffExpr: term count guard exceeded (" +
                            std::to_string(out.size()) + " > " + std::to_string(kMaxTerms) + ")");
  return out;
}

Term mulTerms(const Term& a, const Term& b) {
  Term r;
  r.coeff = a.coeff * b.coeff;
  {
    auto ia = a.monomial.begin(), ib = b.monomial.begin();
    while (ia != a.monomial.end() || ib != b.monomial.end()) {
      if (ib == b.monomial.end() || (ia != a.monomial.end() && ia->first < ib->first))
        r.monomial.push_back(*ia++);
      else if (ia == a.monomial.end() || ib->first < ia->first)
        r.monomial.push_back(*ib++);
      else {
        r.monomial.emplace_back(ia->first, ia->second + ib->second);
        ++ia;
        ++ib;
      }
    }
  }
  {
    auto ia = a.expFactor.begin(), ib = b.expFactor.begin();
    while (ia != a.expFactor.end() || ib != b.expFactor.end()) {
      if (ib == b.expFactor.end() || (ia != a.expFactor.end() && ia->first < ib->first))
        r.expFactor.push_back(*ia++);
      else if (ia == a.expFactor.end() || ib->first < ia->first)
        r.expFactor.push_back(*ib++);
      else {
        Cpx lam = ia->second + ib->second;
        if (lam != 0.0) r.expFactor.emplace_back(ia->first, lam);
        ++ia;
        ++ib;
      }
    }
  }
  return r;
}

}  // namespace

VarTable::VarTable(std::vector<std::string> coordNames) : m_names(std::move(coordNames)) {
  for (const auto& n : m_names) {
    if (n.empty() || !std::isalpha(static_cast<unsigned char>(n[0])))
      throw std::invalid_argument("VarTable: coordinate name must start with a letter: '" + n + "'");
    for (char c : n)
      if (!std::isalnum(static_cast<unsigned char>(c)))
        throw std::invalid_argument("VarTable: coordinate name must be alphanumeric: '" + n + "'");
  }
  for (size_t a = 0; a < m_names.size(); ++a)
    for (size_t b = a + 1; b < m_names.size(); ++b)
      if (m_names[a] == m_names[b])
        throw std::invalid_argument("VarTable: duplicate coordinate '" + m_names[a] + "'");
}

std::optional<int> VarTable::tryIdOf(const std::string& name) const {
  bool conj = !name.empty() && name.back() == '_';
  std::string base = conj ? name.substr(0, name.size() - 1) : name;
  for (size_t k = 0; k < m_names.size(); ++k)
    if (m_names[k] == base) return 2 * static_cast<int>(k) + (conj ? 1 : 0);
  return std::nullopt;
}

int VarTable::idOf(const std::string& name) const {
  if (auto id = tryIdOf(name)) return *id;
  throw std::invalid_argument("VarTable: unknown variable '" + name + "'");
}

std::string VarTable::nameOf(int var) const {
  int coord = coordOf(var);
  if (coord < 0 || coord >= coordCount())
    throw std::out_of_range("VarTable: variable id out of range");
  return m_names[coord] + (isConjVar(var) ? "_" : "");
}

CoeffExpr CoeffExpr::constant(Cpx c) {
  CoeffExpr e;
  if (c != 0.0) {
    Term t;
    t.coeff = c;
    e.m_terms.push_back(std::move(t));
  }
  return e;
}

CoeffExpr CoeffExpr::variable(int varId) {
  CoeffExpr e;
  Term t;
  t.coeff = 1.0;
  t.monomial.emplace_back(varId, 1);
  e.m_terms.push_back(std::move(t));
  return e;
}

CoeffExpr CoeffExpr::fromTerms(std::vector<Term> terms) {
  CoeffExpr e;
  e.m_terms = canonicalize(std::move(terms));
  return e;
}

bool CoeffExpr::isConstant() const {
  for (const auto& t : m_terms)
    if (!t.monomial.empty() || !t.expFactor.empty()) return false;
  return true;
}

Cpx CoeffExpr::constantValue() const {
  if (!isConstant()) throw std::logic_error("CoeffExpr: expression is not constant");
  Cpx v = 0.0;
  for (const auto& t : m_terms) v += t.coeff;
  return v;
}

CoeffExpr CoeffExpr::operator-() const {
  CoeffExpr e = *this;
  for (auto& t : e.m_terms) t.coeff = -t.coeff;
  return e;
}

CoeffExpr CoeffExpr::operator+(const CoeffExpr& o) const {
  std::vector<Term> ts = m_terms;
  ts.insert(ts.end(), o.m_terms.begin(), o.m_terms.end());
  return fromTerms(std::move(ts));
}

CoeffExpr CoeffExpr::operator-(const CoeffExpr& o) const { return *this + (-o); }

CoeffExpr CoeffExpr::operator*(const CoeffExpr& o) const {
  std::vector<Term> ts;
  ts.reserve(m_terms.size() * o.m_terms.size());
  for (const auto& a : m_terms)
    for (const auto& b : o.m_terms) ts.push_back(mulTerms(a, b));
  return fromTerms(std::move(ts));
}

bool CoeffExpr::operator==(const CoeffExpr& o) const {
  if (m_terms.size() != o.m_terms.size()) return false;
  for (size_t k = 0; k < m_terms.size(); ++k) {
    if (cmpKey(m_terms[k], o.m_terms[k]) != 0) return false;
    if (m_terms[k].coeff != o.m_terms[k].coeff) return false;
  }
  return true;
}

CoeffExpr operator*(Cpx c, const CoeffExpr& e) { return CoeffExpr::constant(c) * e; }

CoeffExpr expOf(const CoeffExpr& affineArg) {
  Cpx constPart = 0.0;
  std::vector<std::pair<int, Cpx>> linear;
  for (const auto& t : affineArg.terms()) {
    if (!t.expFactor.empty())
      throw std::invalid_argument("exp argument must be affine (nested exp found)");
    int deg = 0;
    for (const auto& [v, e] : t.monomial) deg += e;
    if (deg > 1)
      throw std::invalid_argument("exp argument must be affine (degree > 1 term found)");
    if (deg == 0)
      constPart += t.coeff;
    else
      linear.emplace_back(t.monomial[0].first, t.coeff);
  }
  std::sort(linear.begin(), linear.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Term t;
  t.coeff = std::exp(constPart);
  t.expFactor = std::move(linear);
  return CoeffExpr::fromTerms({t});
}

CoeffExpr diff(const CoeffExpr& e, int varId) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    for (size_t k = 0; k < t.monomial.size(); ++k) {
      if (t.monomial[k].first != varId) continue;
      Term d = t;
      d.coeff *= double(t.monomial[k].second);
      if (d.monomial[k].second == 1)
        d.monomial.erase(d.monomial.begin() + k);
      else
        d.monomial[k].second -= 1;
      out.push_back(std::move(d));
    }
    for (const auto& [v, lam] : t.expFactor) {
      if (v != varId) continue;
      Term d = t;
      d.coeff *= lam;
      out.push_back(std::move(d));
    }
  }
  return CoeffExpr::fromTerms(std::move(out));
}

CoeffExpr conjugate(const CoeffExpr& e) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    Term c;
    c.coeff = std::conj(t.coeff);
    for (const auto& [v, ex] : t.monomial) c.monomial.emplace_back(VarTable::conjId(v), ex);
    for (const auto& [v, lam] : t.expFactor)
      c.expFactor.emplace_back(VarTable::conjId(v), std::conj(lam));
    std::sort(c.monomial.begin(), c.monomial.end());
    std::sort(c.expFactor.begin(), c.expFactor.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(c));
  }
  return CoeffExpr::fromTerms(std::move(out));
}

Point Point::fromBase(const VarTable& vt, const std::vector<Cpx>& baseValues) {
  if (static_cast<int>(baseValues.size()) != vt.coordCount())
    throw std::invalid_argument("Point::fromBase: expected one value per coordinate");
  Point p;
  for (int k = 0; k < vt.coordCount(); ++k) {
    p.m_values[vt.baseId(k)] = baseValues[k];
    p.m_values[VarTable::conjId(vt.baseId(k))] = std::conj(baseValues[k]);
  }
  return p;
}

void Point::set(int varId, Cpx value) {
  int partner = VarTable::conjId(varId);
  auto it = m_values.find(partner);
  if (it != m_values.end()) {
    double scale = std::max(1.0, std::abs(value));
    if (std::abs(it->second - std::conj(value)) > 1e-12 * scale)
      throw std::invalid_argument("Point: conjugate-inconsistent assignment");
  }
  m_values[varId] = value;
  m_values[partner] = std::conj(value);
}

void Point::setRaw(int varId, Cpx value) { m_values[varId] = value; }

bool Point::has(int varId) const { return m_values.count(varId) != 0; }

Cpx Point::value(int varId) const {
  auto it = m_values.find(varId);
  if (it == m_values.end())
    throw std::invalid_argument("Point: variable id " + std::to_string(varId) + " unassigned");
  return it->second;
}

namespace {

Cpx powInt(Cpx base, unsigned k) {
  Cpx r = 1.0;
  while (k > 0) {
    if (k & 1u) r *= base;
    base *= base;
    k >>= 1u;
  }
  return r;
}

}  // namespace

Cpx eval(const CoeffExpr& e, const Point& p) {
  Cpx total = 0.0;
  for (const auto& t : e.terms()) {
    Cpx v = t.coeff;
    for (const auto& [var, ex] : t.monomial) v *= powInt(p.value(var), unsigned(ex));
    Cpx arg = 0.0;
    for (const auto& [var, lam] : t.expFactor) arg += lam * p.value(var);
    if (arg != 0.0) v *= std::exp(arg);
    total += v;
  }
  return total;
}

namespace {

std::string fmtDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmtCpx(Cpx c) {
  std::string im = fmtDouble(c.imag());
  std::string sign = (!im.empty() && im[0] == '-') ? "" : "+";
  return "(" + fmtDouble(c.real()) + sign + im + "*i)";
}

}  // namespace

std::string toString(const CoeffExpr& e, const VarTable& vt) {
  if (e.isZero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : e.terms()) {
    if (!first) s += "+";
    first = false;
    s += fmtCpx(t.coeff);
    for (const auto& [v, ex] : t.monomial) {
      s += "*" + vt.nameOf(v);
      if (ex > 1) s += "^" + std::to_string(ex);
    }
    if (!t.expFactor.empty()) {
      s += "*exp(";
      bool f2 = true;
      for (const auto& [v, lam] : t.expFactor) {
        if (!f2) s += "+";
        f2 = false;
        s += fmtCpx(lam) + "*" + vt.nameOf(v);
      }
      s += ")";
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

namespace {

class Parser {
public:
  Parser(const std::string& text, const VarTable& vt) : m_text(text), m_vt(vt) {}

  CoeffExpr parse() {
    CoeffExpr e = parseSum();
    skipWs();
    if (m_pos != m_text.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, m_pos); }

  void skipWs() {
    while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
  }

  bool eat(char c) {
    skipWs();
    if (m_pos < m_text.size() && m_text[m_pos] == c) {
      ++m_pos;
      return true;
    }
    return false;
  }

  char peek() {
    skipWs();
    return m_pos < m_text.size() ? m_text[m_pos] : '\0';
  }

  CoeffExpr parseSum() {
    CoeffExpr e = parseTerm();
    while (true) {
      if (eat('+')) e = e + parseTerm();
      else if (eat('-')) e = e - parseTerm();
      else return e;
    }
  }

  CoeffExpr parseTerm() {
    CoeffExpr e = parseFactor();
    while (eat('*')) e = e * parseFactor();
    return e;
  }

  CoeffExpr parseFactor() {
    CoeffExpr b = parseBase();
    if (eat('^')) {
      skipWs();
      size_t start = m_pos;
      while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
      if (m_pos == start) fail("exponent must be an unsigned integer");
      if (m_pos < m_text.size() && (m_text[m_pos] == '.' || m_text[m_pos] == '_'))
        fail("exponent must be an unsigned integer");
      unsigned long k = std::strtoul(m_text.substr(start, m_pos - start).c_str(), nullptr, 10);
      if (k > kMaxExponent) fail("exponent exceeds guard " + std::to_string(kMaxExponent));
      CoeffExpr r = CoeffExpr::constant(1.0);
      for (unsigned long j = 0; j < k; ++j) r = r * b;
      return r;
    }
    return b;
  }

  CoeffExpr parseBase() {
    skipWs();
    if (m_pos >= m_text.size()) fail("unexpected end of input");
    char c = m_text[m_pos];
    if (c == '-') {
      ++m_pos;
      return -parseBase();
    }
    if (c == '(') {
      ++m_pos;
      CoeffExpr e = parseSum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
    if (std::isalpha(static_cast<unsigned char>(c))) return parseWord();
    fail(std::string("unexpected character '") + c + "'");
  }

  CoeffExpr parseNumber() {
    size_t start = m_pos;
    while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
    if (m_pos < m_text.size() && m_text[m_pos] == '.') {
      ++m_pos;
      while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
    }
    // exponent notation: digits 'e'/'E' [sign] digits
    if (m_pos < m_text.size() && (m_text[m_pos] == 'e' || m_text[m_pos] == 'E')) {
      size_t save = m_pos;
      ++m_pos;
      if (m_pos < m_text.size() && (m_text[m_pos] == '+' || m_text[m_pos] == '-')) ++m_pos;
      if (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
        while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
      } else {
        m_pos = save;
      }
    }
    std::string lit = m_text.substr(start, m_pos - start);
    return CoeffExpr::constant(std::strtod(lit.c_str(), nullptr));
  }

  CoeffExpr parseWord() {
    size_t start = m_pos;
    while (m_pos < m_text.size() &&
           std::isalnum(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
    if (m_pos < m_text.size() && m_text[m_pos] == '_') ++m_pos;
    std::string word = m_text.substr(start, m_pos - start);
    if (word == "i") return CoeffExpr::constant(Cpx(0, 1));
    if (word == "pi") return CoeffExpr::constant(Cpx(3.14159265358979323846, 0));
    if (word == "exp") {
      if (!eat('(')) fail("expected '(' after exp");
      CoeffExpr arg = parseSum();
      if (!eat(')')) fail("expected ')'");
      try {
        return expOf(arg);
      } catch (const std::invalid_argument& err) {
        m_pos = start;
        fail(err.what());
      }
    }
    if (auto id = m_vt.tryIdOf(word)) return CoeffExpr::variable(*id);
    m_pos = start;
    fail("unknown identifier '" + word + "'");
  }

  const std::string& m_text;
  const VarTable& m_vt;
  size_t m_pos = 0;
};

// Dedicated exact-constant evaluator (same grammar, GaussRat semantics).
class ExactParser {
public:
  explicit ExactParser(const std::string& text) : m_text(text) {}

  GaussRat parse() {
    GaussRat v = parseSum();
    skipWs();
    if (m_pos != m_text.size()) fail("unexpected trailing input");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, m_pos); }

  void skipWs() {
    while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
  }

  bool eat(char c) {
    skipWs();
    if (m_pos < m_text.size() && m_text[m_pos] == c) {
      ++m_pos;
      return true;
    }
    return false;
  }

  GaussRat parseSum() {
    GaussRat v = parseTerm();
    while (true) {
      if (eat('+')) v += parseTerm();
      else if (eat('-')) v -= parseTerm();
      else return v;
    }
  }

  GaussRat parseTerm() {
    GaussRat v = parseFactor();
    while (eat('*')) v *= parseFactor();
    return v;
  }

  GaussRat parseFactor() {
    GaussRat b = parseBase();
    if (eat('^')) {
      skipWs();
      size_t start = m_pos;
      while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
      if (m_pos == start) fail("exponent must be an unsigned integer");
      unsigned long k = std::strtoul(m_text.substr(start, m_pos - start).c_str(), nullptr, 10);
      if (k > kMaxExponent) fail("exponent exceeds guard");
      return b.pow(static_cast<unsigned>(k));
    }
    return b;
  }

  GaussRat parseBase() {
    skipWs();
    if (m_pos >= m_text.size()) fail("unexpected end of input");
    char c = m_text[m_pos];
    if (c == '-') {
      ++m_pos;
      return -parseBase();
    }
    if (c == '(') {
      ++m_pos;
      GaussRat v = parseSum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = m_pos;
      while (m_pos < m_text.size() &&
             (std::isdigit(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '.'))
        ++m_pos;
      return GaussRat(Rational::fromDecimal(m_text.substr(start, m_pos - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = m_pos;
      while (m_pos < m_text.size() && std::isalnum(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
      if (m_pos < m_text.size() && m_text[m_pos] == '_') ++m_pos;
      std::string word = m_text.substr(start, m_pos - start);
      m_pos = start;
      if (word == "i") { m_pos += 1; return GaussRat::i(); }
      if (word == "pi") fail("pi is not Gaussian-rational (exact mode)");
      if (word == "exp") fail("exp is not supported in exact mode");
      fail("variables are not allowed in a constant ('" + word + "')");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& m_text;
  size_t m_pos = 0;
};

}  // namespace

CoeffExpr parseExpr(const std::string& text, const VarTable& vt) {
  return Parser(text, vt).parse();
}

Cpx parseConstant(const std::string& text) {
  VarTable empty;
  return Parser(text, empty).parse().constantValue();
}

GaussRat parseExactConstant(const std::string& text) { return ExactParser(text).parse(); }

}  // namespace acs
