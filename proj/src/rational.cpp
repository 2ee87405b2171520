#include "acs/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace acs {

namespace {

__int128 gcdWide(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational: 64-bit overflow");
  return static_cast<long long>(v);
}

}  // namespace

void Rational::assign(long long n, long long d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  __int128 nn = n, dd = d;
  if (dd < 0) { nn = -nn; dd = -dd; }
  __int128 g = gcdWide(nn, dd);
  if (g > 1) { nn /= g; dd /= g; }
  m_num = narrow(nn);
  m_den = narrow(dd);
}

Rational Rational::fromWide(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) { n = -n; d = -d; }
  __int128 g = gcdWide(n, d);
  if (g > 1) { n /= g; d /= g; }
  Rational r;
  r.m_num = narrow(n);
  r.m_den = narrow(d);
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return fromWide(__int128(m_num) * o.m_den + __int128(o.m_num) * m_den,
                  __int128(m_den) * o.m_den);
}

Rational Rational::operator-(const Rational& o) const {
  return fromWide(__int128(m_num) * o.m_den - __int128(o.m_num) * m_den,
                  __int128(m_den) * o.m_den);
}

Rational Rational::operator*(const Rational& o) const {
  return fromWide(__int128(m_num) * o.m_num, __int128(m_den) * o.m_den);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.m_num == 0) throw std::domain_error("Rational: division by zero");
  return fromWide(__int128(m_num) * o.m_den, __int128(m_den) * o.m_num);
}

bool Rational::operator<(const Rational& o) const {
  return __int128(m_num) * o.m_den < __int128(o.m_num) * m_den;
}

std::string Rational::str() const {
  std::string s = std::to_string(m_num);
  if (m_den != 1) s += "/" + std::to_string(m_den);
  return s;
}

Rational Rational::fromDecimal(const std::string& text) {
  size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
    throw std::invalid_argument("Rational::fromDecimal: bad literal '" + text + "'");
  __int128 num = 0, den = 1;
  bool afterPoint = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      num = num * 10 + (c - '0');
      if (afterPoint) den *= 10;
      if (den > __int128(1000000000000000000LL))
        throw std::overflow_error("Rational::fromDecimal: too many digits");
      if (num > (__int128(1) << 100))
        throw std::overflow_error("Rational::fromDecimal: too many digits");
    } else if (c == '.' && !afterPoint) {
      afterPoint = true;
    } else {
      throw std::invalid_argument("Rational::fromDecimal: bad literal '" + text + "'");
    }
  }
  if (neg) num = -num;
  return fromWide(num, den);
}

GaussRat GaussRat::pow(unsigned k) const {
  GaussRat r(1);
  GaussRat base = *this;
  while (k > 0) {
    if (k & 1u) r *= base;
    base *= base;
    k >>= 1u;
  }
  return r;
}

std::string GaussRat::str() const {
  if (m_im.isZero()) return m_re.str();
  std::string s;
  if (!m_re.isZero()) s = m_re.str();
  if (m_im.sign() >= 0 && !s.empty()) s += "+";
  s += m_im.str() + "i";
  return s;
}

namespace {

struct Rref {
  std::vector<std::vector<GaussRat>> m;  // reduced [A | extras]
  std::vector<int> pivotCol;             // pivot column of each pivot row
};

// Reduced row echelon form over the Gaussian rationals; `cols` counts the
// coefficient columns (any extra columns ride along as right-hand sides).
Rref rref(std::vector<std::vector<GaussRat>> m, size_t cols) {
  Rref out;
  size_t rows = m.size();
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t piv = row;
    while (piv < rows && m[piv][col].isZero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[row], m[piv]);
    GaussRat inv = GaussRat(1) / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == row || m[r][col].isZero()) continue;
      GaussRat f = m[r][col];
      for (size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    out.pivotCol.push_back(static_cast<int>(col));
    ++row;
  }
  out.m = std::move(m);
  return out;
}

}  // namespace

ExactSolution solveExact(const std::vector<std::vector<GaussRat>>& A,
                         const std::vector<GaussRat>& b) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  if (b.size() != rows) throw std::invalid_argument("solveExact: size mismatch");
  std::vector<std::vector<GaussRat>> aug(rows, std::vector<GaussRat>(cols + 1));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) aug[r][c] = A[r][c];
    aug[r][cols] = b[r];
  }
  Rref red = rref(std::move(aug), cols);
  ExactSolution sol;
  size_t rank = red.pivotCol.size();
  for (size_t r = rank; r < rows; ++r)
    if (!red.m[r][cols].isZero()) return sol;  // inconsistent
  sol.consistent = true;
  sol.kernelDim = static_cast<int>(cols - rank);
  sol.x.assign(cols, GaussRat(0));
  for (size_t r = 0; r < rank; ++r) sol.x[red.pivotCol[r]] = red.m[r][cols];
  return sol;
}

std::vector<std::vector<GaussRat>> kernelExact(const std::vector<std::vector<GaussRat>>& A) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  Rref red = rref(A, cols);
  std::vector<bool> isPivot(cols, false);
  for (int c : red.pivotCol) isPivot[c] = true;
  std::vector<std::vector<GaussRat>> basis;
  for (size_t freeCol = 0; freeCol < cols; ++freeCol) {
    if (isPivot[freeCol]) continue;
    std::vector<GaussRat> v(cols, GaussRat(0));
    v[freeCol] = GaussRat(1);
    for (size_t r = 0; r < red.pivotCol.size(); ++r)
      v[red.pivotCol[r]] = -red.m[r][freeCol];
    basis.push_back(std::move(v));
  }
  return basis;
}

Signature symmetricSignature(std::vector<std::vector<Rational>> m) {
  size_t n = m.size();
  Signature sig;
  for (size_t k = 0; k < n; ++k) {
    // Find a usable pivot on the diagonal at or below k.
    size_t piv = k;
    while (piv < n && m[piv][piv].isZero()) ++piv;
    if (piv == n) {
      // All remaining diagonal entries vanish: look for an off-diagonal entry
      // and fold it onto the diagonal with a congruence row+col addition.
      size_t ri = n, rj = n;
      for (size_t i = k; i < n && ri == n; ++i)
        for (size_t j = i + 1; j < n; ++j)
          if (!m[i][j].isZero()) { ri = i; rj = j; break; }
      if (ri == n) {
        sig.zero += static_cast<int>(n - k);
        return sig;
      }
      for (size_t c = 0; c < n; ++c) m[ri][c] += m[rj][c];
      for (size_t r = 0; r < n; ++r) m[r][ri] += m[r][rj];
      piv = ri;
    }
    if (piv != k) {
      std::swap(m[piv], m[k]);
      for (size_t r = 0; r < n; ++r) std::swap(m[r][piv], m[r][k]);
    }
    Rational d = m[k][k];
    if (d.sign() > 0) ++sig.positive; else ++sig.negative;
    for (size_t r = k + 1; r < n; ++r) {
      if (m[r][k].isZero()) continue;
      Rational f = m[r][k] / d;
      for (size_t c = 0; c < n; ++c) m[r][c] -= f * m[k][c];
      for (size_t c = 0; c < n; ++c) m[c][r] -= f * m[c][k];
    }
  }
  return sig;
}

}  // namespace acs
