#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace acs {

/// Exact rational number with canonical form den > 0, gcd(num, den) = 1.
/// Intermediate products use 128-bit arithmetic; results that do not fit in
/// 64 bits throw std::overflow_error.
class Rational {
public:
  Rational() : m_num(0), m_den(1) {}
  Rational(long long n) : m_num(n), m_den(1) {}
  Rational(long long n, long long d) { assign(n, d); }

  long long num() const { return m_num; }
  long long den() const { return m_den; }
  bool isZero() const { return m_num == 0; }
  bool isInteger() const { return m_den == 1; }
  int sign() const { return m_num > 0 ? 1 : (m_num < 0 ? -1 : 0); }

  Rational operator-() const { return Rational(-m_num, m_den); }
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const { return m_num == o.m_num && m_den == o.m_den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  double toDouble() const { return double(m_num) / double(m_den); }
  std::string str() const;

  /// Parses integer or fixed-point decimal text ("2", "-0.25"). Exponent
  /// notation and anything else is rejected.
  static Rational fromDecimal(const std::string& text);

private:
  void assign(long long n, long long d);
  static Rational fromWide(__int128 n, __int128 d);
  long long m_num;
  long long m_den;
  friend struct RationalWide;
};

/// Gaussian rational a + b*i with exact field operations.
class GaussRat {
public:
  GaussRat() = default;
  GaussRat(long long n) : m_re(n) {}
  GaussRat(const Rational& re) : m_re(re) {}
  GaussRat(const Rational& re, const Rational& im) : m_re(re), m_im(im) {}
  GaussRat(long long re, long long im) : m_re(re), m_im(im) {}
  GaussRat(long long re, const Rational& im) : m_re(re), m_im(im) {}

  static GaussRat i() { return GaussRat(0, 1); }

  const Rational& re() const { return m_re; }
  const Rational& im() const { return m_im; }
  bool isZero() const { return m_re.isZero() && m_im.isZero(); }
  bool isReal() const { return m_im.isZero(); }

  GaussRat conj() const { return GaussRat(m_re, -m_im); }
  Rational normSq() const { return m_re * m_re + m_im * m_im; }

  GaussRat operator-() const { return GaussRat(-m_re, -m_im); }
  GaussRat operator+(const GaussRat& o) const { return GaussRat(m_re + o.m_re, m_im + o.m_im); }
  GaussRat operator-(const GaussRat& o) const { return GaussRat(m_re - o.m_re, m_im - o.m_im); }
  GaussRat operator*(const GaussRat& o) const {
    return GaussRat(m_re * o.m_re - m_im * o.m_im, m_re * o.m_im + m_im * o.m_re);
  }
  GaussRat operator/(const GaussRat& o) const {
    Rational n = o.normSq();
    if (n.isZero()) throw std::domain_error("GaussRat: division by zero");
    GaussRat p = *this * o.conj();
    return GaussRat(p.m_re / n, p.m_im / n);
  }
  GaussRat& operator+=(const GaussRat& o) { return *this = *this + o; }
  GaussRat& operator-=(const GaussRat& o) { return *this = *this - o; }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
  GaussRat& operator/=(const GaussRat& o) { return *this = *this / o; }

  bool operator==(const GaussRat& o) const { return m_re == o.m_re && m_im == o.m_im; }
  bool operator!=(const GaussRat& o) const { return !(*this == o); }

  GaussRat pow(unsigned k) const;
  std::string str() const;

private:
  Rational m_re;
  Rational m_im;
};

struct ExactSolution {
  bool consistent = false;
  std::vector<GaussRat> x;  ///< one particular solution (free variables set to 0)
  int kernelDim = 0;
};

/// Gauss-Jordan over the Gaussian rationals for A x = b (A is m x n, row-major).
ExactSolution solveExact(const std::vector<std::vector<GaussRat>>& A,
                         const std::vector<GaussRat>& b);

/// Kernel basis of A over the Gaussian rationals.
std::vector<std::vector<GaussRat>> kernelExact(const std::vector<std::vector<GaussRat>>& A);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

/// Exact signature of a symmetric rational matrix via congruence diagonalization.
Signature symmetricSignature(std::vector<std::vector<Rational>> m);

}  // namespace acs
