#pragma once

/// Exact arithmetic in the field Q(q) of rational functions in one variable,
/// represented as quotients of Laurent polynomials with arbitrary-precision
/// rational coefficients.  This is the coefficient field for all symbolic
/// computations in the library; numeric back-ends obtain doubles by
/// evaluating at a fixed 0 < q < 1.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qb {

using Rational = boost::multiprecision::cpp_rational;

/// Sparse Laurent polynomial in q over Q: exponent -> coefficient,
/// zero coefficients never stored.
class Laurent {
 public:
  Laurent() = default;
  Laurent(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) c_[0] = c;
  }
  Laurent(long c) : Laurent(Rational(c)) {}  // NOLINT

  /// c * q^k.
  static Laurent monomial(const Rational& c, int k) {
    Laurent p;
    if (c != 0) p.c_[k] = c;
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  bool operator==(const Laurent& o) const { return c_ == o.c_; }

  /// Lowest and highest exponents (requires nonzero).
  int low() const { return c_.begin()->first; }
  int high() const { return c_.rbegin()->first; }

  const std::map<int, Rational>& coeffs() const { return c_; }

  Laurent& operator+=(const Laurent& o) {
    for (const auto& [k, v] : o.c_) add_term(k, v);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    for (const auto& [k, v] : o.c_) add_term(k, -v);
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  Laurent operator-() const {
    Laurent r;
    for (const auto& [k, v] : c_) r.c_[k] = -v;
    return r;
  }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ka, va] : a.c_)
      for (const auto& [kb, vb] : b.c_) r.add_term(ka + kb, va * vb);
    return r;
  }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

  /// Multiply by q^k.
  Laurent shifted(int k) const {
    Laurent r;
    for (const auto& [e, v] : c_) r.c_[e + k] = v;
    return r;
  }

  Rational eval(const Rational& q) const {
    Rational acc = 0;
    for (const auto& [k, v] : c_) {
      Rational p = 1;
      for (int i = 0; i < std::abs(k); ++i) p *= q;
      acc += v * (k >= 0 ? p : Rational(1) / p);
    }
    return acc;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
      if (!first) os << " + ";
      os << "(" << v << ")q^" << k;
      first = false;
    }
    return os.str();
  }

 private:
  void add_term(int k, const Rational& v) {
    auto it = c_.find(k);
    if (it == c_.end()) {
      if (v != 0) c_[k] = v;
    } else {
      it->second += v;
      if (it->second == 0) c_.erase(it);
    }
  }
  std::map<int, Rational> c_;
};

namespace detail {

/// Ordinary polynomial (exponents >= 0) as dense coefficient vector, used
/// only inside gcd/division.  poly[i] is the coefficient of q^i.
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly to_poly(const Laurent& l, int shift) {
  Poly p;
  for (const auto& [k, v] : l.coeffs()) {
    int e = k + shift;
    if (static_cast<int>(p.size()) <= e) p.resize(e + 1);
    p[e] = v;
  }
  return p;
}

inline Laurent from_poly(const Poly& p) {
  Laurent l;
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) l += Laurent::monomial(p[i], static_cast<int>(i));
  return l;
}

inline Poly poly_div_exact(Poly a, const Poly& b) {
  poly_trim(a);
  Poly qout(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    size_t off = a.size() - b.size();
    qout[off] = f;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    poly_trim(a);
  }
  return qout;
}

// Integer polynomials for the gcd kernel: the primitive polynomial remainder
// sequence keeps coefficient growth polynomial, unlike rational Euclid.
using Int = boost::multiprecision::cpp_int;
using IPoly = std::vector<Int>;

inline void ipoly_trim(IPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline void ipoly_primitive(IPoly& p) {
  Int g = 0;
  for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
  if (g == 0) return;
  if (p.back() < 0) g = -g;
  for (auto& c : p) c /= g;
}

/// Pseudo-remainder of a by b (b nonzero, trimmed).
inline IPoly ipoly_prem(IPoly a, const IPoly& b) {
  ipoly_trim(a);
  const Int& lb = b.back();
  while (a.size() >= b.size() && !a.empty()) {
    Int la = a.back();
    size_t off = a.size() - b.size();
    for (auto& c : a) c *= lb;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= la * b[i];
    ipoly_trim(a);
  }
  return a;
}

inline IPoly to_ipoly(const Poly& p) {
  Int l = 1;
  for (const auto& c : p)
    l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c));
  IPoly r(p.size());
  for (size_t i = 0; i < p.size(); ++i)
    r[i] = boost::multiprecision::numerator(p[i]) *
           (l / boost::multiprecision::denominator(p[i]));
  return r;
}

/// Monic gcd over Q via the primitive PRS over Z.
inline Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  if (a.empty()) std::swap(a, b);
  if (b.empty()) {
    if (!a.empty()) {
      Rational lead = a.back();
      for (auto& c : a) c /= lead;
    }
    return a;
  }
  if (a.size() == 1 || b.size() == 1) return Poly{Rational(1)};
  IPoly ia = to_ipoly(a), ib = to_ipoly(b);
  ipoly_primitive(ia);
  ipoly_primitive(ib);
  while (!ib.empty()) {
    IPoly r = ipoly_prem(ia, ib);
    ipoly_primitive(r);
    ia = std::move(ib);
    ib = std::move(r);
  }
  Poly g(ia.size());
  for (size_t i = 0; i < ia.size(); ++i) g[i] = Rational(ia[i], ia.back());
  return g;
}

/// Divide out the polynomial gcd of two Laurent polynomials in place
/// (q-power factors are kept with their owners).
inline void cross_cancel(Laurent& a, Laurent& b) {
  if (a.is_zero() || b.is_zero()) return;
  if (a.coeffs().size() == 1 || b.coeffs().size() == 1) return;
  int la = a.low(), lb = b.low();
  Poly pa = to_poly(a, -la), pb = to_poly(b, -lb);
  Poly g = poly_gcd(pa, pb);
  if (g.size() <= 1) return;
  a = from_poly(poly_div_exact(std::move(pa), g)).shifted(la);
  b = from_poly(poly_div_exact(std::move(pb), g)).shifted(lb);
}

}  // namespace detail

/// Element of Q(q): reduced fraction of Laurent polynomials.  Canonical form:
/// gcd(num, den) = 1 as polynomials, den has lowest exponent 0 and lowest
/// coefficient 1; the zero element is 0/1.
class RatQ {
 public:
  RatQ() : num_(), den_(Rational(1)) {}
  RatQ(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  RatQ(long c) : RatQ(Rational(c)) {}                      // NOLINT
  RatQ(int c) : RatQ(Rational(c)) {}                       // NOLINT
  RatQ(Laurent n) : num_(std::move(n)), den_(Rational(1)) {}  // NOLINT
  RatQ(Laurent n, Laurent d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::invalid_argument("RatQ: zero denominator");
    reduce();
  }

  /// c * q^k as a field element.
  static RatQ q_power(int k, const Rational& c = 1) {
    return RatQ(Laurent::monomial(c, k));
  }

  const Laurent& num() const { return num_; }
  const Laurent& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool operator==(const RatQ& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RatQ& o) const { return !(*this == o); }

  friend RatQ operator+(const RatQ& a, const RatQ& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return RatQ(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatQ operator-(const RatQ& a, const RatQ& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return RatQ(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatQ operator*(const RatQ& a, const RatQ& b) {
    if (a.is_zero() || b.is_zero()) return RatQ();
    // Operands are canonical, so after cross cancellation the product is
    // already in lowest terms; only the q-power normalization remains.
    Laurent an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
    detail::cross_cancel(an, bd);
    detail::cross_cancel(bn, ad);
    RatQ r;
    r.num_ = an * bn;
    r.den_ = ad * bd;
    r.normalize_units();
    return r;
  }
  friend RatQ operator/(const RatQ& a, const RatQ& b) {
    if (b.is_zero()) throw std::domain_error("RatQ: division by zero");
    if (a.is_zero()) return RatQ();
    Laurent an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
    detail::cross_cancel(an, bn);
    detail::cross_cancel(bd, ad);
    RatQ r;
    r.num_ = an * bd;
    r.den_ = ad * bn;
    r.normalize_units();
    return r;
  }
  RatQ operator-() const {
    RatQ r = *this;
    r.num_ = -r.num_;
    return r;
  }
  RatQ& operator+=(const RatQ& o) { return *this = *this + o; }
  RatQ& operator-=(const RatQ& o) { return *this = *this - o; }
  RatQ& operator*=(const RatQ& o) { return *this = *this * o; }
  RatQ& operator/=(const RatQ& o) { return *this = *this / o; }

  RatQ inv() const { return RatQ(1) / *this; }

  Rational eval(const Rational& q) const {
    Rational d = den_.eval(q);
    if (d == 0) throw std::domain_error("RatQ: pole at evaluation point");
    return num_.eval(q) / d;
  }
  double eval_double(const Rational& q) const {
    return static_cast<double>(eval(q));
  }

  std::string str() const {
    if (den_ == Laurent(Rational(1))) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
  }

 private:
  void reduce() {
    using namespace detail;
    if (num_.is_zero()) {
      den_ = Laurent(Rational(1));
      return;
    }
    if (num_.coeffs().size() > 1 && den_.coeffs().size() > 1)
      cross_cancel(num_, den_);
    normalize_units();
  }

  /// Make the denominator an ordinary polynomial with constant term 1,
  /// moving the unit (q-power and scalar) into the numerator.
  void normalize_units() {
    if (num_.is_zero()) {
      den_ = Laurent(Rational(1));
      return;
    }
    int ld = den_.low();
    Rational c = den_.coeffs().begin()->second;
    if (ld == 0 && c == 1) return;
    Laurent nn, nd;
    for (const auto& [k, v] : num_.coeffs())
      nn += Laurent::monomial(v / c, k - ld);
    for (const auto& [k, v] : den_.coeffs())
      nd += Laurent::monomial(v / c, k - ld);
    num_ = std::move(nn);
    den_ = std::move(nd);
  }

  Laurent num_, den_;
};

/// The quantum integer [n]_v = (v^{-n} - v^n) / (v^{-1} - v) evaluated at
/// v = q^d, as a Laurent polynomial: sum of q^{d(n-1-2k)}, k = 0..n-1.
inline Laurent q_int(int n, int d = 1) {
  if (n < 0) return -q_int(-n, d);
  Laurent r;
  for (int k = 0; k < n; ++k) r += Laurent::monomial(1, d * (n - 1 - 2 * k));
  return r;
}

/// [n]_{q^d}! as a Laurent polynomial.
inline Laurent q_factorial(int n, int d = 1) {
  Laurent r{Rational(1)};
  for (int m = 2; m <= n; ++m) r *= q_int(m, d);
  return r;
}

/// Gaussian binomial [n choose k]_{q^d} as an exact field element.
inline RatQ q_binomial(int n, int k, int d = 1) {
  if (k < 0 || k > n) return RatQ();
  return RatQ(q_factorial(n, d)) /
         RatQ(q_factorial(k, d) * q_factorial(n - k, d));
}

}  // namespace qb
