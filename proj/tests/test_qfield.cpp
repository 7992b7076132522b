#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qborel/qfield.hpp>

using namespace qb;

static RatQ qp(int k) { return RatQ::q_power(k); }

TEST_CASE("Laurent arithmetic basics") {
  Laurent a = Laurent::monomial(2, 3) + Laurent::monomial(-1, -2);
  Laurent b = Laurent::monomial(1, 2);
  CHECK((a * b) == (Laurent::monomial(2, 5) + Laurent::monomial(-1, 0)));
  CHECK((a - a).is_zero());
  CHECK(a.low() == -2);
  CHECK(a.high() == 3);
  CHECK(a.eval(Rational(1, 2)) == Rational(2, 8) - Rational(4));
}

TEST_CASE("fraction reduction to canonical form") {
  // (q^2 - q^-2) / (q - q^-1) == q + q^-1.
  RatQ lhs(Laurent::monomial(1, 2) - Laurent::monomial(1, -2),
           Laurent::monomial(1, 1) - Laurent::monomial(1, -1));
  RatQ rhs(Laurent::monomial(1, 1) + Laurent::monomial(1, -1));
  CHECK(lhs == rhs);

  // 1/(1-q) + 1/(1+q) == 2/(1-q^2).
  RatQ one(1);
  RatQ f = one / RatQ(Laurent(1) - Laurent::monomial(1, 1)) +
           one / RatQ(Laurent(1) + Laurent::monomial(1, 1));
  RatQ g = RatQ(2) / RatQ(Laurent(1) - Laurent::monomial(1, 2));
  CHECK(f == g);

  // Cancellation to zero has canonical denominator 1.
  RatQ z = lhs - rhs;
  CHECK(z.is_zero());
  CHECK(z == RatQ());
}

TEST_CASE("field axioms on a stock of elements") {
  std::vector<RatQ> xs = {qp(2), qp(-1) + RatQ(3), RatQ(1) / (qp(1) - qp(-1)),
                          RatQ(Rational(-7, 3)) * qp(5) + RatQ(1)};
  for (const auto& a : xs)
    for (const auto& b : xs)
      for (const auto& c : xs) {
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b) * c == a * (b * c));
      }
  for (const auto& a : xs) {
    if (!a.is_zero()) CHECK(a / a == RatQ(1));
    CHECK(a - a == RatQ());
  }
}

TEST_CASE("quantum integers") {
  // [3]_q = q^2 + 1 + q^-2; at q = 1/2 it equals 21/4.
  Laurent three = q_int(3);
  CHECK(three ==
        (Laurent::monomial(1, 2) + Laurent(1) + Laurent::monomial(1, -2)));
  CHECK(three.eval(Rational(1, 2)) == Rational(21, 4));
  // [n]_v satisfies the defining fraction (v^-n - v^n)/(v^-1 - v), v = q^d.
  for (int d = 1; d <= 3; ++d)
    for (int n = -5; n <= 5; ++n) {
      RatQ frac(Laurent::monomial(1, -n * d) - Laurent::monomial(1, n * d),
                Laurent::monomial(1, -d) - Laurent::monomial(1, d));
      CHECK(RatQ(q_int(n, d)) == frac);
    }
  CHECK(q_int(0).is_zero());
  CHECK(q_int(-2) == -q_int(2));
}

TEST_CASE("quantum factorials and binomials") {
  // [3]! = [3][2] = (q^2+1+q^-2)(q+q^-1); value at q=1/2 is 105/8.
  CHECK(q_factorial(3).eval(Rational(1, 2)) == Rational(105, 8));
  // Balanced Gaussian binomial [4 choose 2] = q^-4+q^-2+2+q^2+q^4.
  RatQ b42 = q_binomial(4, 2);
  RatQ expect = qp(-4) + qp(-2) + RatQ(2) + qp(2) + qp(4);
  CHECK(b42 == expect);
  // Pascal recurrence [n k]_v = v^-k [n-1 k]_v + v^{n-k} [n-1 k-1]_v.
  for (int d = 1; d <= 2; ++d)
    for (int n = 1; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) {
        RatQ lhs = q_binomial(n, k, d);
        RatQ rhs = RatQ::q_power(-k * d) * q_binomial(n - 1, k, d) +
                   RatQ::q_power((n - k) * d) * q_binomial(n - 1, k - 1, d);
        CHECK(lhs == rhs);
      }
}

TEST_CASE("evaluation matches exact arithmetic") {
  RatQ x = RatQ(q_int(4, 2)) / (qp(3) - qp(-3) + RatQ(5));
  Rational q(1, 2);
  Rational direct = x.eval(q);
  Rational parts = q_int(4, 2).eval(q) /
                   (Rational(1, 8) - Rational(8) + Rational(5));
  CHECK(direct == parts);
  CHECK(x.eval_double(q) == doctest::Approx(static_cast<double>(parts)));
}
