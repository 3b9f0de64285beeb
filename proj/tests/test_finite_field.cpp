#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pgcm/finite_field.hpp"

using namespace pgcm;

namespace {

std::set<int> squares_by_table(int p)
{
  std::set<int> s;
  for (int a = 1; a < p; ++a)
    s.insert(a * a % p);
  return s;
}

std::vector<int> small_primes(int bound)
{
  std::vector<int> out;
  for (int n = 2; n <= bound; ++n) {
    bool prime = true;
    for (int d = 2; d * d <= n; ++d)
      prime = prime && n % d;
    if (prime)
      out.push_back(n);
  }
  return out;
}

} // namespace

TEST(FiniteField, EtaExamples)
{
  EXPECT_EQ(PrimeContext(3).eta(), 2);
  EXPECT_EQ(PrimeContext(7).eta(), 3);
  PrimeContext two(2);
  EXPECT_FALSE(two.has_eta());
  EXPECT_THROW(two.eta(), DomainError);
}

TEST(FiniteField, RejectsBadPrimes)
{
  EXPECT_THROW(PrimeContext(1), DomainError);
  EXPECT_THROW(PrimeContext(9), DomainError);
  EXPECT_THROW(make_context(10007), DomainError);
  EXPECT_NO_THROW(PrimeContext(9973));
}

TEST(FiniteField, IsSquareExamples)
{
  PrimeContext f5(5);
  EXPECT_FALSE(f5.is_square(2));
  EXPECT_TRUE(f5.is_square(4));
  EXPECT_TRUE(f5.is_square(0));
  EXPECT_TRUE(PrimeContext::is_zero(0));
  PrimeContext f13(13);
  auto sq = squares_by_table(13);
  EXPECT_EQ(f13.is_square(5), sq.count(5) == 1);
}

TEST(FiniteField, InverseExamples)
{
  EXPECT_EQ(PrimeContext(5).inv(2), 3);
  EXPECT_EQ(PrimeContext(7).inv(1), 1);
  PrimeContext f101(101);
  EXPECT_EQ(37 * f101.inv(37) % 101, 1);
  EXPECT_THROW(f101.inv(0), DomainError);
}

TEST(FiniteFieldProperty, InverseInvolution)
{
  for (int p : small_primes(200)) {
    PrimeContext F(p);
    for (int a = 1; a < p; ++a) {
      ASSERT_EQ(F.mul(a, F.inv(a)), 1) << p << " " << a;
      ASSERT_EQ(F.inv(F.inv(a)), a);
    }
  }
}

TEST(FiniteFieldProperty, EulerCriterionAndSquareCount)
{
  for (int p : small_primes(100)) {
    if (p == 2)
      continue;
    PrimeContext F(p);
    auto sq = squares_by_table(p);
    int count = 0;
    for (int a = 1; a < p; ++a) {
      long long e = 1;
      for (int k = 0; k < (p - 1) / 2; ++k)
        e = e * a % p;
      ASSERT_EQ(F.is_square(a), e == 1) << p << " " << a;
      ASSERT_EQ(F.is_square(a), sq.count(a) == 1);
      count += F.is_square(a);
    }
    EXPECT_EQ(count, (p - 1) / 2);
  }
}

TEST(FiniteFieldProperty, EtaIsLeastNonSquare)
{
  for (int p : small_primes(500)) {
    if (p == 2)
      continue;
    PrimeContext F(p);
    auto sq = squares_by_table(p);
    EXPECT_EQ(sq.count(F.eta()), 0u);
    for (int a = 1; a < F.eta(); ++a)
      EXPECT_EQ(sq.count(a), 1u) << p << " " << a;
  }
}

TEST(FiniteFieldProperty, SqrtLogExp)
{
  std::mt19937 rng(0);
  for (int p : {2, 3, 5, 7, 11, 101, 997}) {
    PrimeContext F(p);
    for (int a = 1; a < p; ++a) {
      if (auto r = F.sqrt(a))
        ASSERT_EQ(F.mul(*r, *r), a);
      else
        ASSERT_FALSE(F.is_square(a));
      ASSERT_EQ(F.exp(F.log(a)), a);
    }
    EXPECT_EQ(F.square_class(1), 1);
    for (int k = 0; k < 50; ++k) {
      int a = rng() % p, b = rng() % p;
      ASSERT_EQ(F.add(a, b), (a + b) % p);
      ASSERT_EQ(F.sub(a, b), ((a - b) % p + p) % p);
      ASSERT_EQ(F.mul(a, b), a * b % p);
      ASSERT_EQ(F.add(a, F.neg(a)), 0);
    }
  }
}
