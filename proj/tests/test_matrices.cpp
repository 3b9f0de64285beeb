#include <gtest/gtest.h>

#include <random>

#include "pgcm/matrices.hpp"

using namespace pgcm;

namespace {

template <int N>
Mat<N> random_mat(std::mt19937 &rng, int p)
{
  Mat<N> A;
  for (auto &v : A.a)
    v = static_cast<Fp>(rng() % p);
  return A;
}

// Schoolbook product with plain integers.
template <int N>
Mat<N> oracle_mul(const Mat<N> &A, const Mat<N> &B, int p)
{
  Mat<N> C;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      long s = 0;
      for (int k = 0; k < N; ++k)
        s += 1L * A(i, k) * B(k, j);
      C(i, j) = static_cast<Fp>(s % p);
    }
  return C;
}

// Rank by explicit pivot bookkeeping on a long-integer copy.
int oracle_rank(const Mat3 &A, int p)
{
  long m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i][j] = A(i, j);
  bool used[3] = {false, false, false};
  int r = 0;
  for (int c = 0; c < 3; ++c) {
    int piv = -1;
    for (int i = 0; i < 3; ++i)
      if (!used[i] && m[i][c] % p) {
        piv = i;
        break;
      }
    if (piv < 0)
      continue;
    used[piv] = true;
    ++r;
    long inv = 1;
    for (int k = 0; k < p - 2; ++k)
      inv = inv * m[piv][c] % p;
    for (int i = 0; i < 3; ++i)
      if (i != piv && m[i][c] % p) {
        long f = m[i][c] * inv % p;
        for (int j = 0; j < 3; ++j)
          m[i][j] = ((m[i][j] - f * m[piv][j]) % p + p) % p;
      }
  }
  return r;
}

} // namespace

TEST(Matrices, Examples)
{
  PrimeContext F(3);
  Mat3 I = Mat3::identity();
  EXPECT_EQ(det(F, I), 1);
  EXPECT_EQ(rank(F, I), 3);
  Mat3 P = parse_matrix<3>(F, "0,1,0;0,0,1;1,0,0");
  EXPECT_EQ(mat_mul(F, P, P), parse_matrix<3>(F, "0,0,1;1,0,0;0,1,0"));
  for (Fp t = 1; t < 3; ++t) {
    Mat3 B18;
    B18(1, 2) = 1;
    B18(2, 1) = t;
    EXPECT_EQ(rank(F, B18), 2);
  }
  EXPECT_EQ(adjugate3(F, I), I);
  PrimeContext F5(5);
  EXPECT_EQ(adjugate3(F5, Mat3::diag({1, 2, 3})), Mat3::diag({1, 3, 2}));
}

TEST(Matrices, ParseAndFormat)
{
  PrimeContext F(3);
  Mat3 A = parse_matrix<3>(F, "0,0,0;0,0,1;0,-1,0");
  EXPECT_EQ(A(2, 1), 2);
  EXPECT_EQ(format_matrix(A), "0,0,0;0,0,1;0,2,0");
  EXPECT_EQ(parse_matrix<3>(F, " 1 , 2 ,0; 0,1,1 ;4,0,0"), parse_matrix<3>(F, "1,2,0;0,1,1;1,0,0"));
  EXPECT_THROW(parse_matrix<3>(F, "1,2;3,4"), ParseError);
  EXPECT_THROW(parse_matrix<3>(F, "1,2,x;0,0,0;0,0,0"), ParseError);
  EXPECT_THROW(parse_matrix<3>(F, "1,2,3;0,0,0"), ParseError);
}

TEST(MatricesProperty, ProductAgainstSchoolbook)
{
  std::mt19937 rng(0);
  PrimeContext F(5);
  for (int k = 0; k < 1000; ++k) {
    Mat3 A = random_mat<3>(rng, 5), B = random_mat<3>(rng, 5);
    ASSERT_EQ(mat_mul(F, A, B), oracle_mul(A, B, 5));
    ASSERT_EQ(mat_mul(F, Mat3::identity(), A), A);
  }
}

TEST(MatricesProperty, RankAgainstEliminationOracle)
{
  std::mt19937 rng(1);
  PrimeContext F(3);
  for (int k = 0; k < 100; ++k) {
    Mat3 A = random_mat<3>(rng, 3);
    ASSERT_EQ(rank(F, A), oracle_rank(A, 3));
  }
}

TEST(MatricesProperty, AdjugateIdentityExhaustiveF2)
{
  PrimeContext F(2);
  for (std::uint64_t c = 0; c < 512; ++c) {
    Mat3 A = decode<3>(2, c);
    Mat3 dI = scale(F, det(F, A), Mat3::identity());
    ASSERT_EQ(mat_mul(F, A, adjugate3(F, A)), dI);
    ASSERT_EQ(mat_mul(F, adjugate3(F, A), A), dI);
    ASSERT_EQ(encode(2, A), c);
  }
}

TEST(MatricesProperty, AdjugateRandom)
{
  std::mt19937 rng(2);
  for (int p : {3, 5, 7}) {
    PrimeContext F(p);
    for (int k = 0; k < 10000; ++k) {
      Mat3 A = random_mat<3>(rng, p);
      Mat3 dI = scale(F, det(F, A), Mat3::identity());
      ASSERT_EQ(mat_mul(F, A, adjugate3(F, A)), dI);
      ASSERT_EQ(mat_mul(F, adjugate3(F, A), A), dI);
      if (p == 7 && det(F, A))
        ASSERT_EQ(adjugate3(F, A), scale(F, det(F, A), inverse(F, A)));
    }
  }
}

TEST(MatricesProperty, DetRankTranspose)
{
  std::mt19937 rng(3);
  for (int p : {2, 3, 5, 7}) {
    PrimeContext F(p);
    for (int k = 0; k < 2000; ++k) {
      Mat3 A = random_mat<3>(rng, p), B = random_mat<3>(rng, p);
      ASSERT_EQ(det(F, mat_mul(F, A, B)), F.mul(det(F, A), det(F, B)));
      ASSERT_EQ(transpose(transpose(A)), A);
      ASSERT_EQ(det(F, transpose(A)), det(F, A));
      if (det(F, B) && det(F, mat_mul(F, A, B)) == det(F, mat_mul(F, A, B))) {
        Mat3 P = random_mat<3>(rng, p);
        if (det(F, P))
          ASSERT_EQ(rank(F, mat_mul(F, mat_mul(F, P, A), B)), rank(F, A));
      }
      Mat2 a = random_mat<2>(rng, p), b = random_mat<2>(rng, p);
      ASSERT_EQ(det(F, mat_mul(F, a, b)), F.mul(det(F, a), det(F, b)));
    }
  }
}

TEST(Matrices, SingularInverseThrows)
{
  PrimeContext F(5);
  EXPECT_THROW(inverse(F, Mat3{}), DomainError);
}
