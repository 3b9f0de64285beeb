#pragma once

// Fixed-size 2x2 and 3x3 matrices over F_p.

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "finite_field.hpp"

namespace pgcm {

class ParseError : public Error {
public:
  using Error::Error;
};

template <int N>
struct Mat {
  std::array<Fp, N * N> a{};

  Fp &operator()(int i, int j) { return a[i * N + j]; }
  Fp operator()(int i, int j) const { return a[i * N + j]; }

  static Mat identity()
  {
    Mat m;
    for (int i = 0; i < N; ++i)
      m(i, i) = 1;
    return m;
  }
  static Mat diag(std::array<Fp, N> d)
  {
    Mat m;
    for (int i = 0; i < N; ++i)
      m(i, i) = d[i];
    return m;
  }

  bool is_zero() const
  {
    for (Fp v : a)
      if (v)
        return false;
    return true;
  }

  friend bool operator==(const Mat &, const Mat &) = default;
  friend auto operator<=>(const Mat &, const Mat &) = default;
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

template <int N>
Mat<N> mat_mul(const PrimeContext &F, const Mat<N> &A, const Mat<N> &B)
{
  Mat<N> C;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      long long s = 0;
      for (int k = 0; k < N; ++k)
        s += 1LL * A(i, k) * B(k, j);
      C(i, j) = static_cast<Fp>(s % F.p());
    }
  return C;
}

template <int N>
Mat<N> transpose(const Mat<N> &A)
{
  Mat<N> T;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      T(j, i) = A(i, j);
  return T;
}

template <int N>
Mat<N> scale(const PrimeContext &F, Fp s, const Mat<N> &A)
{
  Mat<N> B;
  for (int k = 0; k < N * N; ++k)
    B.a[k] = F.mul(s, A.a[k]);
  return B;
}

template <int N>
Mat<N> mat_add(const PrimeContext &F, const Mat<N> &A, const Mat<N> &B)
{
  Mat<N> C;
  for (int k = 0; k < N * N; ++k)
    C.a[k] = F.add(A.a[k], B.a[k]);
  return C;
}

inline Fp det(const PrimeContext &F, const Mat2 &A)
{
  return F.reduce(1LL * A(0, 0) * A(1, 1) - 1LL * A(0, 1) * A(1, 0));
}

inline Fp det(const PrimeContext &F, const Mat3 &A)
{
  long long d = 1LL * A(0, 0) * (1LL * A(1, 1) * A(2, 2) - 1LL * A(1, 2) * A(2, 1)) -
                1LL * A(0, 1) * (1LL * A(1, 0) * A(2, 2) - 1LL * A(1, 2) * A(2, 0)) +
                1LL * A(0, 2) * (1LL * A(1, 0) * A(2, 1) - 1LL * A(1, 1) * A(2, 0));
  return F.reduce(d);
}

template <int N>
int rank(const PrimeContext &F, Mat<N> A)
{
  int r = 0;
  for (int c = 0; c < N && r < N; ++c) {
    int piv = -1;
    for (int i = r; i < N; ++i)
      if (A(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0)
      continue;
    for (int j = 0; j < N; ++j)
      std::swap(A(r, j), A(piv, j));
    Fp iv = F.inv(A(r, c));
    for (int i = r + 1; i < N; ++i) {
      if (!A(i, c))
        continue;
      Fp f = F.mul(A(i, c), iv);
      for (int j = c; j < N; ++j)
        A(i, j) = F.sub(A(i, j), F.mul(f, A(r, j)));
    }
    ++r;
  }
  return r;
}

// Transposed cofactor matrix: A * adj(A) = det(A) * I.
inline Mat3 adjugate3(const PrimeContext &F, const Mat3 &A)
{
  Mat3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      R(i, j) = F.reduce(1LL * A(r0, c0) * A(r1, c1) - 1LL * A(r0, c1) * A(r1, c0));
    }
  return R;
}

inline Mat2 adjugate2(const PrimeContext &F, const Mat2 &A)
{
  Mat2 R;
  R(0, 0) = A(1, 1);
  R(1, 1) = A(0, 0);
  R(0, 1) = F.neg(A(0, 1));
  R(1, 0) = F.neg(A(1, 0));
  return R;
}

template <int N>
Mat<N> inverse(const PrimeContext &F, const Mat<N> &A)
{
  Fp d = det(F, A);
  if (!d)
    throw DomainError("singular matrix has no inverse");
  if constexpr (N == 2)
    return scale(F, F.inv(d), adjugate2(F, A));
  else
    return scale(F, F.inv(d), adjugate3(F, A));
}

// Row-major base-p code; lexicographic order on entries equals numeric order.
template <int N>
std::uint64_t encode(int p, const Mat<N> &A)
{
  std::uint64_t c = 0;
  for (Fp v : A.a)
    c = c * p + static_cast<std::uint64_t>(v);
  return c;
}

template <int N>
Mat<N> decode(int p, std::uint64_t c)
{
  Mat<N> A;
  for (int k = N * N - 1; k >= 0; --k) {
    A.a[k] = static_cast<Fp>(c % p);
    c /= p;
  }
  return A;
}

inline std::uint64_t space_size(int p, int entries)
{
  std::uint64_t s = 1;
  for (int k = 0; k < entries; ++k)
    s *= p;
  return s;
}

// "a,b,c;d,e,f;g,h,i" (rows separated by ';'). Entries may be negative.
template <int N>
Mat<N> parse_matrix(const PrimeContext &F, std::string_view text)
{
  Mat<N> A;
  int row = 0, col = 0;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
      ++i;
  };
  while (true) {
    skip_ws();
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+'))
      negative = text[i++] == '-';
    std::size_t start = i;
    long long v = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      v = v * 10 + (text[i] - '0');
      if (v > 1000000000LL)
        throw ParseError("matrix entry too large");
      ++i;
    }
    if (i == start)
      throw ParseError("expected integer at offset " + std::to_string(i) + " in \"" +
                       std::string(text) + "\"");
    if (row >= N || col >= N)
      throw ParseError("matrix literal has more than " + std::to_string(N) + " entries per row/column");
    A(row, col) = F.reduce(negative ? -v : v);
    skip_ws();
    if (i == text.size())
      break;
    if (text[i] == ',') {
      ++col;
    } else if (text[i] == ';') {
      if (col != N - 1)
        throw ParseError("row " + std::to_string(row + 1) + " has " + std::to_string(col + 1) + " entries");
      ++row;
      col = 0;
    } else {
      throw ParseError(std::string("unexpected character '") + text[i] + "'");
    }
    ++i;
  }
  if (row != N - 1 || col != N - 1)
    throw ParseError("matrix literal must have " + std::to_string(N) + " rows of " + std::to_string(N) + " entries");
  return A;
}

template <int N>
std::string format_matrix(const Mat<N> &A)
{
  std::ostringstream os;
  for (int i = 0; i < N; ++i) {
    if (i)
      os << ';';
    for (int j = 0; j < N; ++j) {
      if (j)
        os << ',';
      os << A(i, j);
    }
  }
  return os.str();
}

} // namespace pgcm
