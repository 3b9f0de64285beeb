#pragma once

// Canonical forms of 2x2 matrices under congruence (P^t A P) and
// sub-congruence (lambda P^t A P).

#include <map>
#include <string>
#include <vector>

#include "matrices.hpp"
#include "report.hpp"

namespace pgcm {

enum class PairRelation { Congruence, Subcongruence };

enum class PairLemma { L21, L22, L23 };

struct PairLabel {
  PairLemma lemma = PairLemma::L23;
  int type = 3;
  // nu1 for (L21,2), nu2 for (L21,3), r for (L21,4), nu for (L23,2); 0 otherwise
  Fp param = 0;

  friend bool operator==(const PairLabel &, const PairLabel &) = default;
  friend auto operator<=>(const PairLabel &, const PairLabel &) = default;
};

inline std::string to_string(const PairLabel &l)
{
  std::string s = l.lemma == PairLemma::L21 ? "L21" : l.lemma == PairLemma::L22 ? "L22" : "L23";
  s += "(" + std::to_string(l.type) + ")";
  if (l.param)
    s += "[" + std::to_string(l.param) + "]";
  return s;
}

struct PairResult {
  PairLabel label;
  Mat2 representative;
  Mat2 P;
  Fp lambda = 1;
};

inline Mat2 pair_representative(const PrimeContext &F, const PairLabel &l)
{
  Mat2 M;
  Fp m1 = F.neg(1);
  switch (l.lemma) {
  case PairLemma::L21:
    switch (l.type) {
    case 1: M.a = {0, 1, m1, 0}; break;
    case 2: M.a = {l.param, 1, m1, 0}; break;
    case 3: M.a = {1, 0, 0, l.param}; break;
    case 4: M.a = {1, 1, m1, l.param}; break;
    }
    break;
  case PairLemma::L22:
    switch (l.type) {
    case 1: M.a = {1, 0, 0, 1}; break;
    case 2: M.a = {0, 1, 1, 0}; break;
    case 3: M.a = {1, 0, 1, 1}; break;
    }
    break;
  case PairLemma::L23:
    switch (l.type) {
    case 1: M.a = {0, 1, 0, 0}; break;
    case 2: M.a = {0, 0, 0, l.param}; break;
    case 3: break;
    }
    break;
  }
  return M;
}

// Every transversal member, in lemma order.
inline std::vector<PairLabel> pair_transversal(const PrimeContext &F, PairRelation rel)
{
  std::vector<PairLabel> out;
  bool sub = rel == PairRelation::Subcongruence;
  if (F.odd()) {
    out.push_back({PairLemma::L21, 1, 0});
    out.push_back({PairLemma::L21, 2, 1});
    if (!sub)
      out.push_back({PairLemma::L21, 2, F.eta()});
    out.push_back({PairLemma::L21, 3, 1});
    out.push_back({PairLemma::L21, 3, F.eta()});
    for (int r = 1; r <= F.p() - 2; ++r)
      out.push_back({PairLemma::L21, 4, r});
  } else {
    for (int t = 1; t <= 3; ++t)
      out.push_back({PairLemma::L22, t, 0});
  }
  out.push_back({PairLemma::L23, 1, 0});
  out.push_back({PairLemma::L23, 2, 1});
  if (F.odd() && !sub)
    out.push_back({PairLemma::L23, 2, F.eta()});
  out.push_back({PairLemma::L23, 3, 0});
  return out;
}

inline Mat2 pair_apply(const PrimeContext &F, const Mat2 &A, const Mat2 &P, Fp lambda)
{
  return scale(F, lambda, mat_mul(F, mat_mul(F, transpose(P), A), P));
}

namespace detail {

// Solve a*x^2 + b*y^2 = c (a, b, c nonzero); such a form is universal over F_p, p odd.
inline std::pair<Fp, Fp> represent(const PrimeContext &F, Fp a, Fp b, Fp c)
{
  for (Fp y = 0; y < F.p(); ++y) {
    Fp rest = F.div(F.sub(c, F.mul(b, F.mul(y, y))), a);
    if (auto x = F.sqrt(rest))
      return {*x, y};
  }
  throw Error("binary form failed to represent a value");
}

// Q with Q^t S Q diagonal, S symmetric nonzero (odd p). Returns Q.
inline Mat2 diagonalize_sym2(const PrimeContext &F, const Mat2 &S)
{
  Mat2 Q = Mat2::identity();
  Mat2 T = S;
  if (!T(0, 0)) {
    if (T(1, 1)) {
      Q.a = {0, 1, 1, 0};
    } else {
      Q.a = {1, 0, 1, 1}; // first basis vector (1,1) has value 2*s12
    }
    T = mat_mul(F, mat_mul(F, transpose(Q), S), Q);
  }
  if (T(0, 0) && T(0, 1)) {
    Mat2 E = Mat2::identity();
    E(0, 1) = F.neg(F.div(T(0, 1), T(0, 0)));
    Q = mat_mul(F, Q, E);
  }
  return Q;
}

// P with P^t S P = diag(1, d), S symmetric invertible (odd p). Second column
// may be rescaled by the caller.
inline Mat2 unit_first_sym2(const PrimeContext &F, const Mat2 &S)
{
  Mat2 Q = diagonalize_sym2(F, S);
  Mat2 D = mat_mul(F, mat_mul(F, transpose(Q), S), Q);
  Fp a = D(0, 0), b = D(1, 1);
  auto [x, y] = represent(F, a, b, 1);
  Mat2 V;
  V.a = {x, F.neg(F.mul(b, y)), y, F.mul(a, x)};
  return mat_mul(F, Q, V);
}

inline Mat2 col_scale(const PrimeContext &F, Mat2 P, int col, Fp s)
{
  P(0, col) = F.mul(P(0, col), s);
  P(1, col) = F.mul(P(1, col), s);
  return P;
}

} // namespace detail

inline PairResult canonical_pair(const PrimeContext &F, const Mat2 &A, PairRelation rel)
{
  bool sub = rel == PairRelation::Subcongruence && F.odd();
  PairResult res;
  res.P = Mat2::identity();
  res.lambda = 1;

  auto finish = [&](PairLabel l) {
    res.label = l;
    res.representative = pair_representative(F, l);
    if (pair_apply(F, A, res.P, res.lambda) != res.representative)
      throw Error("pair_forms: witness check failed for " + format_matrix(A));
    return res;
  };

  if (A.is_zero())
    return finish({PairLemma::L23, 3, 0});

  if (det(F, A) == 0) {
    // singular reduction: swap, shear, then one of two scalings
    Mat2 B = A;
    if (B(0, 1) == 0 && B(1, 1) == 0) {
      Mat2 P1;
      P1.a = {0, 1, 1, 0};
      res.P = P1;
      B = pair_apply(F, A, P1, 1);
    }
    Fp k = B(0, 1) ? F.div(B(0, 0), B(0, 1)) : F.div(B(1, 0), B(1, 1));
    Mat2 P2;
    P2.a = {1, 0, F.neg(k), 1};
    res.P = mat_mul(F, res.P, P2);
    B = pair_apply(F, A, res.P, 1);
    Fp b = B(0, 1), a22 = B(1, 1);
    if (b) {
      Mat2 P3;
      P3.a = {F.inv(b), F.neg(F.div(a22, b)), 0, 1};
      res.P = mat_mul(F, res.P, P3);
      return finish({PairLemma::L23, 1, 0});
    }
    if (!F.odd())
      return finish({PairLemma::L23, 2, 1});
    if (sub) {
      res.lambda = F.inv(a22);
      return finish({PairLemma::L23, 2, 1});
    }
    Fp nu = F.square_class(a22);
    Fp x = *F.sqrt(F.div(nu, a22));
    Mat2 P4;
    P4.a = {1, 0, 0, x};
    res.P = mat_mul(F, res.P, P4);
    return finish({PairLemma::L23, 2, nu});
  }

  if (!F.odd()) {
    // p = 2: GL_2(F_2) has six elements; search them in a fixed order.
    static const std::array<Mat2, 6> gl2 = [] {
      std::array<Mat2, 6> g{};
      int n = 0;
      for (int c = 0; c < 16; ++c) {
        Mat2 M;
        M.a = {c >> 3 & 1, c >> 2 & 1, c >> 1 & 1, c & 1};
        if ((M(0, 0) * M(1, 1) + M(0, 1) * M(1, 0)) % 2)
          g[n++] = M;
      }
      return g;
    }();
    for (int t = 1; t <= 3; ++t) {
      PairLabel l{PairLemma::L22, t, 0};
      Mat2 R = pair_representative(F, l);
      for (const Mat2 &P : gl2)
        if (pair_apply(F, A, P, 1) == R) {
          res.P = P;
          return finish(l);
        }
    }
    throw Error("pair_forms: p=2 search exhausted");
  }

  // Odd p, invertible: split A = S + K into symmetric and skew parts.
  Fp half = F.inv(2);
  Mat2 S;
  S(0, 0) = A(0, 0);
  S(1, 1) = A(1, 1);
  S(0, 1) = S(1, 0) = F.mul(half, F.add(A(0, 1), A(1, 0)));
  Fp k = F.mul(half, F.sub(A(0, 1), A(1, 0)));

  if (k == 0) {
    Mat2 P = detail::unit_first_sym2(F, S);
    Fp d = mat_mul(F, mat_mul(F, transpose(P), S), P)(1, 1);
    Fp nu2 = F.square_class(d);
    res.P = detail::col_scale(F, P, 1, *F.sqrt(F.div(nu2, d)));
    return finish({PairLemma::L21, 3, nu2});
  }

  // With P^t K P = k det(P) J, the skew part is normalized by det(P) = 1/(lambda k).
  if (S.is_zero()) {
    res.P = Mat2::diag({1, F.inv(k)});
    return finish({PairLemma::L21, 1, 0});
  }

  if (det(F, S) != 0) {
    Mat2 P = detail::unit_first_sym2(F, S);
    res.P = detail::col_scale(F, P, 1, F.inv(F.mul(k, det(F, P))));
    Fp r = mat_mul(F, mat_mul(F, transpose(res.P), S), res.P)(1, 1);
    return finish({PairLemma::L21, 4, r});
  }

  // S = sigma v v^t of rank one.
  Fp sigma;
  Fp v0, v1;
  if (S(0, 0)) {
    sigma = S(0, 0);
    v0 = 1;
    v1 = F.div(S(0, 1), S(0, 0));
  } else {
    sigma = S(1, 1);
    v0 = 0;
    v1 = 1;
  }
  // first column p1 with v.p1 = gamma, second column in ker(v)
  Fp p10 = v0 ? F.inv(v0) : 0, p11 = v0 ? 0 : F.inv(v1);
  Fp nu1 = 1, gamma = 1;
  if (sub) {
    res.lambda = F.inv(sigma);
  } else {
    nu1 = F.square_class(sigma);
    gamma = *F.sqrt(F.div(nu1, sigma));
  }
  Mat2 P;
  P.a = {F.mul(gamma, p10), F.neg(v1), F.mul(gamma, p11), v0};
  Fp want = F.inv(F.mul(res.lambda, k));
  res.P = detail::col_scale(F, P, 1, F.div(want, det(F, P)));
  return finish({PairLemma::L21, 2, nu1});
}

enum class PairStratum { All, Invertible, Singular };

// Exhaustive orbit partition of all 2x2 matrices in the stratum.
inline VerificationReport verify_pair_transversal(const PrimeContext &F, PairRelation rel,
                                                  PairStratum stratum = PairStratum::All,
                                                  int max_p = 13)
{
  Stopwatch sw;
  const int p = F.p();
  if (p > max_p)
    throw InfeasibleError("verify_pair_transversal: p=" + std::to_string(p) + " above cap " +
                          std::to_string(max_p));
  bool sub = rel == PairRelation::Subcongruence && F.odd();

  auto in_stratum = [&](const Mat2 &A) {
    bool inv = det(F, A) != 0;
    return stratum == PairStratum::All || (stratum == PairStratum::Invertible) == inv;
  };

  std::vector<Mat2> group;
  for (std::uint64_t c = 0; c < space_size(p, 4); ++c) {
    Mat2 P = decode<2>(p, c);
    if (det(F, P))
      group.push_back(P);
  }
  std::vector<Fp> lambdas{1};
  if (sub)
    for (Fp l = 2; l < p; ++l)
      lambdas.push_back(l);

  std::map<std::uint64_t, PairLabel> rep_code;
  std::int64_t expected = 0;
  for (const PairLabel &l : pair_transversal(F, rel)) {
    Mat2 R = pair_representative(F, l);
    if (!in_stratum(R))
      continue;
    rep_code[encode(p, R)] = l;
    ++expected;
  }

  VerificationReport rep;
  rep.subject = std::string("pair ") + (rel == PairRelation::Subcongruence ? "sub-congruence" : "congruence") +
                " p=" + std::to_string(p);
  rep.expected_count = expected;
  std::vector<int> orbit_of(space_size(p, 4), -1);
  for (std::uint64_t c = 0; c < orbit_of.size(); ++c) {
    Mat2 A = decode<2>(p, c);
    if (!in_stratum(A)) {
      continue;
    }
    rep.space_size++;
    if (orbit_of[c] >= 0)
      continue;
    int id = static_cast<int>(rep.orbit_count++);
    std::uint64_t size = 0;
    std::vector<PairLabel> members;
    for (const Mat2 &P : group)
      for (Fp l : lambdas) {
        std::uint64_t d = encode(p, pair_apply(F, A, P, l));
        if (orbit_of[d] < 0) {
          orbit_of[d] = id;
          ++size;
          if (auto it = rep_code.find(d); it != rep_code.end())
            members.push_back(it->second);
        }
      }
    rep.orbit_sizes.push_back(size);
    if (members.size() != 1)
      rep.violation(format_matrix(A), "orbit contains " + std::to_string(members.size()) +
                                          " transversal members");
  }

  for (std::uint64_t c = 0; c < orbit_of.size(); ++c) {
    if (orbit_of[c] < 0)
      continue;
    Mat2 A = decode<2>(p, c);
    PairResult r;
    try {
      r = canonical_pair(F, A, rel);
    } catch (const Error &e) {
      rep.violation(format_matrix(A), e.what());
      continue;
    }
    std::uint64_t rc = encode(p, r.representative);
    if (!rep_code.count(rc) || orbit_of[rc] != orbit_of[c] || rep_code[rc] != r.label)
      rep.violation(format_matrix(A), "canonical_pair returned " + to_string(r.label) +
                                          " outside the orbit");
  }
  if (rep.orbit_count != expected)
    rep.violation("-", "orbit count " + std::to_string(rep.orbit_count) + " != transversal size " +
                           std::to_string(expected));
  rep.elapsed = sw.seconds();
  return rep;
}

} // namespace pgcm
