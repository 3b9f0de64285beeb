#pragma once

// Canonical forms of characteristic matrices: reduction pipelines per case tag,
// orbit lookup tables for the p = 2 special cases, and exhaustive verification.

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "families.hpp"
#include "group_model.hpp"
#include "iso_action.hpp"
#include "pair_forms.hpp"
#include "report.hpp"

namespace pgcm {

struct Classification {
  FamilyLabel label;
  XPair witness;       // act(witness, w) == representative
  Mat3 representative;
};

namespace detail {

inline XPair inverse_pair(const PrimeContext &F, const XPair &t)
{
  return {inverse(F, t.X), inverse(F, t.X2)};
}

// Transform with the given parameters set on top of the identity.
inline XPair make_pair(const ActionShape &s, std::initializer_list<std::array<int, 3>> entries)
{
  std::array<Fp, 9> x{1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (const auto &e : entries)
    x[e[0] * 3 + e[1]] = e[2];
  return pair_from_params(s, x);
}

struct Reducer {
  const PrimeContext &F;
  ActionShape s;
  Mat3 w;
  XPair T;

  void apply(const XPair &g)
  {
    w = act(F, s, g, w);
    T = compose(F, g, T);
  }
  Fp operator()(int i, int j) const { return w(i, j); }
};

// ---- torus finisher ----

inline long long mod_n(long long a, long long n)
{
  a %= n;
  return a < 0 ? a + n : a;
}

inline long long inv_mod(long long a, long long m)
{
  long long g = m, x = 0, x1 = 1, b = mod_n(a, m);
  while (b) {
    long long q = g / b;
    std::tie(g, b) = std::make_pair(b, g - q * b);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return mod_n(x, m);
}

// Solves A e = b (mod n) for e in (Z/n)^3; A has small integer entries.
inline std::optional<std::array<long long, 3>> solve_mod(std::vector<std::array<long long, 3>> A,
                                                         std::vector<long long> b, long long n)
{
  const int rows = static_cast<int>(A.size());
  std::array<int, 3> pivcol{};
  int r = 0;
  for (int c = 0; c < 3 && r < rows; ++c) {
    while (true) {
      int best = -1;
      for (int i = r; i < rows; ++i)
        if (A[i][c] && (best < 0 || std::llabs(A[i][c]) < std::llabs(A[best][c])))
          best = i;
      if (best < 0)
        break;
      std::swap(A[r], A[best]);
      std::swap(b[r], b[best]);
      bool clean = true;
      for (int i = r + 1; i < rows; ++i) {
        if (!A[i][c])
          continue;
        long long q = A[i][c] / A[r][c];
        for (int k = 0; k < 3; ++k)
          A[i][k] -= q * A[r][k];
        b[i] = mod_n(b[i] - q * b[r], n);
        if (A[i][c])
          clean = false;
      }
      if (clean) {
        pivcol[r++] = c;
        break;
      }
    }
  }
  for (int i = r; i < rows; ++i)
    if (mod_n(b[i], n))
      return std::nullopt;
  std::array<long long, 3> e{};
  std::function<bool(int)> back = [&](int row) {
    if (row < 0)
      return true;
    int c = pivcol[row];
    long long rhs = b[row];
    for (int k = c + 1; k < 3; ++k)
      rhs -= A[row][k] * e[k];
    rhs = mod_n(rhs, n);
    long long a = mod_n(A[row][c], n);
    long long g = std::gcd(a, n);
    if (rhs % g)
      return false;
    long long m = n / g;
    long long base = m == 1 ? 0 : mod_n((rhs / g) % m * inv_mod(a / g, m), m);
    for (long long t = 0; t < g; ++t) {
      e[c] = base + t * m;
      if (back(row - 1))
        return true;
    }
    e[c] = 0;
    return false;
  };
  if (!back(r - 1))
    return std::nullopt;
  return e;
}

inline std::array<bool, 9> support(const Mat3 &w)
{
  std::array<bool, 9> s{};
  for (int k = 0; k < 9; ++k)
    s[k] = w.a[k] != 0;
  return s;
}

// Diagonal d with act(diag(d), w) == R, if one exists (same support assumed).
inline std::optional<XPair> torus_solve(const PrimeContext &F, const ActionShape &s, const Mat3 &w, const Mat3 &R)
{
  if (!F.odd())
    return w == R ? std::optional<XPair>(XPair{}) : std::nullopt;
  std::vector<std::array<long long, 3>> A;
  std::vector<long long> b;
  const long long n = F.p() - 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (!w(i, j))
        continue;
      // d_i d_j / (d1 d2 d3)
      std::array<long long, 3> row{-1, -1, -1};
      row[i] += 1;
      row[j] += 1;
      A.push_back(row);
      b.push_back(mod_n(F.log(R(i, j)) - F.log(w(i, j)), n));
    }
  auto e = solve_mod(A, b, n);
  if (!e)
    return std::nullopt;
  XPair t = make_pair(s, {{0, 0, F.exp((*e)[0])}, {1, 1, F.exp((*e)[1])}, {2, 2, F.exp((*e)[2])}});
  if (act(F, s, t, w) != R)
    throw Error("torus solve produced a wrong diagonal");
  return t;
}

inline std::array<bool, 9> pattern_support(const FamilyDef &d)
{
  std::array<bool, 9> s{};
  auto toks = tokens(d.pattern);
  for (int k = 0; k < 9; ++k)
    s[k] = toks[k] != "0";
  return s;
}

// Finds the family of the reduced form w by support and a diagonal transform.
inline Classification finish(const PrimeContext &F, CaseTag tag, Reducer &R)
{
  auto sup = support(R.w);
  for (const FamilyDef *d : families_for(F, tag)) {
    if (pattern_support(*d) != sup)
      continue;
    for (const FamilyLabel &l : instantiate(F, *d)) {
      Mat3 rep = family_matrix(F, l);
      if (auto t = torus_solve(F, R.s, R.w, rep)) {
        R.apply(*t);
        return {l, R.T, rep};
      }
    }
  }
  throw Error(std::string("classifier: no ") + to_string(tag) + " family matches reduced form " +
              format_matrix(R.w));
}

inline Mat2 lower_block(const Mat3 &w)
{
  Mat2 W;
  W.a = {w(1, 1), w(1, 2), w(2, 1), w(2, 2)};
  return W;
}

// ---- STRICT: one nonzero per row and column ----

inline Classification classify_strict(const PrimeContext &F, const Mat3 &w)
{
  ActionShape s = shape_for(CaseTag::Strict);
  Reducer R{F, s, w, {}};
  for (int i = 0; i < 3; ++i) {
    int c = -1;
    for (int j = 2; j >= 0; --j)
      if (R(i, j)) {
        c = j;
        break;
      }
    if (c < 0)
      continue;
    // columns left of c: column j += a * column c (parameter x_jc of X)
    for (int j = 0; j < c; ++j)
      if (R(i, j))
        R.apply(make_pair(s, {{j, c, F.neg(F.div(R(i, j), R(i, c)))}}));
    // rows below i: row r += a * row i (parameter x_ri of X2)
    for (int r = i + 1; r < 3; ++r)
      if (R(r, c))
        R.apply(make_pair(s, {{r, i, F.neg(F.div(R(r, c), R(i, c)))}}));
  }
  return finish(F, CaseTag::Strict, R);
}

// ---- TOP: w = [[a, b^t], [c, W]] ----

inline Classification classify_top(const PrimeContext &F, const Mat3 &w)
{
  ActionShape s = shape_for(CaseTag::Top);
  Reducer R{F, s, w, {}};
  auto Tu = [&](Fp u1, Fp u2) { R.apply(make_pair(s, {{1, 0, u1}, {2, 0, u2}})); };
  auto Tv = [&](Fp v1, Fp v2) { R.apply(make_pair(s, {{0, 1, v1}, {0, 2, v2}})); };
  auto Tblk = [&](Fp x11, const Mat2 &Y) {
    R.apply(make_pair(s, {{0, 0, x11}, {1, 1, Y(0, 0)}, {1, 2, Y(0, 1)}, {2, 1, Y(1, 0)}, {2, 2, Y(1, 1)}}));
  };
  // congruence or sub-congruence witness (P, lambda) as a block transform
  auto Tpair = [&](const PairResult &pr, bool sub) {
    Mat2 Y = transpose(pr.P);
    if (sub) {
      Tblk(F.inv(F.mul(pr.lambda, det(F, Y))), Y);
    } else {
      Y = scale(F, F.inv(det(F, Y)), Y);
      Tblk(det(F, Y), Y);
    }
  };

  Fp a = R(0, 0);
  bool b_zero = !R(0, 1) && !R(0, 2);
  if (a && b_zero) {
    // Type (a)
    Tu(F.neg(F.div(R(1, 0), a)), F.neg(F.div(R(2, 0), a)));
    Tblk(F.inv(a), Mat2::identity());
    Tpair(canonical_pair(F, lower_block(R.w), PairRelation::Congruence), false);
  } else if (b_zero) {
    // Type (b)
    Mat2 W = lower_block(R.w);
    int rk = rank(F, W);
    if (rk == 2) {
      Mat2 Wi = inverse(F, W);
      Fp c2 = R(1, 0), c3 = R(2, 0);
      Tv(F.neg(F.add(F.mul(Wi(0, 0), c2), F.mul(Wi(0, 1), c3))),
         F.neg(F.add(F.mul(Wi(1, 0), c2), F.mul(Wi(1, 1), c3))));
      Tpair(canonical_pair(F, lower_block(R.w), PairRelation::Subcongruence), true);
    } else if (rk == 1) {
      PairResult pr = canonical_pair(F, W, PairRelation::Subcongruence);
      Tpair(pr, true);
      if (pr.label.type == 1) {
        Tv(0, F.neg(R(1, 0)));
        if (Fp c3 = R(2, 0))
          Tblk(1, Mat2::diag({c3, 1}));
      } else {
        Tv(0, F.neg(R(2, 0)));
        if (Fp c2 = R(1, 0))
          Tblk(c2, Mat2::diag({1, c2}));
      }
    } else if (R(1, 0) || R(2, 0)) {
      Fp c2 = R(1, 0), c3 = R(2, 0);
      Mat2 Y;
      Y.a = {c2 ? Fp(1) : Fp(0), c2 ? Fp(0) : Fp(1), F.neg(c3), c2};
      Tblk(1, Y);
    }
  } else {
    // Type (c): send b to e2, then clear a
    Fp b1 = R(0, 1), b2 = R(0, 2);
    Mat2 Y;
    Y.a = {b2, F.neg(b1), b2 ? Fp(0) : Fp(1), b2 ? Fp(1) : Fp(0)};
    Tblk(1, Y);
    Tv(0, F.neg(R(0, 0)));
    if (Fp w22 = R(1, 1)) {
      Tv(F.neg(F.div(R(1, 0), w22)), 0);
      Mat2 L = Mat2::identity();
      L(1, 0) = F.neg(F.div(R(2, 1), R(1, 1)));
      Tblk(1, L);
    } else if (Fp c2 = R(1, 0)) {
      Mat2 L = Mat2::identity();
      L(1, 0) = F.neg(F.div(R(2, 0), c2));
      Tblk(1, L);
    } else if (Fp w32 = R(2, 1)) {
      Tv(F.neg(F.div(R(2, 0), w32)), 0);
    }
    Tu(F.neg(R(1, 2)), F.neg(R(2, 2)));
  }
  return finish(F, CaseTag::Top, R);
}

// ---- EQUAL, odd p: w -> det(X)^-1 X w X^t ----

inline Classification classify_equal_odd(const PrimeContext &F, const Mat3 &w)
{
  ActionShape s = shape_for(CaseTag::Equal);
  Reducer R{F, s, w, {}};
  auto TX = [&](const Mat3 &X) { R.apply(pair_from_params(s, X.a)); };
  auto Tblk = [&](Fp x11, const Mat2 &Y) {
    Mat3 X;
    X(0, 0) = x11;
    X(1, 1) = Y(0, 0);
    X(1, 2) = Y(0, 1);
    X(2, 1) = Y(1, 0);
    X(2, 2) = Y(1, 1);
    TX(X);
  };
  auto Tcong = [&](const PairResult &pr) {
    Mat2 Y = transpose(pr.P);
    Y = scale(F, F.inv(det(F, Y)), Y);
    Tblk(det(F, Y), Y);
  };
  const Fp half = F.inv(2);
  Fp x = F.mul(half, F.sub(w(0, 1), w(1, 0)));
  Fp y = F.mul(half, F.sub(w(0, 2), w(2, 0)));
  Fp z = F.mul(half, F.sub(w(1, 2), w(2, 1)));

  if (!x && !y && !z) {
    // symmetric: diagonalize by congruence
    for (int i = 0; i < 3; ++i) {
      int j = i;
      while (j < 3 && !R(j, j))
        ++j;
      if (j == 3) {
        int jj = -1, kk = -1;
        for (int u = i; u < 3 && jj < 0; ++u)
          for (int v = u + 1; v < 3; ++v)
            if (R(u, v)) {
              jj = u;
              kk = v;
              break;
            }
        if (jj < 0)
          break;
        Mat3 X = Mat3::identity();
        X(jj, kk) = 1;
        TX(X);
        j = jj;
      }
      if (j != i) {
        Mat3 X;
        for (int k = 0; k < 3; ++k)
          X(k, k == i ? j : k == j ? i : k) = 1;
        TX(X);
      }
      for (int r = i + 1; r < 3; ++r)
        if (R(r, i)) {
          Mat3 X = Mat3::identity();
          X(r, i) = F.neg(F.div(R(r, i), R(i, i)));
          TX(X);
        }
    }
    int rk = rank(F, R.w);
    if (rk == 1) {
      TX(Mat3::diag({F.inv(R(0, 0)), 1, 1}));
    } else if (rk == 2) {
      TX(Mat3::diag({1, 1, R(0, 0)}));
    } else if (rk == 3) {
      TX(Mat3::diag({F.inv(R(0, 0)), 1, 1}));
      PairResult pr = canonical_pair(F, lower_block(R.w), PairRelation::Congruence);
      Tcong(pr);
      if (pr.label.param != 1) {
        // diag(1,1,eta) -> I via zeta non-square with zeta - 1 a square
        Fp zeta = 0;
        for (Fp c = 2; c < F.p(); ++c)
          if (!F.is_square(c) && F.is_square(c - 1)) {
            zeta = c;
            break;
          }
        if (!zeta)
          throw Error("no zeta with zeta non-square and zeta-1 square");
        Fp gamma = *F.sqrt(zeta - 1);
        Fp zz = *F.sqrt(F.div(F.eta(), zeta));
        Mat3 X;
        X.a = {0, 0, F.neg(1), zz, F.neg(F.mul(zz, gamma)), 0, F.neg(F.mul(zz, gamma)), F.neg(zz), 0};
        TX(X);
      }
    }
    return finish(F, CaseTag::Equal, R);
  }

  // skew part -> [[0,0,0],[0,0,1],[0,-1,0]]
  {
    Mat3 X;
    if (z)
      X.a = {z, F.neg(y), x, 0, F.inv(z), 0, 0, 0, 1};
    else if (y)
      X.a = {z, F.neg(y), x, F.inv(y), 0, 0, 0, 0, 1};
    else
      X.a = {0, 0, x, F.inv(x), 0, 0, 0, 1, 0};
    TX(X);
    if (R(0, 1) != R(1, 0) || R(0, 2) != R(2, 0) || F.sub(R(1, 2), R(2, 1)) != 2)
      throw Error("skew normalization failed for " + format_matrix(w));
  }
  Fp i = R(0, 0), j = R(0, 1), k = R(0, 2);
  if (i) {
    Mat3 X = Mat3::identity();
    X(1, 0) = F.neg(F.div(j, i));
    X(2, 0) = F.neg(F.div(k, i));
    TX(X);
    TX(Mat3::diag({F.inv(i), 1, 1}));
    Tcong(canonical_pair(F, lower_block(R.w), PairRelation::Congruence));
  } else if (j || k) {
    Mat2 Y;
    Y.a = {k, F.neg(j), k ? Fp(0) : Fp(1), k ? Fp(1) : Fp(0)};
    Tblk(1, Y);
    Fp t = F.mul(half, F.add(R(1, 2), R(2, 1)));
    Mat3 X = Mat3::identity();
    X(1, 0) = F.neg(t);
    X(2, 0) = F.neg(F.mul(half, R(2, 2)));
    TX(X);
    if (Fp sv = R(1, 1)) {
      TX(Mat3::diag({1, 1, sv}));
    } else {
      Mat3 X2;
      X2.a = {F.neg(1), F.neg(1), 0, F.neg(1), 1, 0, 0, 0, 1};
      TX(X2);
    }
  } else {
    PairResult pr = canonical_pair(F, lower_block(R.w), PairRelation::Subcongruence);
    Mat2 Y = transpose(pr.P);
    Tblk(F.inv(F.mul(pr.lambda, det(F, Y))), Y);
  }
  return finish(F, CaseTag::Equal, R);
}

// ---- BOTTOM via TOP: w' = P w^t P^-1 ----

inline Mat3 cyclic_P()
{
  Mat3 P;
  P.a = {0, 0, 1, 1, 0, 0, 0, 1, 0};
  return P;
}

inline Mat3 to_top(const PrimeContext &F, const Mat3 &w)
{
  Mat3 P = cyclic_P();
  return mat_mul(F, mat_mul(F, P, transpose(w)), transpose(P));
}

// A TOP-shape transform (X', X2') as a BOTTOM-shape transform.
inline XPair from_top(const PrimeContext &F, const XPair &t)
{
  Mat3 P = cyclic_P(), Pi = transpose(P);
  return {mat_mul(F, mat_mul(F, Pi, t.X2), P), mat_mul(F, mat_mul(F, Pi, t.X), P)};
}

inline std::string bottom_name(const std::string &top)
{
  char c = top[0] == 'D' ? 'G' : top[0] == 'E' ? 'H' : 'I';
  return c + top.substr(1);
}

inline Classification classify_bottom(const PrimeContext &F, const Mat3 &w)
{
  Classification top = classify_top(F, to_top(F, w));
  FamilyLabel l = top.label;
  l.family = bottom_name(l.family);
  Mat3 rep = family_matrix(F, l);
  // fix: the transposed BOTTOM representative need not equal the TOP one exactly
  Classification back = classify_top(F, to_top(F, rep));
  if (!(back.label == top.label))
    throw Error("BOTTOM/TOP label correspondence broken at " + l.family);
  XPair t = compose(F, detail::inverse_pair(F, back.witness), top.witness);
  return {l, from_top(F, t), rep};
}

// ---- p = 2 lookup tables by orbit BFS ----

struct OrbitTable {
  std::vector<int> label_of;    // per matrix code, index into labels
  std::vector<XPair> to_rep;    // act(to_rep[c], w_c) == representative
  std::vector<FamilyLabel> labels;
  std::vector<Mat3> reps;
  // (later, earlier): representative `later` lies in the orbit of `earlier`
  std::vector<std::pair<int, int>> merged;
};

inline OrbitTable build_orbit_table(const PrimeContext &F, CaseTag tag, const ExponentType &et)
{
  ActionShape s = shape_for(tag);
  OrbitTable tab;
  tab.labels = enumerate_families(F, et);
  const std::uint64_t n = space_size(F.p(), 9);
  tab.label_of.assign(n, -1);
  tab.to_rep.assign(n, XPair{});
  std::vector<XPair> gens = generators(F, s);
  for (std::size_t li = 0; li < tab.labels.size(); ++li) {
    Mat3 rep = family_matrix(F, tab.labels[li]);
    tab.reps.push_back(rep);
    std::uint64_t c0 = encode(F.p(), rep);
    if (tab.label_of[c0] >= 0) {
      tab.merged.push_back({static_cast<int>(li), tab.label_of[c0]});
      continue;
    }
    // from[c] maps rep to w_c
    std::vector<std::pair<std::uint64_t, XPair>> queue{{c0, XPair{}}};
    tab.label_of[c0] = static_cast<int>(li);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto [c, T] = queue[q];
      tab.to_rep[c] = inverse_pair(F, T);
      Mat3 v = decode<3>(F.p(), c);
      for (const XPair &g : gens) {
        std::uint64_t d = encode(F.p(), act(F, s, g, v));
        if (tab.label_of[d] == static_cast<int>(li))
          continue;
        if (tab.label_of[d] >= 0)
          throw Error("representatives share an orbit");
        tab.label_of[d] = static_cast<int>(li);
        queue.push_back({d, compose(F, g, T)});
      }
    }
  }
  return tab;
}

inline const OrbitTable &p2_table(CaseTag tag)
{
  static std::mutex mu;
  static std::map<CaseTag, std::unique_ptr<OrbitTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto &slot = cache[tag];
  if (!slot) {
    PrimeContext F2(2);
    ExponentType et = tag == CaseTag::Equal ? ExponentType(2, 2, 2) : ExponentType(2, 1, 1);
    slot = std::make_unique<OrbitTable>(build_orbit_table(F2, tag, et));
  }
  return *slot;
}

inline Classification classify_p2_table(const PrimeContext &F, CaseTag tag, const Mat3 &w)
{
  const OrbitTable &tab = p2_table(tag);
  std::uint64_t c = encode(F.p(), w);
  int li = tab.label_of[c];
  if (li < 0)
    throw Error(std::string("no ") + to_string(tag) + " representative reaches " + format_matrix(w));
  return {tab.labels[li], tab.to_rep[c], tab.reps[li]};
}

} // namespace detail

/// Canonical family and witness; the witness is checked on every call.
inline Classification classify_matrix(const PrimeContext &F, const ExponentType &et, const Mat3 &w)
{
  CaseTag tag = case_tag(F, et);
  Classification res;
  switch (tag) {
  case CaseTag::Strict: res = detail::classify_strict(F, w); break;
  case CaseTag::Top: res = detail::classify_top(F, w); break;
  case CaseTag::Bottom: res = detail::classify_bottom(F, w); break;
  case CaseTag::Equal:
    res = F.odd() ? detail::classify_equal_odd(F, w) : detail::classify_p2_table(F, tag, w);
    break;
  case CaseTag::P2Special: res = detail::classify_p2_table(F, tag, w); break;
  case CaseTag::P2Tiny: throw DomainError("type (2,2,2) with p=2 has no matrix action; use classify_tiny");
  }
  ActionShape s = shape_for(tag);
  if (!valid_pair(F, s, res.witness) || act(F, s, res.witness, w) != res.representative)
    throw Error("classifier soundness check failed for " + format_matrix(w) + " -> " + to_string(F, res.label));
  return res;
}

struct ClassifyResult {
  FamilyLabel label;
  IsoTransform witness;
  CharMatrix representative;
};

inline ClassifyResult classify(const CharMatrix &w)
{
  Classification c = classify_matrix(*w.ctx, w.et, w.w);
  return {c.label, IsoTransform::from_pair(w.ctx, w.et, c.witness), {w.ctx, w.et, c.representative}};
}

// ---- P2_TINY ----

namespace detail {

struct TinyTable {
  std::vector<int> label_of; // per matrix code: 0..9
  std::array<Mat3, 10> reps;
};

inline const TinyTable &tiny_table()
{
  static std::once_flag once;
  static TinyTable tab;
  std::call_once(once, [] {
    Ctx ctx = make_context(2);
    ExponentType et(1, 1, 1);
    std::vector<Group> groups;
    for (int k = 0; k < 10; ++k) {
      tab.reps[k] = parse_presentation(*ctx, tiny_presentations()[k], et).w;
      groups.emplace_back(GroupSpec{ctx, et, tab.reps[k]});
    }
    tab.label_of.assign(512, -1);
    for (std::uint64_t c = 0; c < 512; ++c) {
      Group G({ctx, et, decode<3>(2, c)});
      for (int k = 0; k < 10; ++k)
        if (brute_isomorphic(G, groups[k]).isomorphic) {
          tab.label_of[c] = k;
          break;
        }
    }
  });
  return tab;
}

} // namespace detail

inline FamilyLabel classify_tiny(const CharMatrix &w)
{
  if (case_tag(*w.ctx, w.et) != CaseTag::P2Tiny)
    throw DomainError("classify_tiny needs p=2 and type (1,1,1)");
  int k = detail::tiny_table().label_of[encode(2, w.w)];
  if (k < 0)
    throw Error("group is isomorphic to none of S1..S10: " + format_matrix(w.w));
  return {"S" + std::to_string(k + 1), {}, {}, {}, {}, {}};
}

inline CharMatrix representative(Ctx ctx, const ExponentType &et, const FamilyLabel &l)
{
  CaseTag tag = case_tag(*ctx, et);
  validate_label(*ctx, tag, l);
  if (tag == CaseTag::P2Tiny) {
    int k = std::stoi(l.family.substr(1)) - 1;
    return {ctx, et, parse_presentation(*ctx, tiny_presentations()[k], et).w};
  }
  Mat3 M = family_matrix(*ctx, l);
  return {std::move(ctx), et, M};
}

// ---- exhaustive verification ----

namespace detail {

inline VerificationReport verify_tiny(const PrimeContext &F)
{
  Stopwatch sw;
  VerificationReport rep;
  rep.subject = "P2_TINY p=2 m=(1,1,1)";
  rep.space_size = 512;
  rep.expected_count = 10;
  Ctx ctx = make_context(2);
  ExponentType et(1, 1, 1);
  std::vector<Group> groups;
  for (int k = 0; k < 10; ++k)
    groups.emplace_back(GroupSpec{ctx, et, parse_presentation(F, tiny_presentations()[k], et).w});
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b)
      if (brute_isomorphic(groups[a], groups[b]).isomorphic)
        rep.violation("S" + std::to_string(a + 1), "isomorphic to S" + std::to_string(b + 1));
  std::vector<std::uint64_t> sizes(10, 0);
  for (std::uint64_t c = 0; c < 512; ++c) {
    Mat3 w = decode<3>(2, c);
    Group G({ctx, et, w});
    int hits = 0, first = -1;
    for (int k = 0; k < 10; ++k)
      if (brute_isomorphic(G, groups[k]).isomorphic) {
        ++hits;
        if (first < 0)
          first = k;
      }
    if (hits != 1)
      rep.violation(format_matrix(w), "isomorphic to " + std::to_string(hits) + " of S1..S10");
    else
      ++sizes[first];
  }
  for (auto s : sizes)
    if (s)
      ++rep.orbit_count;
  rep.orbit_sizes = sizes;
  if (rep.orbit_count != 10)
    rep.violation("-", "class count " + std::to_string(rep.orbit_count) + " != 10");
  rep.elapsed = sw.seconds();
  return rep;
}

} // namespace detail

/// Orbit partition of all p^9 matrices checked against the family list and the classifier.
inline VerificationReport verify_transversal(Ctx ctx, const ExponentType &et,
                                             std::uint64_t cap = kDefaultSpaceCap, unsigned threads = 1)
{
  const PrimeContext &F = *ctx;
  CaseTag tag = case_tag(F, et);
  if (tag == CaseTag::P2Tiny)
    return detail::verify_tiny(F);
  Stopwatch sw;
  ActionShape s = shape_for(tag);
  OrbitPartition op = orbit_partition(F, s, cap);
  VerificationReport rep;
  rep.subject = std::string(to_string(tag)) + " p=" + std::to_string(F.p()) + " m=(" + et.str() + ")";
  rep.space_size = op.root.size();
  rep.orbit_count = op.orbit_count;
  auto labels = enumerate_families(F, et);
  rep.expected_count = static_cast<std::int64_t>(labels.size());

  std::map<std::uint32_t, std::vector<std::size_t>> reps_in_orbit;
  for (std::size_t i = 0; i < labels.size(); ++i)
    reps_in_orbit[op.key(encode(F.p(), family_matrix(F, labels[i])))].push_back(i);
  for (const auto &[root, idx] : reps_in_orbit)
    if (idx.size() != 1) {
      std::string names;
      for (auto i : idx)
        names += to_string(F, labels[i]) + " ";
      rep.violation(format_matrix(decode<3>(F.p(), root)), "orbit holds several representatives: " + names);
    }
  if (rep.orbit_count != rep.expected_count)
    rep.violation("-", "orbit count " + std::to_string(rep.orbit_count) + " != family count " +
                           std::to_string(rep.expected_count));

  std::map<std::uint32_t, std::uint64_t> sizes;
  for (std::uint64_t c = 0; c < op.root.size(); ++c)
    ++sizes[op.root[c]];
  for (const auto &[r, n] : sizes)
    rep.orbit_sizes.push_back(n);

  // classify every matrix; chunks merge in order, so the report is deterministic
  threads = std::max(1u, threads);
  const std::uint64_t n = op.root.size();
  std::vector<VerificationReport> parts(threads);
  auto work = [&](unsigned t) {
    for (std::uint64_t c = t; c < n; c += threads) {
      Mat3 w = decode<3>(F.p(), c);
      try {
        Classification r = classify_matrix(F, et, w);
        if (op.key(encode(F.p(), r.representative)) != op.key(c))
          parts[t].violation(format_matrix(w), "classified as " + to_string(F, r.label) + " outside its orbit");
      } catch (const Error &e) {
        parts[t].violation(format_matrix(w), e.what());
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(work, t);
    for (auto &th : pool)
      th.join();
  }
  for (const auto &part : parts) {
    for (const auto &v : part.violations)
      rep.violation(v.matrix, v.detail);
    rep.violation_total += part.violation_total - part.violations.size();
  }
  rep.elapsed = sw.seconds();
  return rep;
}

} // namespace pgcm
