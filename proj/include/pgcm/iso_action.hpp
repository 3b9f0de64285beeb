#pragma once

// The isomorphism action on characteristic matrices:
//   w -> det(X)^{-1} X2 w X^t            (odd p, and p = 2 with m2 > 1)
//   w -> X2 w X^t + C(X)                 (p = 2, type (2^m1, 2, 2), m1 > 1)

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "matrices.hpp"
#include "report.hpp"

namespace pgcm {

struct ExponentType {
  int m1 = 1, m2 = 1, m3 = 1;

  ExponentType() = default;
  ExponentType(int a, int b, int c) : m1(a), m2(b), m3(c)
  {
    if (!(a >= b && b >= c && c >= 1))
      throw DomainError("exponent type must satisfy m1 >= m2 >= m3 >= 1, got (" + std::to_string(a) +
                        "," + std::to_string(b) + "," + std::to_string(c) + ")");
    if (a > 30)
      throw DomainError("exponent m1 too large");
  }
  int operator[](int i) const { return i == 0 ? m1 : i == 1 ? m2 : m3; }
  int sum() const { return m1 + m2 + m3; }
  std::string str() const
  {
    return std::to_string(m1) + "," + std::to_string(m2) + "," + std::to_string(m3);
  }
  friend bool operator==(const ExponentType &, const ExponentType &) = default;
};

enum class CaseTag { Strict, Top, Bottom, Equal, P2Special, P2Tiny };

inline const char *to_string(CaseTag t)
{
  switch (t) {
  case CaseTag::Strict: return "STRICT";
  case CaseTag::Top: return "TOP";
  case CaseTag::Bottom: return "BOTTOM";
  case CaseTag::Equal: return "EQUAL";
  case CaseTag::P2Special: return "P2_SPECIAL";
  case CaseTag::P2Tiny: return "P2_TINY";
  }
  return "?";
}

inline CaseTag case_tag(const PrimeContext &F, const ExponentType &e)
{
  if (!F.odd() && e.m2 == 1)
    return e.m1 == 1 ? CaseTag::P2Tiny : CaseTag::P2Special;
  if (e.m1 > e.m2)
    return e.m2 > e.m3 ? CaseTag::Strict : CaseTag::Top;
  return e.m2 > e.m3 ? CaseTag::Bottom : CaseTag::Equal;
}

// Which masked entries survive reduction mod p, plus the p = 2 special rules.
struct ActionShape {
  bool eq12 = false, eq13 = false, eq23 = false;
  bool affine = false;    // additive correction term
  bool x11_fixed = false; // x11 = 1

  bool carries_x(int i, int j) const { return i <= j || link(i, j); }
  bool carries_x2(int i, int j) const { return i >= j || link(i, j); }
  bool link(int i, int j) const
  {
    int a = std::min(i, j), b = std::max(i, j);
    if (a == b)
      return true;
    return a == 0 ? (b == 1 ? eq12 : eq13) : eq23;
  }
  friend bool operator==(const ActionShape &, const ActionShape &) = default;
};

inline ActionShape shape_for(CaseTag t)
{
  switch (t) {
  case CaseTag::Strict: return {};
  case CaseTag::Top: return {false, false, true, false, false};
  case CaseTag::Bottom: return {true, false, false, false, false};
  case CaseTag::Equal: return {true, true, true, false, false};
  case CaseTag::P2Special: return {false, false, true, true, true};
  case CaseTag::P2Tiny: break;
  }
  throw DomainError("P2_TINY has no matrix action; use the group model");
}

// A realized transform: the pair (X, X2).
struct XPair {
  Mat3 X = Mat3::identity();
  Mat3 X2 = Mat3::identity();
  friend bool operator==(const XPair &, const XPair &) = default;
};

// (a * b) acts as b first, then a.
inline XPair compose(const PrimeContext &F, const XPair &a, const XPair &b)
{
  return {mat_mul(F, a.X, b.X), mat_mul(F, a.X2, b.X2)};
}

inline XPair pair_from_params(const ActionShape &s, const std::array<Fp, 9> &x)
{
  XPair r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      r.X(i, j) = s.carries_x(i, j) ? x[i * 3 + j] : 0;
      r.X2(i, j) = s.carries_x2(i, j) ? x[i * 3 + j] : 0;
    }
  return r;
}

inline std::array<Fp, 9> params_from_pair(const ActionShape &s, const XPair &xp)
{
  std::array<Fp, 9> x{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      x[i * 3 + j] = s.carries_x(i, j) ? xp.X(i, j) : xp.X2(i, j);
  return x;
}

inline bool valid_pair(const PrimeContext &F, const ActionShape &s, const XPair &xp)
{
  if (pair_from_params(s, params_from_pair(s, xp)) != xp)
    return false;
  if (s.x11_fixed && xp.X(0, 0) != 1)
    return false;
  return det(F, xp.X) != 0;
}

// The action itself.
inline Mat3 act(const PrimeContext &F, const ActionShape &s, const XPair &xp, const Mat3 &w)
{
  Mat3 r = mat_mul(F, mat_mul(F, xp.X2, w), transpose(xp.X));
  if (s.affine) {
    r(1, 0) = F.add(r(1, 0), F.mul(xp.X2(1, 1), xp.X2(1, 2)));
    r(2, 0) = F.add(r(2, 0), F.mul(xp.X2(2, 1), xp.X2(2, 2)));
    return r;
  }
  if (F.odd()) {
    Fp d = det(F, xp.X);
    if (d != 1)
      r = scale(F, F.inv(d), r);
  }
  return r;
}

struct CharMatrix {
  Ctx ctx;
  ExponentType et;
  Mat3 w;
};

class IsoTransform {
public:
  IsoTransform(Ctx ctx, ExponentType et, std::array<Fp, 9> params)
      : ctx_(std::move(ctx)), et_(et), params_(params)
  {
    tag_ = case_tag(*ctx_, et_);
    shape_ = shape_for(tag_);
    for (Fp &v : params_)
      v = ctx_->reduce(v);
    if (shape_.x11_fixed && params_[0] != 1)
      throw DomainError("x11 must be 1 for type (2^m1,2,2)");
    if (det(*ctx_, realize().X) == 0)
      throw DomainError("transform matrix X is singular");
  }

  static IsoTransform identity(Ctx ctx, ExponentType et)
  {
    return IsoTransform(std::move(ctx), et, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  }

  static IsoTransform from_pair(Ctx ctx, ExponentType et, const XPair &xp)
  {
    ActionShape s = shape_for(case_tag(*ctx, et));
    if (!valid_pair(*ctx, s, xp))
      throw Error("pair (X, X2) is not a valid transform for this exponent type");
    return IsoTransform(std::move(ctx), et, params_from_pair(s, xp));
  }

  XPair realize() const { return pair_from_params(shape_, params_); }
  const std::array<Fp, 9> &params() const { return params_; }
  const ExponentType &etype() const { return et_; }
  const Ctx &ctx() const { return ctx_; }
  CaseTag tag() const { return tag_; }
  const ActionShape &shape() const { return shape_; }

private:
  Ctx ctx_;
  ExponentType et_;
  std::array<Fp, 9> params_;
  CaseTag tag_;
  ActionShape shape_;
};

inline CharMatrix apply(const IsoTransform &t, const CharMatrix &w)
{
  if (t.ctx()->p() != w.ctx->p() || !(t.etype() == w.et))
    throw DomainError("transform and matrix have different contexts");
  return {w.ctx, w.et, act(*w.ctx, t.shape(), t.realize(), w.w)};
}

inline IsoTransform compose(const IsoTransform &a, const IsoTransform &b)
{
  return IsoTransform::from_pair(a.ctx(), a.etype(), compose(*a.ctx(), a.realize(), b.realize()));
}

// ---- enumeration ----

constexpr std::uint64_t kDefaultTransformCap = 100000000ULL;

inline std::uint64_t gl_order(int p, int n)
{
  std::uint64_t pn = space_size(p, n), r = 1, pk = 1;
  for (int k = 0; k < n; ++k) {
    r *= pn - pk;
    pk *= p;
  }
  return r;
}

inline std::uint64_t transform_count(const PrimeContext &F, const ExponentType &et)
{
  const std::uint64_t p = F.p();
  switch (case_tag(F, et)) {
  case CaseTag::Strict: return (p - 1) * (p - 1) * (p - 1) * space_size(F.p(), 6);
  case CaseTag::Top:
  case CaseTag::Bottom: return gl_order(F.p(), 2) * (p - 1) * space_size(F.p(), 4);
  case CaseTag::Equal: return gl_order(F.p(), 3);
  case CaseTag::P2Special: return gl_order(2, 2) * 16;
  case CaseTag::P2Tiny: break;
  }
  throw DomainError("P2_TINY has no matrix action; use the group model");
}

// Calls f on every valid transform pair exactly once; stops early if f returns false.
inline void for_each_pair(const PrimeContext &F, const ExponentType &et,
                          const std::function<bool(const XPair &)> &f,
                          std::uint64_t cap = kDefaultTransformCap)
{
  CaseTag tag = case_tag(F, et);
  ActionShape s = shape_for(tag);
  std::uint64_t n = transform_count(F, et);
  if (n > cap)
    throw InfeasibleError("transform enumeration of size " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
  const int p = F.p();
  // free parameter slots
  std::vector<int> slots;
  for (int k = 0; k < 9; ++k) {
    int i = k / 3, j = k % 3;
    if (k == 0 && s.x11_fixed)
      continue;
    if (i == j || s.carries_x(i, j) || s.carries_x2(i, j))
      slots.push_back(k);
  }
  std::array<Fp, 9> x{};
  x[0] = 1;
  std::uint64_t total = space_size(p, static_cast<int>(slots.size()));
  for (std::uint64_t c = 0; c < total; ++c) {
    std::uint64_t r = c;
    bool diag_ok = true;
    for (int k : slots) {
      x[k] = static_cast<Fp>(r % p);
      r /= p;
    }
    if (tag == CaseTag::Strict)
      diag_ok = x[0] && x[4] && x[8];
    if (!diag_ok)
      continue;
    XPair xp = pair_from_params(s, x);
    if (det(F, xp.X) == 0)
      continue;
    if (!f(xp))
      return;
  }
}

inline std::vector<IsoTransform> enumerate_transforms(Ctx ctx, const ExponentType &et,
                                                      std::uint64_t cap = kDefaultTransformCap)
{
  std::vector<IsoTransform> out;
  ActionShape s = shape_for(case_tag(*ctx, et));
  for_each_pair(*ctx, et, [&](const XPair &xp) {
    out.emplace_back(ctx, et, params_from_pair(s, xp));
    return true;
  }, cap);
  return out;
}

// Diagonal and single off-diagonal parameter transforms; they generate the group.
inline std::vector<XPair> generators(const PrimeContext &F, const ActionShape &s)
{
  std::vector<XPair> g;
  if (F.odd())
    for (int i = 0; i < 3; ++i) {
      if (i == 0 && s.x11_fixed)
        continue;
      std::array<Fp, 9> x{1, 0, 0, 0, 1, 0, 0, 0, 1};
      x[i * 4] = F.generator();
      g.push_back(pair_from_params(s, x));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j)
        continue;
      if (!s.carries_x(i, j) && !s.carries_x2(i, j))
        continue;
      std::array<Fp, 9> x{1, 0, 0, 0, 1, 0, 0, 0, 1};
      x[i * 3 + j] = 1;
      g.push_back(pair_from_params(s, x));
    }
  return g;
}

constexpr std::uint64_t kDefaultSpaceCap = 1ULL << 21;

// Orbit id (least member code) of every matrix in F_p^9.
struct OrbitPartition {
  int p = 0;
  std::vector<std::uint32_t> root; // root[c] = least code in the orbit of c
  std::int64_t orbit_count = 0;

  std::uint32_t key(std::uint64_t c) const { return root[c]; }
};

inline OrbitPartition orbit_partition(const PrimeContext &F, const ActionShape &s,
                                      std::uint64_t cap = kDefaultSpaceCap)
{
  const int p = F.p();
  const std::uint64_t n = space_size(p, 9);
  if (n > cap)
    throw InfeasibleError("orbit partition of " + std::to_string(n) + " matrices exceeds cap " +
                          std::to_string(cap));
  OrbitPartition op;
  op.p = p;
  op.root.resize(n);
  std::iota(op.root.begin(), op.root.end(), 0u);
  auto find = [&](std::uint32_t x) {
    std::uint32_t r = x;
    while (op.root[r] != r)
      r = op.root[r];
    while (op.root[x] != r) {
      std::uint32_t nx = op.root[x];
      op.root[x] = r;
      x = nx;
    }
    return r;
  };
  std::vector<XPair> gens = generators(F, s);
  for (std::uint64_t c = 0; c < n; ++c) {
    Mat3 w = decode<3>(p, c);
    for (const XPair &g : gens) {
      auto d = static_cast<std::uint32_t>(encode(p, act(F, s, g, w)));
      std::uint32_t a = find(static_cast<std::uint32_t>(c)), b = find(d);
      if (a != b) {
        if (a < b)
          op.root[b] = a;
        else
          op.root[a] = b;
      }
    }
  }
  for (std::uint64_t c = 0; c < n; ++c) {
    op.root[c] = find(static_cast<std::uint32_t>(c));
    if (op.root[c] == c)
      ++op.orbit_count;
  }
  return op;
}

// Breadth-first orbit of one matrix under the generators.
inline std::vector<Mat3> orbit_of(const PrimeContext &F, const ActionShape &s, const Mat3 &w,
                                  std::uint64_t cap = kDefaultSpaceCap)
{
  std::vector<XPair> gens = generators(F, s);
  std::unordered_set<std::uint64_t> seen{encode(F.p(), w)};
  std::vector<Mat3> out{w};
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const XPair &g : gens) {
      Mat3 v = act(F, s, g, out[k]);
      if (seen.insert(encode(F.p(), v)).second) {
        out.push_back(v);
        if (out.size() > cap)
          throw InfeasibleError("orbit exceeds cap");
      }
    }
  }
  return out;
}

inline Mat3 orbit_key(const CharMatrix &w)
{
  ActionShape s = shape_for(case_tag(*w.ctx, w.et));
  std::vector<Mat3> orb = orbit_of(*w.ctx, s, w.w);
  return *std::min_element(orb.begin(), orb.end());
}

struct SameOrbitResult {
  bool same = false;
  std::optional<IsoTransform> witness;
};

inline SameOrbitResult same_orbit(const CharMatrix &a, const CharMatrix &b,
                                  std::uint64_t cap = kDefaultTransformCap)
{
  if (a.ctx->p() != b.ctx->p() || !(a.et == b.et))
    throw DomainError("same_orbit: matrices have different contexts");
  const PrimeContext &F = *a.ctx;
  ActionShape s = shape_for(case_tag(F, a.et));
  SameOrbitResult res;
  for_each_pair(F, a.et, [&](const XPair &xp) {
    if (act(F, s, xp, a.w) == b.w) {
      res.same = true;
      res.witness = IsoTransform(a.ctx, a.et, params_from_pair(s, xp));
      return false;
    }
    return true;
  }, cap);
  return res;
}

} // namespace pgcm
