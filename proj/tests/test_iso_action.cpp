#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "pgcm/families.hpp"
#include "pgcm/iso_action.hpp"

using namespace pgcm;

namespace {

struct Case {
  int p;
  ExponentType et;
};

const std::vector<Case> &feasible_cases()
{
  static const std::vector<Case> cases{
      {2, {3, 2, 1}}, {2, {3, 2, 2}}, {2, {2, 2, 1}}, {2, {2, 2, 2}}, {2, {2, 1, 1}},
      {3, {3, 2, 1}}, {3, {2, 1, 1}}, {3, {2, 2, 1}}, {3, {1, 1, 1}},
  };
  return cases;
}

Mat3 random3(std::mt19937 &rng, int p)
{
  Mat3 A;
  for (auto &v : A.a)
    v = rng() % p;
  return A;
}

IsoTransform random_transform(std::mt19937 &rng, const Ctx &ctx, const ExponentType &et)
{
  bool special = case_tag(*ctx, et) == CaseTag::P2Special;
  for (;;) {
    std::array<Fp, 9> x;
    for (auto &v : x)
      v = rng() % ctx->p();
    if (special)
      x[0] = 1;
    try {
      return IsoTransform(ctx, et, x);
    } catch (const DomainError &) {
    }
  }
}

// det(X)^-1 X2 w X^t with plain integer loops.
Mat3 oracle_action(int p, const Mat3 &X, const Mat3 &X2, const Mat3 &w)
{
  long d = 0;
  for (int j = 0; j < 3; ++j) {
    long minor = 1L * X(1, (j + 1) % 3) * X(2, (j + 2) % 3) - 1L * X(1, (j + 2) % 3) * X(2, (j + 1) % 3);
    d += X(0, j) * minor;
  }
  d = (d % p + p) % p;
  long dinv = 1;
  for (int k = 0; k < p - 2; ++k)
    dinv = dinv * d % p;
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long s = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          s += 1L * X2(i, a) * w(a, b) * X(j, b);
      r(i, j) = static_cast<Fp>(s % p * dinv % p);
    }
  return r;
}

} // namespace

TEST(IsoAction, CaseTags)
{
  PrimeContext F2(2), F3(3);
  EXPECT_EQ(case_tag(F3, {3, 2, 1}), CaseTag::Strict);
  EXPECT_EQ(case_tag(F3, {2, 1, 1}), CaseTag::Top);
  EXPECT_EQ(case_tag(F3, {2, 2, 1}), CaseTag::Bottom);
  EXPECT_EQ(case_tag(F3, {1, 1, 1}), CaseTag::Equal);
  EXPECT_EQ(case_tag(F2, {3, 1, 1}), CaseTag::P2Special);
  EXPECT_EQ(case_tag(F2, {1, 1, 1}), CaseTag::P2Tiny);
  EXPECT_EQ(case_tag(F2, {2, 2, 1}), CaseTag::Bottom);
  EXPECT_THROW(ExponentType(1, 2, 1), DomainError);
  EXPECT_THROW(transform_count(F2, {1, 1, 1}), DomainError);
}

TEST(IsoAction, TransformCounts)
{
  auto count = [](int p, ExponentType et) {
    std::uint64_t n = 0;
    for_each_pair(PrimeContext(p), et, [&](const XPair &) { return ++n, true; });
    return n;
  };
  EXPECT_EQ(count(2, {3, 2, 1}), 64u);
  // (27-1)(27-3)(27-9)
  EXPECT_EQ(count(3, {1, 1, 1}), 26u * 24u * 18u);

  // (2^m1,2,2): x11 = 1, X carries x12, x13 and the shared block Y, X2 carries x21, x31.
  std::uint64_t by_hand = 0;
  for (int y = 0; y < 16; ++y)
    if (((y >> 3 & 1) * (y & 1) + (y >> 2 & 1) * (y >> 1 & 1)) % 2)
      by_hand += 4 * 4;
  EXPECT_EQ(by_hand, 96u);
  EXPECT_EQ(count(2, {2, 1, 1}), by_hand);
  EXPECT_EQ(transform_count(PrimeContext(2), {3, 1, 1}), by_hand);

  for (const Case &c : feasible_cases()) {
    PrimeContext F(c.p);
    std::set<std::pair<Mat3, Mat3>> distinct;
    for_each_pair(F, c.et, [&](const XPair &xp) {
      EXPECT_TRUE(valid_pair(F, shape_for(case_tag(F, c.et)), xp));
      distinct.insert({xp.X, xp.X2});
      return true;
    });
    EXPECT_EQ(distinct.size(), transform_count(F, c.et)) << c.p << " " << c.et.str();
  }
  EXPECT_THROW(for_each_pair(PrimeContext(7), {1, 1, 1}, [](const XPair &) { return true; }, 1000),
               InfeasibleError);
}

TEST(IsoAction, RealizeMasks)
{
  Ctx f3 = make_context(3);
  std::array<Fp, 9> x{1, 2, 0, 2, 1, 1, 1, 0, 1};
  IsoTransform eq(f3, {1, 1, 1}, x);
  EXPECT_EQ(eq.realize().X, eq.realize().X2);

  IsoTransform st(f3, {3, 2, 1}, {1, 0, 0, 2, 1, 0, 0, 0, 1});
  EXPECT_EQ(st.realize().X(1, 0), 0);
  EXPECT_EQ(st.realize().X2(1, 0), 2);

  Ctx f2 = make_context(2);
  IsoTransform sp(f2, {2, 1, 1}, {1, 1, 1, 1, 1, 1, 1, 0, 1});
  XPair r = sp.realize();
  EXPECT_EQ(r.X, parse_matrix<3>(*f2, "1,1,1;0,1,1;0,0,1"));
  EXPECT_EQ(r.X2, parse_matrix<3>(*f2, "1,0,0;1,1,1;1,0,1"));
  EXPECT_THROW(IsoTransform(f2, {2, 1, 1}, {0, 1, 0, 0, 1, 0, 0, 0, 1}), DomainError);
  EXPECT_THROW(IsoTransform(f3, {1, 1, 1}, {1, 1, 0, 1, 1, 0, 0, 0, 1}), DomainError);
}

TEST(IsoAction, SpecialCorrection)
{
  Ctx f2 = make_context(2);
  ExponentType et(2, 1, 1);
  IsoTransform t(f2, et, {1, 0, 0, 0, 1, 1, 0, 0, 1});
  CharMatrix w{f2, et, Mat3{}};
  EXPECT_EQ(apply(t, w).w, parse_matrix<3>(*f2, "0,0,0;1,0,0;0,0,0"));
  EXPECT_EQ(rank(*f2, apply(t, w).w), 1);
}

TEST(IsoAction, StrictScalingExample)
{
  Ctx f3 = make_context(3);
  ExponentType et(3, 2, 1);
  Mat3 b18 = parse_matrix<3>(*f3, "0,0,0;0,0,1;0,1,0");
  IsoTransform t(f3, et, {1, 0, 0, 0, 1, 0, 0, 0, 2});
  Mat3 D = Mat3::diag({1, 1, 2});
  Mat3 expect = oracle_action(3, D, D, b18);
  EXPECT_EQ(apply(t, {f3, et, b18}).w, expect);
  // 2^-1 * [[0,0,0],[0,0,2],[0,2,0]] = B18 itself
  EXPECT_EQ(expect, b18);
}

TEST(IsoAction, SameOrbitExamples)
{
  Ctx f3 = make_context(3);
  ExponentType et(1, 1, 1);
  CharMatrix I{f3, et, Mat3::identity()};
  auto self = same_orbit(I, I);
  EXPECT_TRUE(self.same);
  ASSERT_TRUE(self.witness);
  EXPECT_EQ(apply(*self.witness, I).w, I.w);

  auto d = same_orbit(I, {f3, et, Mat3::diag({1, 1, 2})});
  EXPECT_TRUE(d.same);
  EXPECT_EQ(apply(*d.witness, I).w, Mat3::diag({1, 1, 2}));

  FamilyLabel k1{"K1"};
  k1.nu = 1;
  Mat3 a = family_matrix(*f3, k1);
  k1.nu = f3->eta();
  Mat3 b = family_matrix(*f3, k1);
  EXPECT_FALSE(same_orbit({f3, et, a}, {f3, et, b}).same);
  EXPECT_NE(orbit_key({f3, et, a}), orbit_key({f3, et, b}));
}

TEST(IsoActionProperty, ActionLawAndScalars)
{
  std::mt19937 rng(5);
  for (const Case &c : feasible_cases()) {
    Ctx ctx = make_context(c.p);
    ActionShape s = shape_for(case_tag(*ctx, c.et));
    OrbitPartition part = orbit_partition(*ctx, s);
    for (int k = 0; k < 10000; ++k) {
      CharMatrix w{ctx, c.et, random3(rng, c.p)};
      IsoTransform t1 = random_transform(rng, ctx, c.et), t2 = random_transform(rng, ctx, c.et);
      CharMatrix v = apply(t2, apply(t1, w));
      ASSERT_EQ(part.key(encode(c.p, v.w)), part.key(encode(c.p, w.w)));
      ASSERT_EQ(apply(IsoTransform::identity(ctx, c.et), w).w, w.w);
      if (!s.affine) {
        ASSERT_EQ(apply(compose(t2, t1), w).w, v.w);
        ASSERT_EQ(rank(*ctx, v.w), rank(*ctx, w.w));
        XPair r = t1.realize();
        if (c.p > 2)
          ASSERT_EQ(apply(t1, w).w, oracle_action(c.p, r.X, r.X2, w.w));
      }
    }
  }
  // p = 5 without a full partition: composition and rank
  Ctx f5 = make_context(5);
  for (ExponentType et : {ExponentType(3, 2, 1), ExponentType(2, 1, 1), ExponentType(2, 2, 1), ExponentType(1, 1, 1)})
    for (int k = 0; k < 10000; ++k) {
      CharMatrix w{f5, et, random3(rng, 5)};
      IsoTransform t1 = random_transform(rng, f5, et), t2 = random_transform(rng, f5, et);
      CharMatrix v = apply(t2, apply(t1, w));
      ASSERT_EQ(apply(compose(t2, t1), w).w, v.w);
      ASSERT_EQ(rank(*f5, v.w), rank(*f5, w.w));
      Fp l = 1 + rng() % 4;
      IsoTransform lam(f5, et, {l, 0, 0, 0, l, 0, 0, 0, l});
      ASSERT_EQ(apply(lam, w).w, scale(*f5, f5->inv(l), w.w));
    }
}

TEST(IsoActionProperty, OrbitSizesAndGeneratorClosure)
{
  for (const Case &c : feasible_cases()) {
    PrimeContext F(c.p);
    ActionShape s = shape_for(case_tag(F, c.et));
    OrbitPartition part = orbit_partition(F, s);
    std::map<std::uint32_t, std::uint64_t> sizes;
    for (std::uint64_t code = 0; code < part.root.size(); ++code)
      ++sizes[part.key(code)];
    std::uint64_t total = 0;
    for (auto &[k, n] : sizes)
      total += n;
    EXPECT_EQ(total, space_size(c.p, 9));
    EXPECT_EQ(static_cast<std::int64_t>(sizes.size()), part.orbit_count);

    if (c.p == 2) {
      // every enumerated transform keeps each matrix inside its generator-closure orbit,
      // and a direct image sweep from each root reaches the whole orbit
      std::vector<XPair> all;
      for_each_pair(F, c.et, [&](const XPair &xp) { return all.push_back(xp), true; });
      for (std::uint64_t code = 0; code < 512; ++code) {
        Mat3 w = decode<3>(2, code);
        std::set<std::uint64_t> img;
        for (const XPair &xp : all) {
          Mat3 v = act(F, s, xp, w);
          ASSERT_EQ(part.key(encode(2, v)), part.key(code));
          img.insert(encode(2, v));
        }
        ASSERT_EQ(img.size(), sizes[part.key(code)]) << c.et.str() << " " << format_matrix(w);
      }
    }
  }
}

TEST(IsoActionProperty, InversesExist)
{
  std::mt19937 rng(9);
  for (const Case &c : feasible_cases()) {
    Ctx ctx = make_context(c.p);
    ActionShape s = shape_for(case_tag(*ctx, c.et));
    std::vector<XPair> all;
    for_each_pair(*ctx, c.et, [&](const XPair &xp) { return all.push_back(xp), true; });
    int trials = c.p == 2 ? static_cast<int>(all.size()) : 200;
    for (int k = 0; k < trials; ++k) {
      const XPair &t = c.p == 2 ? all[k] : all[rng() % all.size()];
      int words = c.p == 2 ? 512 : 1;
      for (int j = 0; j < words; ++j) {
        Mat3 w = c.p == 2 ? decode<3>(2, j) : random3(rng, c.p);
        Mat3 v = act(*ctx, s, t, w);
        bool back = std::any_of(all.begin(), all.end(), [&](const XPair &u) { return act(*ctx, s, u, v) == w; });
        ASSERT_TRUE(back) << c.et.str() << " " << format_matrix(w);
      }
    }
  }
}

TEST(IsoActionProperty, PartitionMatchesPairwiseSameOrbit)
{
  std::mt19937 rng(13);
  for (const Case &c : feasible_cases()) {
    Ctx ctx = make_context(c.p);
    OrbitPartition part = orbit_partition(*ctx, shape_for(case_tag(*ctx, c.et)));
    std::vector<Mat3> sample;
    for (int k = 0; k < 200; ++k)
      sample.push_back(random3(rng, c.p));
    for (int k = 0; k + 1 < 200; k += 2) {
      // pair each matrix with both a random partner and an image under a random transform
      Mat3 a = sample[k], b = sample[k + 1];
      Mat3 img = apply(random_transform(rng, ctx, c.et), {ctx, c.et, a}).w;
      for (const Mat3 &other : {b, img}) {
        bool same = same_orbit({ctx, c.et, a}, {ctx, c.et, other}).same;
        ASSERT_EQ(same, part.key(encode(c.p, a)) == part.key(encode(c.p, other)));
      }
      ASSERT_EQ(orbit_key({ctx, c.et, a}), decode<3>(c.p, part.key(encode(c.p, a))));
    }
  }
}
