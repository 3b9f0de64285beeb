#include <gtest/gtest.h>

#include <map>
#include <random>

#include "pgcm/pgcm.hpp"

using namespace pgcm;

namespace {

struct Case {
  int p;
  ExponentType et;
};

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

std::string label(const ClassifyResult &r, const Ctx &ctx) { return to_string(*ctx, r.label); }

} // namespace

TEST(Classifier, Examples)
{
  Ctx f3 = make_context(3), f5 = make_context(5);
  CharMatrix I{f3, {1, 1, 1}, Mat3::identity()};
  EXPECT_EQ(label(classify(I), f3), "J1");
  EXPECT_EQ(label(classify({f5, {3, 2, 1}, Mat3{}}), f5), "C10");
  CharMatrix b{f3, {3, 2, 1}, parse_matrix<3>(*f3, "0,0,0;0,0,1;0,2,0")};
  ClassifyResult r = classify(b);
  EXPECT_EQ(label(r, f3), "B18[t=2]");
  EXPECT_EQ(apply(r.witness, b).w, r.representative.w);
  EXPECT_EQ(label(classify({f5, {2, 2, 2}, Mat3{}}), f5), "L1");
}

TEST(Classifier, RepresentativeExamples)
{
  Ctx f3 = make_context(3);
  FamilyLabel b18{"B18"};
  b18.t = 1;
  EXPECT_EQ(representative(f3, {3, 2, 1}, b18).w, parse_matrix<3>(*f3, "0,0,0;0,0,1;0,1,0"));
  EXPECT_EQ(representative(f3, {1, 1, 1}, {"J2"}).w, parse_matrix<3>(*f3, "1,0,0;0,0,1;0,2,0"));
  EXPECT_EQ(representative(f3, {1, 1, 1}, {"L1"}).w, Mat3{});
  EXPECT_THROW(representative(f3, {1, 1, 1}, {"B18"}), DomainError);
}

TEST(Classifier, TinyExamples)
{
  Ctx f2 = make_context(2);
  ExponentType et(1, 1, 1);
  EXPECT_EQ(classify_tiny({f2, et, Mat3{}}).family, "S1");

  // the identity matrix: find its class by trying every presentation directly
  Group G({f2, et, Mat3::identity()});
  std::string expect;
  for (int k = 1; k <= 10; ++k) {
    CharMatrix s = representative(f2, et, {"S" + std::to_string(k)});
    if (brute_isomorphic(G, Group({f2, et, s.w})).isomorphic) {
      EXPECT_TRUE(expect.empty());
      expect = "S" + std::to_string(k);
    }
  }
  EXPECT_EQ(classify_tiny({f2, et, Mat3::identity()}).family, expect);
  EXPECT_THROW(classify({f2, et, Mat3{}}), DomainError);
  EXPECT_THROW(classify_tiny({make_context(3), et, Mat3{}}), DomainError);
}

TEST(Classifier, IdempotentOnRepresentatives)
{
  std::vector<Case> cases;
  for (int p : {2, 3, 5, 7})
    for (ExponentType et : {ExponentType(3, 2, 1), ExponentType(2, 1, 1), ExponentType(2, 2, 1),
                            ExponentType(1, 1, 1), ExponentType(4, 2, 1), ExponentType(3, 3, 1)})
      if (!(p == 2 && et == ExponentType(1, 1, 1)))
        cases.push_back({p, et});
  cases.push_back({2, {3, 2, 2}});
  cases.push_back({2, {2, 2, 2}});
  for (const Case &c : cases) {
    Ctx ctx = make_context(c.p);
    for (const FamilyLabel &l : enumerate_families(*ctx, c.et)) {
      if (c.p == 2 && l.family == "N10")
        continue; // lies in the orbit of M7, see SpecialTypeMergedPair
      CharMatrix w = representative(ctx, c.et, l);
      ClassifyResult r = classify(w);
      EXPECT_EQ(r.label, l) << c.p << " " << c.et.str() << " " << to_string(*ctx, l);
      EXPECT_EQ(r.representative.w, w.w);
    }
  }
}

TEST(Classifier, OrbitInvariance)
{
  std::mt19937 rng(21);
  std::vector<Case> cases{{2, {3, 2, 1}}, {2, {3, 2, 2}}, {2, {2, 2, 1}}, {2, {2, 2, 2}}, {2, {2, 1, 1}},
                          {3, {3, 2, 1}}, {3, {2, 1, 1}}, {3, {2, 2, 1}}, {3, {1, 1, 1}},
                          {5, {3, 2, 1}}, {5, {2, 1, 1}}, {5, {2, 2, 1}}, {5, {1, 1, 1}},
                          {7, {4, 2, 1}}, {7, {3, 1, 1}}, {7, {2, 2, 1}}, {7, {2, 2, 2}}};
  for (const Case &c : cases) {
    Ctx ctx = make_context(c.p);
    for (int k = 0; k < 10000; ++k) {
      CharMatrix w{ctx, c.et, random3(rng, c.p)};
      ClassifyResult a = classify(w);
      ASSERT_EQ(apply(a.witness, w).w, a.representative.w);
      ASSERT_EQ(representative(ctx, c.et, a.label).w, a.representative.w);
      CharMatrix v = apply(random_transform(rng, ctx, c.et), w);
      ASSERT_EQ(classify(v).label, a.label) << c.p << " " << c.et.str() << " " << format_matrix(w.w);
    }
  }
}

TEST(Classifier, TopBottomMirror)
{
  // families of the two mixed cases correspond position by position
  for (int p : {2, 3, 5, 7}) {
    PrimeContext F(p);
    ExponentType top = p == 2 ? ExponentType(3, 2, 2) : ExponentType(2, 1, 1), bottom(2, 2, 1);
    auto a = enumerate_families(F, top), b = enumerate_families(F, bottom);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(b[i].family.substr(1), a[i].family.substr(1));
      EXPECT_EQ(b[i].family[0] - a[i].family[0], 3) << b[i].family << " " << a[i].family;
    }
  }
  // every BOTTOM matrix at p=3 lands in G/H/I
  Ctx f3 = make_context(3);
  std::map<char, int> letters;
  for (std::uint64_t c = 0; c < 19683; ++c)
    ++letters[classify({f3, {2, 2, 1}, decode<3>(3, c)}).label.family[0]];
  EXPECT_EQ(letters.size(), 3u);
  EXPECT_GT(letters['G'], 0);
  EXPECT_GT(letters['H'], 0);
  EXPECT_GT(letters['I'], 0);
}

TEST(Classifier, TransversalsSmallPrimes)
{
  for (Case c : {Case{3, {3, 2, 1}}, Case{3, {2, 1, 1}}, Case{3, {2, 2, 1}}, Case{3, {1, 1, 1}},
                 Case{2, {3, 2, 1}}, Case{2, {3, 2, 2}}, Case{2, {2, 2, 1}}, Case{2, {2, 2, 2}}}) {
    VerificationReport rep = verify_transversal(make_context(c.p), c.et);
    EXPECT_TRUE(rep.ok()) << rep.subject << ": " << (rep.ok() ? "" : rep.violations[0].detail);
    EXPECT_EQ(rep.orbit_count, rep.expected_count);
  }
  EXPECT_THROW(verify_transversal(make_context(7), {1, 1, 1}), InfeasibleError);
}

TEST(Classifier, SpecialTypeMergedPair)
{
  // At p=2, m=(2,1,1) the listed representatives M7 and N10 give isomorphic groups.
  Ctx f2 = make_context(2);
  ExponentType et(2, 1, 1);
  Mat3 m7 = representative(f2, et, {"M7"}).w, n10 = representative(f2, et, {"N10"}).w;
  EXPECT_TRUE(same_orbit({f2, et, m7}, {f2, et, n10}).same);

  // explicit images of M7's generators inside G(N10): b1=a1, b2=a1^2 a3, b3=a1^2 a2 a3
  Group B({f2, et, n10});
  GroupElement a1 = B.gen(0), a2 = B.gen(1), a3 = B.gen(2);
  GroupElement sq = B.mul(a1, a1);
  std::array<GroupElement, 3> b{a1, B.mul(sq, a3), B.mul(B.mul(sq, a2), a3)};
  std::array<GroupElement, 3> c{B.comm(b[1], b[2]), B.comm(b[2], b[0]), B.comm(b[0], b[1])};
  const long long mod[3] = {4, 2, 2};
  for (int k = 0; k < 3; ++k) {
    GroupElement rhs = B.element(0);
    for (int j = 0; j < 3; ++j)
      if (m7(k, j))
        rhs = B.mul(rhs, c[j]);
    EXPECT_EQ(B.pow(b[k], mod[k]), rhs) << k;
  }
  EXPECT_EQ(subgroup_closure(B, {b[0], b[1], b[2]}).order(), B.order());
  EXPECT_TRUE(brute_isomorphic(Group({f2, et, m7}), B).isomorphic);

  const auto &tab = detail::p2_table(CaseTag::P2Special);
  ASSERT_EQ(tab.merged.size(), 1u);
  EXPECT_EQ(tab.labels[tab.merged[0].first].family, "N10");
  EXPECT_EQ(tab.labels[tab.merged[0].second].family, "M7");
  EXPECT_EQ(classify({f2, et, n10}).label.family, "M7");

  VerificationReport rep = verify_transversal(f2, et);
  EXPECT_EQ(rep.orbit_count, 22);
  EXPECT_EQ(rep.expected_count, 23);
}
