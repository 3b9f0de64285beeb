// Acceptance run: one PASS/FAIL line per criterion, exact equality throughout.

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "pgcm/pgcm.hpp"

using namespace pgcm;

namespace {

struct Criterion {
  int id;
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string &what)
  {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void report() const
  {
    for (const auto &n : notes)
      std::cout << "    " << n << "\n";
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "\n" << std::flush;
  }
};

std::string str(std::int64_t a) { return std::to_string(a); }

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
    if (det(*ctx, pair_from_params(shape_for(case_tag(*ctx, et)), x).X))
      return IsoTransform(ctx, et, x);
  }
}

Criterion pair_transversals()
{
  Criterion c{1};
  for (int p : {2, 3, 5, 7, 11, 13})
    for (auto rel : {PairRelation::Congruence, PairRelation::Subcongruence}) {
      VerificationReport r = verify_pair_transversal(PrimeContext(p), rel);
      c.check(r.ok() && r.orbit_count == r.expected_count,
              r.subject + ": " + str(r.orbit_count) + " orbits, " + str(r.expected_count) + " representatives");
    }
  return c;
}

Criterion transversals()
{
  Criterion c{2};
  struct Item {
    int p;
    ExponentType et;
    std::int64_t required; // -1: the family count
  };
  const Item items[] = {
      {3, {3, 2, 1}, -1}, {3, {2, 1, 1}, -1}, {3, {2, 2, 1}, -1}, {3, {1, 1, 1}, -1},
      {5, {3, 2, 1}, -1}, {5, {2, 1, 1}, -1}, {5, {2, 2, 1}, -1},
      {2, {3, 2, 1}, -1}, {2, {3, 2, 2}, -1}, {2, {2, 2, 1}, -1},
      {2, {2, 1, 1}, 23}, {2, {2, 2, 2}, 12},
  };
  for (const Item &it : items) {
    VerificationReport r = verify_transversal(make_context(it.p), it.et);
    std::int64_t want = it.required < 0 ? r.expected_count : it.required;
    bool ok = r.ok() && r.orbit_count == want && r.expected_count == want;
    std::string what = r.subject + ": " + str(r.orbit_count) + " orbits, " + str(r.expected_count) +
                       " families, required " + str(want);
    if (!r.ok())
      what += "; " + r.violations[0].matrix + " " + r.violations[0].detail;
    c.check(ok, what);
  }
  return c;
}

Criterion tiny_classes()
{
  Criterion c{3};
  VerificationReport r = verify_transversal(make_context(2), {1, 1, 1});
  c.check(r.ok() && r.orbit_count == 10,
          "512 matrices at p=2, m=(1,1,1): " + str(r.orbit_count) + " isomorphism classes, each matching one presentation");
  return c;
}

Criterion invariant_cross_check()
{
  Criterion c{4};
  struct Item {
    int p;
    ExponentType et;
  };
  for (Item it : {Item{2, {2, 1, 1}}, Item{3, {1, 1, 1}}, Item{2, {1, 1, 1}}}) {
    Ctx ctx = make_context(it.p);
    int families = 0, agree = 0;
    std::string bad;
    for (const FamilyLabel &l : enumerate_families(*ctx, it.et)) {
      ++families;
      CharMatrix w = representative(ctx, it.et, l);
      TableValues t = table_values(*ctx, it.et, l);
      InvariantReport o = invariants(w, Method::Oracle);
      bool ok = t.i_min == std::set<int>{o.i_min} && t.i_max == std::set<int>{o.i_max};
      InvariantReport s = invariants(w, Method::OrbitSearch);
      ok = ok && s.i_min == o.i_min && s.i_max == o.i_max;
      if (ok)
        ++agree;
      else
        bad += " " + to_string(*ctx, l);
    }
    c.check(agree == families, "p=" + str(it.p) + " m=(" + it.et.str() + "): table = oracle = orbit search for " +
                                   str(agree) + "/" + str(families) + " families" + bad);
  }
  return c;
}

Criterion metahamiltonian_check()
{
  Criterion c{5};
  Ctx f2 = make_context(2), f3 = make_context(3);
  ExponentType tiny(1, 1, 1);
  std::string full_true;
  bool implies = true;
  for (int k = 1; k <= 10; ++k) {
    Group G({f2, tiny, representative(f2, tiny, {"S" + str(k)}).w});
    bool full = metahamiltonian_oracle(G, MetaMode::Full);
    if (full) {
      full_true += " S" + str(k);
      implies = implies && metahamiltonian_oracle(G, MetaMode::Necessary);
    }
  }
  c.check(full_true == " S10", "FULL at order 64 true for:" + full_true);
  c.check(implies, "FULL implies NECESSARY on S1..S10");

  struct Inst {
    int p;
    ExponentType et;
    const char *label;
    bool expect;
  };
  const Inst insts[] = {
      {3, {2, 1, 1}, "D3[nu=1]", true},  {3, {2, 1, 1}, "D4[r=1]", true},
      {2, {3, 2, 2}, "D7", true},        {2, {2, 1, 1}, "M3", true},
      {3, {2, 2, 1}, "G3[nu=1]", true},  {3, {2, 2, 1}, "G4[r=1]", true},
      {2, {2, 2, 1}, "G7", true},
      {2, {3, 2, 1}, "A1[nu1=1,nu2=1]", false}, {2, {3, 2, 1}, "A2[t=1]", false},
      {3, {2, 1, 1}, "D2[nu=1]", false}, {3, {2, 1, 1}, "D2[nu=eta]", false},
      {2, {3, 2, 2}, "D6", false},       {2, {2, 1, 1}, "M2", false},
  };
  for (const Inst &in : insts) {
    Ctx ctx = in.p == 2 ? f2 : f3;
    CharMatrix w = representative(ctx, in.et, parse_label(*ctx, in.label));
    Group G({ctx, in.et, w.w}, kOracleOrderCap);
    bool got = metahamiltonian_oracle(G, MetaMode::Necessary);
    c.check(got == in.expect, std::string("NECESSARY ") + in.label + " p=" + str(in.p) + " m=(" + in.et.str() +
                                  ") -> " + (got ? "true" : "false"));
  }
  return c;
}

Criterion end_to_end()
{
  Criterion c{6};
  std::mt19937 rng(2024);
  Ctx f2 = make_context(2);
  for (ExponentType et : {ExponentType(2, 1, 1), ExponentType(2, 2, 1)}) {
    int agree = 0, iso = 0;
    std::string bad;
    for (int k = 0; k < 100; ++k) {
      CharMatrix a{f2, et, random3(rng, 2)}, b{f2, et, random3(rng, 2)};
      bool so = same_orbit(a, b).same;
      bool bi = brute_isomorphic(Group({f2, et, a.w}), Group({f2, et, b.w})).isomorphic;
      iso += bi;
      if (so == bi)
        ++agree;
      else
        bad += " [" + format_matrix(a.w) + " | " + format_matrix(b.w) + "]";
    }
    c.check(agree == 100, "m=(" + et.str() + "): same_orbit = brute_isomorphic on " + str(agree) +
                              "/100 random pairs (" + str(iso) + " isomorphic)" + bad);
  }
  return c;
}

Criterion properties()
{
  Criterion c{7};
  std::mt19937 rng(7);

  // field
  bool euler = true;
  for (int p = 3; p <= 100; ++p) {
    if (!is_prime(p))
      continue;
    PrimeContext F(p);
    for (Fp a = 1; a < p; ++a)
      euler = euler && F.is_square(a) == (F.pow(a, (p - 1) / 2) == 1) && F.mul(a, F.inv(a)) == 1;
  }
  c.check(euler, "Euler criterion and inverses for p <= 100");

  // matrices
  bool adj = true;
  PrimeContext F2(2);
  for (std::uint64_t code = 0; code < 512; ++code) {
    Mat3 A = decode<3>(2, code);
    adj = adj && mat_mul(F2, A, adjugate3(F2, A)) == scale(F2, det(F2, A), Mat3::identity());
  }
  for (int p : {3, 5, 7}) {
    PrimeContext F(p);
    for (int k = 0; k < 10000; ++k) {
      Mat3 A = random3(rng, p);
      Mat3 dI = scale(F, det(F, A), Mat3::identity());
      adj = adj && mat_mul(F, A, adjugate3(F, A)) == dI && mat_mul(F, adjugate3(F, A), A) == dI;
    }
  }
  c.check(adj, "adjugate identity exhaustive over F_2, 10^4 samples for p = 3, 5, 7");

  // pair forms
  bool pairs = true;
  for (int p : {3, 5, 7, 11}) {
    PrimeContext F(p);
    for (auto rel : {PairRelation::Congruence, PairRelation::Subcongruence}) {
      for (const PairLabel &l : pair_transversal(F, rel))
        pairs = pairs && canonical_pair(F, pair_representative(F, l), rel).label == l;
      for (int k = 0; k < 1000; ++k) {
        Mat2 A;
        for (auto &v : A.a)
          v = rng() % p;
        Mat2 P;
        do {
          for (auto &v : P.a)
            v = rng() % p;
        } while (!det(F, P));
        Fp lambda = rel == PairRelation::Subcongruence ? 1 + rng() % (p - 1) : 1;
        PairResult r = canonical_pair(F, A, rel);
        pairs = pairs && pair_apply(F, A, r.P, r.lambda) == r.representative &&
                canonical_pair(F, pair_apply(F, A, P, lambda), rel).label == r.label &&
                rank(F, A) == rank(F, r.representative);
      }
    }
  }
  c.check(pairs, "pair canonical forms: idempotent, sound, orbit invariant");

  // action law, rank invariance, classify orbit invariance
  struct Case {
    int p;
    ExponentType et;
  };
  const Case cases[] = {{2, {3, 2, 1}}, {2, {3, 2, 2}}, {2, {2, 2, 1}}, {2, {2, 2, 2}}, {2, {2, 1, 1}},
                        {3, {3, 2, 1}}, {3, {2, 1, 1}}, {3, {2, 2, 1}}, {3, {1, 1, 1}},
                        {5, {3, 2, 1}}, {5, {2, 1, 1}}, {5, {2, 2, 1}}, {5, {1, 1, 1}}};
  for (const Case &cs : cases) {
    Ctx ctx = make_context(cs.p);
    ActionShape s = shape_for(case_tag(*ctx, cs.et));
    std::optional<OrbitPartition> part;
    if (cs.p < 5)
      part = orbit_partition(*ctx, s);
    bool law = true, cls = true;
    for (int k = 0; k < 10000; ++k) {
      CharMatrix w{ctx, cs.et, random3(rng, cs.p)};
      IsoTransform t1 = random_transform(rng, ctx, cs.et), t2 = random_transform(rng, ctx, cs.et);
      CharMatrix v = apply(t2, apply(t1, w));
      if (part)
        law = law && part->key(encode(cs.p, v.w)) == part->key(encode(cs.p, w.w));
      if (!s.affine)
        law = law && apply(compose(t2, t1), w).w == v.w && rank(*ctx, v.w) == rank(*ctx, w.w);
      ClassifyResult a = classify(w);
      cls = cls && apply(a.witness, w).w == a.representative.w && classify(v).label == a.label;
    }
    std::string where = std::string(to_string(case_tag(*ctx, cs.et))) + " p=" + str(cs.p) + " m=(" + cs.et.str() + ")";
    c.check(law, "action law " + where);
    c.check(cls, "classify orbit invariance on 10^4 samples, " + where);
  }

  // invariant bounds and metahamiltonian values
  bool bounds = true;
  for (int p : {2, 3, 5, 7})
    for (ExponentType et : {ExponentType(3, 2, 1), ExponentType(2, 1, 1), ExponentType(2, 2, 1), ExponentType(1, 1, 1),
                            ExponentType(2, 2, 2), ExponentType(3, 2, 2), ExponentType(4, 3, 1)}) {
      for (const PropertyRow &r : property_table(PrimeContext(p), et)) {
        bool ok = r.i_min && r.i_max && *r.i_min >= et.m3 && *r.i_min <= et.m3 + 2 && *r.i_max >= et.m1 &&
                  *r.i_max <= et.m1 + 2;
        if (ok && r.metahamiltonian)
          ok = *r.i_min == et.m3 && *r.i_max == et.m1;
        bounds = bounds && ok;
      }
    }
  c.check(bounds, "table invariants within bounds; metahamiltonian rows have (m3, m1)");

  // group model
  bool groups = true;
  Ctx f2 = make_context(2), f3 = make_context(3);
  for (std::uint64_t code = 0; code < 512; code += 5)
    groups = groups && verify_consistency(Group({f2, {1, 1, 1}, decode<3>(2, code)})).ok();
  for (int k = 0; k < 5; ++k)
    groups = groups && verify_consistency(Group({f3, {2, 1, 1}, random3(rng, 3)}), 7, 20000).ok();
  c.check(groups, "group presentations consistent");
  return c;
}

} // namespace

int main()
{
  std::vector<Criterion> all;
  auto run = [&](Criterion (*f)()) {
    Stopwatch sw;
    Criterion c = f();
    c.notes.push_back("time " + std::to_string(static_cast<int>(sw.seconds())) + " s");
    c.report();
    all.push_back(c);
  };
  run(pair_transversals);
  run(transversals);
  run(tiny_classes);
  run(invariant_cross_check);
  run(metahamiltonian_check);
  run(end_to_end);
  run(properties);
  int failed = 0;
  for (const auto &c : all)
    failed += !c.pass;
  std::cout << (all.size() - failed) << "/" << all.size() << " criteria pass\n";
  return failed ? 1 : 0;
}
