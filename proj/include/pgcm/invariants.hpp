#pragma once

// Minimal and maximal index of A1-subgroups, and metahamiltonicity, per family.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "classifier.hpp"
#include "families.hpp"
#include "group_model.hpp"
#include "iso_action.hpp"

namespace pgcm {

// The coset-pair oracle never enumerates G itself.
constexpr std::uint64_t kOracleOrderCap = 1ULL << 24;

enum class Method { Table, OrbitSearch, Oracle };

inline const char *to_string(Method m)
{
  switch (m) {
  case Method::Table: return "TABLE";
  case Method::OrbitSearch: return "ORBIT_SEARCH";
  case Method::Oracle: return "ORACLE";
  }
  return "?";
}

inline Method parse_method(std::string_view s)
{
  if (s == "TABLE" || s == "table")
    return Method::Table;
  if (s == "ORBIT_SEARCH" || s == "orbit_search" || s == "orbit")
    return Method::OrbitSearch;
  if (s == "ORACLE" || s == "oracle")
    return Method::Oracle;
  throw ParseError("unknown method '" + std::string(s) + "'");
}

struct InvariantReport {
  int i_min = 0;
  int i_max = 0;
  bool metahamiltonian = false;
  Method method = Method::Table;
  // orbit members realizing the deciding condition (ORBIT_SEARCH only)
  std::optional<Mat3> imin_witness, imax_witness;
};

namespace detail {

enum class Cond {
  Always,
  M12,          // m1 = m2 + 1
  NotM12,
  NegNuSq,      // -nu a square
  NegNuNonSq,
  NegRSq,
  NegRNonSq,
  M12NegNuSq,
  NotM12OrNegNuNonSq,
  M12NegRSq,
  NotM12OrNegRNonSq,
  M1is2,
  M1above2,
};

struct PropertyRule {
  const char *first, *last;
  bool max;   // false: I_min, true: I_max
  int offset; // I_min - m3 or I_max - m1
  Cond cond;
};

// Rows of the property theorems; ranges are inclusive within one letter.
inline const std::vector<PropertyRule> &property_rules()
{
  using C = Cond;
  static const std::vector<PropertyRule> rules = {
      // m1 > m2 > m3
      {"A1", "A6", false, 0, C::Always}, {"B1", "B4", false, 0, C::Always},
      {"B15", "B16", false, 0, C::Always}, {"B5", "B14", false, 1, C::Always},
      {"B17", "B18", false, 1, C::Always}, {"C1", "C6", false, 1, C::Always},
      {"C7", "C10", false, 2, C::Always},
      {"B13", "B16", true, 2, C::Always}, {"C1", "C4", true, 2, C::Always},
      {"C9", "C10", true, 2, C::Always},
      {"A3", "A6", true, 1, C::Always}, {"B1", "B12", true, 1, C::Always},
      {"B18", "B18", true, 1, C::M12}, {"C5", "C8", true, 1, C::Always},
      {"A1", "A2", true, 0, C::Always}, {"B17", "B17", true, 0, C::Always},
      {"B18", "B18", true, 0, C::NotM12},
      // m1 > m2 = m3
      {"D2", "D4", false, 0, C::Always}, {"D6", "D9", false, 0, C::Always},
      {"E8", "E9", false, 0, C::Always}, {"E12", "E15", false, 0, C::Always},
      {"D1", "D1", false, 1, C::Always}, {"D5", "D5", false, 1, C::Always},
      {"E1", "E7", false, 1, C::Always}, {"E10", "E11", false, 1, C::Always},
      {"F1", "F4", false, 1, C::Always}, {"F6", "F6", false, 1, C::Always},
      {"F5", "F5", false, 2, C::Always},
      {"E14", "E15", true, 2, C::Always}, {"F1", "F1", true, 2, C::Always},
      {"F4", "F6", true, 2, C::Always},
      {"D8", "D9", true, 1, C::Always}, {"E1", "E2", true, 1, C::M12},
      {"E3", "E3", true, 1, C::M12NegNuSq}, {"E4", "E4", true, 1, C::M12NegRSq},
      {"E5", "E6", true, 1, C::M12}, {"E8", "E13", true, 1, C::Always},
      {"F2", "F3", true, 1, C::Always},
      {"D1", "D7", true, 0, C::Always}, {"E1", "E2", true, 0, C::NotM12},
      {"E3", "E3", true, 0, C::NotM12OrNegNuNonSq}, {"E4", "E4", true, 0, C::NotM12OrNegRNonSq},
      {"E5", "E6", true, 0, C::NotM12}, {"E7", "E7", true, 0, C::Always},
      // m1 = m2 > m3
      {"G1", "G9", false, 0, C::Always}, {"H1", "H7", false, 0, C::Always},
      {"H12", "H13", false, 0, C::Always}, {"H8", "H11", false, 1, C::Always},
      {"H14", "H15", false, 1, C::Always}, {"I2", "I3", false, 1, C::Always},
      {"I6", "I6", false, 1, C::Always}, {"I1", "I1", false, 2, C::Always},
      {"I4", "I5", false, 2, C::Always},
      {"H1", "H2", true, 2, C::Always}, {"H3", "H3", true, 2, C::NegNuSq},
      {"H4", "H4", true, 2, C::NegRSq}, {"H5", "H6", true, 2, C::Always},
      {"H10", "H10", true, 2, C::Always}, {"H13", "H13", true, 2, C::Always},
      {"H15", "H15", true, 2, C::Always}, {"I2", "I6", true, 2, C::Always},
      {"G1", "G2", true, 1, C::Always}, {"G3", "G3", true, 1, C::NegNuSq},
      {"G4", "G4", true, 1, C::NegRSq}, {"G5", "G6", true, 1, C::Always},
      {"G8", "G9", true, 1, C::Always}, {"H3", "H3", true, 1, C::NegNuNonSq},
      {"H4", "H4", true, 1, C::NegRNonSq}, {"H7", "H9", true, 1, C::Always},
      {"H11", "H12", true, 1, C::Always}, {"H14", "H14", true, 1, C::Always},
      {"I1", "I1", true, 1, C::Always},
      {"G3", "G3", true, 0, C::NegNuNonSq}, {"G4", "G4", true, 0, C::NegRNonSq},
      {"G7", "G7", true, 0, C::Always},
      // m1 = m2 = m3, odd p
      {"J1", "J5", false, 0, C::Always}, {"K1", "K6", false, 0, C::Always},
      {"L2", "L3", false, 1, C::Always}, {"L1", "L1", false, 2, C::Always},
      {"K1", "K1", true, 2, C::NegNuSq}, {"K3", "K5", true, 2, C::Always},
      {"K6", "K6", true, 2, C::NegRSq}, {"L1", "L3", true, 2, C::Always},
      {"J1", "J5", true, 1, C::Always}, {"K1", "K1", true, 1, C::NegNuNonSq},
      {"K2", "K2", true, 1, C::Always}, {"K6", "K6", true, 1, C::NegRNonSq},
      // p = 2, (2^m1, 2, 2)
      {"M2", "M7", false, 0, C::Always}, {"N5", "N6", false, 0, C::Always},
      {"N10", "N10", false, 0, C::Always}, {"N12", "N13", false, 0, C::Always},
      {"M1", "M1", false, 1, C::Always}, {"N1", "N4", false, 1, C::Always},
      {"N7", "N9", false, 1, C::Always}, {"N11", "N11", false, 1, C::Always},
      {"O1", "O3", false, 1, C::Always},
      {"N11", "N13", true, 2, C::Always}, {"O1", "O3", true, 2, C::Always},
      {"M4", "M7", true, 1, C::Always}, {"N1", "N2", true, 1, C::M1is2},
      {"N4", "N10", true, 1, C::Always},
      {"N1", "N2", true, 0, C::M1above2}, {"N3", "N3", true, 0, C::Always},
      {"M1", "M3", true, 0, C::Always},
      // p = 2, m1 = m2 = m3 > 1
      {"P1", "P4", false, 0, C::Always}, {"Q1", "Q5", false, 0, C::Always},
      {"R1", "R2", false, 1, C::Always}, {"R3", "R3", false, 2, C::Always},
      {"Q1", "Q2", true, 2, C::Always}, {"Q5", "Q5", true, 2, C::Always},
      {"R1", "R3", true, 2, C::Always},
      {"P1", "P4", true, 1, C::Always}, {"Q3", "Q4", true, 1, C::Always},
      // p = 2, (2, 2, 2): I_min = 1 for all
      {"S1", "S10", false, 0, C::Always},
      {"S1", "S2", true, 2, C::Always}, {"S5", "S6", true, 2, C::Always},
      {"S3", "S4", true, 1, C::Always}, {"S7", "S9", true, 1, C::Always},
      {"S10", "S10", true, 0, C::Always},
  };
  return rules;
}

inline bool in_range(std::string_view fam, std::string_view first, std::string_view last)
{
  if (fam[0] != first[0])
    return false;
  int n = std::stoi(std::string(fam.substr(1)));
  return n >= std::stoi(std::string(first.substr(1))) && n <= std::stoi(std::string(last.substr(1)));
}

inline bool holds(const PrimeContext &F, const ExponentType &et, const FamilyLabel &l, Cond c)
{
  const bool m12 = et.m1 == et.m2 + 1;
  auto neg_sq = [&](const std::optional<Fp> &v) {
    if (!v)
      throw Error("property row needs a parameter the label lacks");
    return F.is_square(F.neg(*v));
  };
  switch (c) {
  case Cond::Always: return true;
  case Cond::M12: return m12;
  case Cond::NotM12: return !m12;
  case Cond::NegNuSq: return neg_sq(l.nu);
  case Cond::NegNuNonSq: return !neg_sq(l.nu);
  case Cond::NegRSq: return neg_sq(l.r);
  case Cond::NegRNonSq: return !neg_sq(l.r);
  case Cond::M12NegNuSq: return m12 && neg_sq(l.nu);
  case Cond::NotM12OrNegNuNonSq: return !m12 || !neg_sq(l.nu);
  case Cond::M12NegRSq: return m12 && neg_sq(l.r);
  case Cond::NotM12OrNegRNonSq: return !m12 || !neg_sq(l.r);
  case Cond::M1is2: return et.m1 == 2;
  case Cond::M1above2: return et.m1 > 2;
  }
  return false;
}

} // namespace detail

/// Every value the property tables assign to (label, et). An empty set means the
/// tables are silent; two values mean they contradict each other.
struct TableValues {
  std::set<int> i_min, i_max;
};

inline TableValues table_values(const PrimeContext &F, const ExponentType &et, const FamilyLabel &l)
{
  TableValues v;
  for (const auto &r : detail::property_rules())
    if (detail::in_range(l.family, r.first, r.last) && detail::holds(F, et, l, r.cond))
      (r.max ? v.i_max : v.i_min).insert(r.offset + (r.max ? et.m1 : et.m3));
  return v;
}

/// Families whose groups are metahamiltonian.
inline bool metahamiltonian(const PrimeContext &F, const FamilyLabel &l, const ExponentType &et)
{
  const std::string &f = l.family;
  auto neg_nonsq = [&](const std::optional<Fp> &v) { return v && !F.is_square(F.neg(*v)); };
  const bool top_pattern = et.m1 == et.m2 + 1 && et.m2 == et.m3;
  const bool bottom_pattern = et.m1 == et.m2 && et.m2 == et.m3 + 1;
  if (f == "D3")
    return top_pattern && neg_nonsq(l.nu);
  if (f == "D4")
    return top_pattern && neg_nonsq(l.r);
  if (f == "D7")
    return top_pattern;
  if (f == "M3")
    return et.m1 == 2;
  if (f == "G3")
    return bottom_pattern && neg_nonsq(l.nu);
  if (f == "G4")
    return bottom_pattern && neg_nonsq(l.r);
  if (f == "G7")
    return bottom_pattern;
  return f == "S10";
}

namespace detail {

inline bool top_left_invertible(const PrimeContext &F, const Mat3 &w)
{
  return F.sub(F.mul(w(0, 0), w(1, 1)), F.mul(w(0, 1), w(1, 0))) != 0;
}

inline int block_rank(const PrimeContext &F, const Mat3 &w, int r0, int r1, int c0, int c1)
{
  Mat2 B;
  B.a = {w(r0, c0), w(r0, c1), w(r1, c0), w(r1, c1)};
  return rank(F, B);
}

// Matrices to quantify over: the orbit, or the isomorphism class for (2,2,2).
inline std::vector<Mat3> search_space(const CharMatrix &w, std::uint64_t cap)
{
  const PrimeContext &F = *w.ctx;
  CaseTag tag = case_tag(F, w.et);
  if (tag != CaseTag::P2Tiny)
    return orbit_of(F, shape_for(tag), w.w, cap);
  const TinyTable &tab = tiny_table();
  int k = tab.label_of[encode(2, w.w)];
  std::vector<Mat3> out;
  for (std::uint64_t c = 0; c < 512; ++c)
    if (tab.label_of[c] == k)
      out.push_back(decode<3>(2, c));
  return out;
}

} // namespace detail

/// I_min and I_max by the existential criteria over all characteristic matrices of the group.
inline InvariantReport orbit_search(const CharMatrix &w, std::uint64_t cap = kDefaultSpaceCap)
{
  const PrimeContext &F = *w.ctx;
  const ExponentType &et = w.et;
  std::vector<Mat3> orbit = detail::search_space(w, cap);
  InvariantReport rep;
  rep.method = Method::OrbitSearch;

  const Mat3 *inv_tl = nullptr, *rank1_tl = nullptr, *rank2 = nullptr;
  const Mat3 *zero_br = nullptr, *rank1_br = nullptr, *zero_corner = nullptr;
  for (const Mat3 &v : orbit) {
    if (!inv_tl && detail::top_left_invertible(F, v))
      inv_tl = &v;
    if (!rank1_tl && detail::block_rank(F, v, 0, 1, 0, 1) == 1)
      rank1_tl = &v;
    if (!rank2 && rank(F, v) >= 2)
      rank2 = &v;
    int br = detail::block_rank(F, v, 1, 2, 1, 2);
    if (!zero_br && br == 0)
      zero_br = &v;
    if (!rank1_br && br == 1)
      rank1_br = &v;
    if (!zero_corner && !v(0, 0) && !v(0, 2) && !v(2, 0) && !v(2, 2))
      zero_corner = &v;
  }
  if (inv_tl) {
    rep.i_min = et.m3;
    rep.imin_witness = *inv_tl;
  } else if (rank2) {
    rep.i_min = et.m3 + 1;
    rep.imin_witness = *rank2;
  } else if (rank1_tl) {
    rep.i_min = et.m3 + 1;
    rep.imin_witness = *rank1_tl;
  } else {
    rep.i_min = et.m3 + 2;
  }
  if (zero_br) {
    rep.i_max = et.m1 + 2;
    rep.imax_witness = *zero_br;
  } else if (rank1_br) {
    rep.i_max = et.m1 + 1;
    rep.imax_witness = *rank1_br;
  } else if (et.m1 == et.m2 + 1 && zero_corner) {
    rep.i_max = et.m1 + 1;
    rep.imax_witness = *zero_corner;
  } else {
    rep.i_max = et.m1;
  }
  return rep;
}

inline FamilyLabel label_of(const CharMatrix &w)
{
  if (case_tag(*w.ctx, w.et) == CaseTag::P2Tiny)
    return classify_tiny(w);
  return classify(w).label;
}

/// Values for one matrix by the requested method.
inline InvariantReport invariants(const CharMatrix &w, Method method, std::uint64_t cap = kDefaultSpaceCap)
{
  const PrimeContext &F = *w.ctx;
  FamilyLabel l = label_of(w);
  InvariantReport rep;
  switch (method) {
  case Method::Table: {
    TableValues v = table_values(F, w.et, l);
    if (v.i_min.size() != 1 || v.i_max.size() != 1)
      throw DomainError("property tables give no single value for " + to_string(F, l) + " at m=(" +
                        w.et.str() + ")");
    rep.i_min = *v.i_min.begin();
    rep.i_max = *v.i_max.begin();
    break;
  }
  case Method::OrbitSearch: rep = orbit_search(w, cap); break;
  case Method::Oracle: {
    Group G({w.ctx, w.et, w.w}, kOracleOrderCap);
    IndexRange r = G.order() <= kSubgroupOrderCap ? a1_index_range(G) : a1_index_range_fast(G);
    rep.i_min = r.i_min;
    rep.i_max = r.i_max;
    break;
  }
  }
  rep.method = method;
  rep.metahamiltonian = metahamiltonian(F, l, w.et);
  return rep;
}

inline int imin(const CharMatrix &w, Method m) { return invariants(w, m).i_min; }
inline int imax(const CharMatrix &w, Method m) { return invariants(w, m).i_max; }

struct PropertyRow {
  FamilyLabel label;
  ExponentType et;
  std::optional<int> i_min, i_max; // empty when the tables are silent or contradictory
  bool metahamiltonian = false;
  Method method = Method::Table;
};

/// One row per enumerated family, from the property tables.
inline std::vector<PropertyRow> property_table(const PrimeContext &F, const ExponentType &et)
{
  std::vector<PropertyRow> rows;
  for (const FamilyLabel &l : enumerate_families(F, et)) {
    TableValues v = table_values(F, et, l);
    PropertyRow r{l, et, {}, {}, metahamiltonian(F, l, et), Method::Table};
    if (v.i_min.size() == 1)
      r.i_min = *v.i_min.begin();
    if (v.i_max.size() == 1)
      r.i_max = *v.i_max.begin();
    rows.push_back(r);
  }
  return rows;
}

} // namespace pgcm
